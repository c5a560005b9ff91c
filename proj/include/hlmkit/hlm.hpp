#pragma once

// Performance cubes and the Human Learning Matching (HLM) index.
//
// Cube CSV (header required):
//   task,criterion,model,train_level,eval_level,metric,value,higher_is_better
// train_level is easy|medium|hard; eval_level is easy|medium|hard|full.
// HLM uses the eval_level = "full" rows: one triplet per (task, criterion,
// model) holding the full-test-set performance of the models trained on the
// easy, medium and hard portions.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hlmkit/io.hpp"

namespace hlmkit {

enum class Level { Easy = 0, Medium = 1, Hard = 2 };

inline constexpr std::array<Level, 3> kLevels = {Level::Easy, Level::Medium, Level::Hard};

inline std::string_view to_string(Level level) {
  switch (level) {
    case Level::Easy: return "easy";
    case Level::Medium: return "medium";
    case Level::Hard: return "hard";
  }
  return "unknown";
}

inline Level parse_level(std::string_view s) {
  for (const auto l : kLevels) {
    if (to_string(l) == s) return l;
  }
  throw Error(ErrorCode::ValidationError, "unknown difficulty level '" + std::string(s) + "'");
}

inline constexpr std::string_view kFullEvalLevel = "full";

struct CubeKey {
  std::string task;
  std::string criterion;
  std::string model;
  Level train_level = Level::Easy;
  std::string eval_level;

  auto operator<=>(const CubeKey&) const = default;
};

struct Measurement {
  std::string metric;
  double value = 0.0;
  bool higher_is_better = true;
};

struct PerformanceTriplet {
  double easy = 0.0;
  double medium = 0.0;
  double hard = 0.0;
  bool higher_is_better = true;
};

/// Sparse map of (task, criterion, model, train level, eval level) -> metric.
/// Axis labels are remembered in first-seen order for reporting.
class PerformanceCube {
 public:
  void add(const CubeKey& key, const Measurement& m) {
    if (!std::isfinite(m.value)) throw Error(ErrorCode::ValidationError, "non-finite metric value");
    if (key.task.empty() || key.criterion.empty() || key.model.empty()) {
      throw Error(ErrorCode::ValidationError, "task, criterion and model must be non-empty");
    }
    if (key.eval_level != kFullEvalLevel) parse_level(key.eval_level);
    if (!entries_.emplace(key, m).second) {
      throw Error(ErrorCode::ValidationError, "duplicate cube entry " + describe(key));
    }
    remember(tasks_, key.task);
    remember(criteria_, key.criterion);
    remember(models_, key.model);
  }

  std::optional<Measurement> find(const CubeKey& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// The three train-level measurements at `eval_level`, or nullopt if any is
  /// absent. Mixed metric directions are a validation error.
  std::optional<PerformanceTriplet> triplet(const std::string& task, const std::string& criterion,
                                            const std::string& model,
                                            std::string_view eval_level = kFullEvalLevel) const {
    std::array<std::optional<Measurement>, 3> found;
    for (const auto l : kLevels) {
      found[static_cast<std::size_t>(l)] =
          find(CubeKey{task, criterion, model, l, std::string(eval_level)});
    }
    for (const auto& f : found) {
      if (!f) return std::nullopt;
    }
    const bool hib = found[0]->higher_is_better;
    if (found[1]->higher_is_better != hib || found[2]->higher_is_better != hib) {
      throw Error(ErrorCode::ValidationError,
                  "mixed metric directions in " + task + "/" + criterion + "/" + model);
    }
    return PerformanceTriplet{found[0]->value, found[1]->value, found[2]->value, hib};
  }

  /// True if any train level has an entry at `eval_level` for the group.
  bool has_any(const std::string& task, const std::string& criterion, const std::string& model,
               std::string_view eval_level) const {
    return std::any_of(kLevels.begin(), kLevels.end(), [&](Level l) {
      return entries_.count(CubeKey{task, criterion, model, l, std::string(eval_level)}) > 0;
    });
  }

  const std::map<CubeKey, Measurement>& entries() const { return entries_; }
  const std::vector<std::string>& tasks() const { return tasks_; }
  const std::vector<std::string>& criteria() const { return criteria_; }
  const std::vector<std::string>& models() const { return models_; }
  std::size_t size() const { return entries_.size(); }

  static std::string describe(const CubeKey& k) {
    return "(" + k.task + ", " + k.criterion + ", " + k.model + ", " +
           std::string(to_string(k.train_level)) + ", " + k.eval_level + ")";
  }

 private:
  static void remember(std::vector<std::string>& labels, const std::string& label) {
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
  }

  std::map<CubeKey, Measurement> entries_;
  std::vector<std::string> tasks_;
  std::vector<std::string> criteria_;
  std::vector<std::string> models_;
};

inline constexpr std::string_view kCubeHeader =
    "task,criterion,model,train_level,eval_level,metric,value,higher_is_better";

inline PerformanceCube parse_cube(std::istream& in) {
  PerformanceCube cube;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = io::strip_cr(line);
    if (io::is_blank(text)) continue;
    if (!header_seen) {
      auto fields = io::split_csv_line(text);
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        joined += (i ? "," : "") + io::trim_ascii(fields[i]);
      }
      if (joined != kCubeHeader) {
        throw Error(ErrorCode::ParseError,
                    io::at_line(line_no) + ": expected header '" + std::string(kCubeHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = io::split_csv_line(text);
    if (f.size() != 8) {
      throw Error(ErrorCode::ParseError, io::at_line(line_no) + ": expected 8 fields, got " +
                                             std::to_string(f.size()));
    }
    try {
      CubeKey key{io::trim_ascii(f[0]), io::trim_ascii(f[1]), io::trim_ascii(f[2]),
                  parse_level(io::trim_ascii(f[3])), io::trim_ascii(f[4])};
      Measurement m{io::trim_ascii(f[5]), io::parse_double(f[6], line_no, "value"),
                    io::parse_bool(f[7], line_no, "higher_is_better")};
      cube.add(key, m);
    } catch (const Error& e) {
      if (e.detail().rfind("line ", 0) == 0) throw;
      throw e.with_context(io::at_line(line_no));
    }
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "cube CSV is empty (header required)");
  return cube;
}

inline PerformanceCube read_cube(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return parse_cube(in);
}

// ---------------------------------------------------------------------------
// Scoring

enum class StdDivisor { Population, Sample };

struct HlmConfig {
  StdDivisor divisor = StdDivisor::Population;
  std::string eval_level = std::string(kFullEvalLevel);
};

/// Ordering score of a triplet: cases are tried top to bottom after mapping
/// to higher-is-better, and an exact three-way tie scores 0.
inline double logical_score(const PerformanceTriplet& t) {
  const double sign = t.higher_is_better ? 1.0 : -1.0;
  const double e = sign * t.easy;
  const double m = sign * t.medium;
  const double h = sign * t.hard;
  if (e == m && m == h) return 0.0;
  if (e >= m && m >= h) return 0.75;
  if (e >= h && h >= m) return 0.375;
  if (m >= h && h >= e) return 0.0;
  if (m >= e && e >= h) return 0.0;
  if (h >= e && e >= m) return -0.375;
  return -0.75;  // h >= m >= e
}

/// Standard deviation of the raw (unnormalized) values.
inline double triplet_std(const PerformanceTriplet& t, StdDivisor divisor = StdDivisor::Population) {
  const double mean = (t.easy + t.medium + t.hard) / 3.0;
  const double ss = (t.easy - mean) * (t.easy - mean) + (t.medium - mean) * (t.medium - mean) +
                    (t.hard - mean) * (t.hard - mean);
  return std::sqrt(ss / (divisor == StdDivisor::Population ? 3.0 : 2.0));
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double sgn(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

/// s + 0.25 * sgn(s) * sigmoid(STD). The exact value never reaches +-1, but
/// for STD above ~36 the nearest double is 1.0; those results are rounded
/// toward zero instead so the open bound holds.
inline double cell_value(const PerformanceTriplet& t, const HlmConfig& cfg = {}) {
  const double s = logical_score(t);
  if (s == 0.0) return 0.0;
  const double magnitude = std::abs(s) + 0.25 * sigmoid(triplet_std(t, cfg.divisor));
  return sgn(s) * std::min(magnitude, std::nextafter(1.0, 0.0));
}

struct CellBreakdown {
  std::string task;
  std::string criterion;
  std::string model;
  PerformanceTriplet triplet;
  double logical = 0.0;
  double std_dev = 0.0;
  double sigmoid_term = 0.0;
  double value = 0.0;
};

enum class Axis { Model, Task, Criterion };

inline std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::Model: return "model";
    case Axis::Task: return "task";
    case Axis::Criterion: return "criterion";
  }
  return "unknown";
}

inline Axis parse_axis(std::string_view s) {
  for (const auto a : {Axis::Model, Axis::Task, Axis::Criterion}) {
    if (to_string(a) == s) return a;
  }
  throw Error(ErrorCode::ValidationError, "unknown axis '" + std::string(s) + "'");
}

inline const std::string& axis_label(const CellBreakdown& c, Axis axis) {
  switch (axis) {
    case Axis::Model: return c.model;
    case Axis::Task: return c.task;
    case Axis::Criterion: return c.criterion;
  }
  return c.model;
}

struct HlmCells {
  std::vector<CellBreakdown> cells;
  std::vector<std::string> warnings;
};

/// Every complete (task, criterion, model) triplet in the cube. Groups with
/// only some train levels present are skipped and reported.
inline HlmCells hlm_cells(const PerformanceCube& cube, const HlmConfig& cfg = {}) {
  HlmCells out;
  for (const auto& task : cube.tasks()) {
    for (const auto& criterion : cube.criteria()) {
      for (const auto& model : cube.models()) {
        const auto t = cube.triplet(task, criterion, model, cfg.eval_level);
        if (!t) {
          if (cube.has_any(task, criterion, model, cfg.eval_level)) {
            out.warnings.push_back("incomplete triplet skipped: " + task + "/" + criterion + "/" + model);
          }
          continue;
        }
        CellBreakdown c{task, criterion, model, *t};
        c.logical = logical_score(*t);
        c.std_dev = triplet_std(*t, cfg.divisor);
        c.sigmoid_term = sigmoid(c.std_dev);
        c.value = cell_value(*t, cfg);
        out.cells.push_back(std::move(c));
      }
    }
  }
  return out;
}

/// Mean cell value over the cells whose `axis` label equals `key`.
inline double index(const std::vector<CellBreakdown>& cells, Axis axis, const std::string& key) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : cells) {
    if (axis_label(c, axis) == key) {
      sum += c.value;
      ++n;
    }
  }
  if (n == 0) {
    throw Error(ErrorCode::MissingKey, "no cells for " + std::string(to_string(axis)) + " '" + key + "'");
  }
  return sum / static_cast<double>(n);
}

inline double index(const PerformanceCube& cube, Axis axis, const std::string& key,
                    const HlmConfig& cfg = {}) {
  return index(hlm_cells(cube, cfg).cells, axis, key);
}

struct IndexValue {
  std::string key;
  double value = 0.0;
  std::size_t cells = 0;
};

struct HlmReport {
  std::vector<CellBreakdown> cells;
  std::vector<IndexValue> models;
  std::vector<IndexValue> tasks;
  std::vector<IndexValue> criteria;
  std::vector<std::string> warnings;
  StdDivisor divisor = StdDivisor::Population;
};

inline HlmReport build_hlm_report(const PerformanceCube& cube, const HlmConfig& cfg = {}) {
  auto [cells, warnings] = hlm_cells(cube, cfg);
  if (cells.empty()) throw Error(ErrorCode::MissingKey, "cube has no complete triplets");

  HlmReport report;
  report.divisor = cfg.divisor;
  auto labels_of = [&](Axis axis) {
    std::vector<std::string> labels;
    for (const auto& c : cells) {
      const auto& l = axis_label(c, axis);
      if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    }
    return labels;
  };
  const auto tasks = labels_of(Axis::Task);
  const auto criteria = labels_of(Axis::Criterion);
  const auto models = labels_of(Axis::Model);

  std::set<std::tuple<std::string, std::string, std::string>> present;
  for (const auto& c : cells) present.emplace(c.task, c.criterion, c.model);
  for (const auto& t : tasks) {
    for (const auto& c : criteria) {
      for (const auto& m : models) {
        if (!present.count({t, c, m})) {
          warnings.push_back("missing cell excluded from averages: " + t + "/" + c + "/" + m);
        }
      }
    }
  }

  auto fill = [&](Axis axis, const std::vector<std::string>& labels, std::vector<IndexValue>& dst) {
    for (const auto& l : labels) {
      const auto n = static_cast<std::size_t>(std::count_if(
          cells.begin(), cells.end(), [&](const auto& c) { return axis_label(c, axis) == l; }));
      dst.push_back({l, index(cells, axis, l), n});
    }
  };
  fill(Axis::Model, models, report.models);
  fill(Axis::Task, tasks, report.tasks);
  fill(Axis::Criterion, criteria, report.criteria);
  report.cells = std::move(cells);
  report.warnings = std::move(warnings);
  return report;
}

inline json to_json(const HlmReport& r) {
  auto indices = [](const std::vector<IndexValue>& v) {
    json arr = json::array();
    for (const auto& x : v) arr.push_back({{"key", x.key}, {"value", x.value}, {"cells", x.cells}});
    return arr;
  };
  json cells = json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"task", c.task},
                     {"criterion", c.criterion},
                     {"model", c.model},
                     {"p_easy", c.triplet.easy},
                     {"p_medium", c.triplet.medium},
                     {"p_hard", c.triplet.hard},
                     {"higher_is_better", c.triplet.higher_is_better},
                     {"s", c.logical},
                     {"std", c.std_dev},
                     {"sigmoid", c.sigmoid_term},
                     {"value", c.value}});
  }
  return json{{"std_divisor", r.divisor == StdDivisor::Population ? "population" : "sample"},
              {"I_model", indices(r.models)},
              {"I_task", indices(r.tasks)},
              {"I_criteria", indices(r.criteria)},
              {"cells", std::move(cells)},
              {"warnings", r.warnings}};
}

inline HlmReport hlm_report_from_json(const json& j) {
  try {
    HlmReport r;
    r.divisor = j.at("std_divisor").get<std::string>() == "sample" ? StdDivisor::Sample
                                                                    : StdDivisor::Population;
    auto indices = [](const json& arr) {
      std::vector<IndexValue> v;
      for (const auto& x : arr) {
        v.push_back({x.at("key").get<std::string>(), x.at("value").get<double>(),
                     x.at("cells").get<std::size_t>()});
      }
      return v;
    };
    r.models = indices(j.at("I_model"));
    r.tasks = indices(j.at("I_task"));
    r.criteria = indices(j.at("I_criteria"));
    for (const auto& c : j.at("cells")) {
      CellBreakdown cell;
      cell.task = c.at("task").get<std::string>();
      cell.criterion = c.at("criterion").get<std::string>();
      cell.model = c.at("model").get<std::string>();
      cell.triplet = {c.at("p_easy").get<double>(), c.at("p_medium").get<double>(),
                      c.at("p_hard").get<double>(), c.at("higher_is_better").get<bool>()};
      cell.logical = c.at("s").get<double>();
      cell.std_dev = c.at("std").get<double>();
      cell.sigmoid_term = c.at("sigmoid").get<double>();
      cell.value = c.at("value").get<double>();
      r.cells.push_back(std::move(cell));
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("HLM report JSON: ") + e.what());
  }
}

/// Heatmap matrix: one row per (model, criterion), one column per task, plus
/// the row mean. Empty fields mark missing cells.
inline std::string heatmap_csv(const HlmReport& r) {
  std::vector<std::string> tasks;
  for (const auto& t : r.tasks) tasks.push_back(t.key);
  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "model,criterion";
  for (const auto& t : tasks) out << ',' << t;
  out << ",mean\n";
  for (const auto& m : r.models) {
    for (const auto& c : r.criteria) {
      out << m.key << ',' << c.key;
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& t : tasks) {
        out << ',';
        for (const auto& cell : r.cells) {
          if (cell.model == m.key && cell.criterion == c.key && cell.task == t) {
            out << cell.value;
            sum += cell.value;
            ++n;
          }
        }
      }
      out << ',';
      if (n > 0) out << sum / static_cast<double>(n);
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace hlmkit
