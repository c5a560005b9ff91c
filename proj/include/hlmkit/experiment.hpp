#pragma once

// Curriculum schedules, convergence ratios of training logs, and
// difficulty-transfer scores.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "hlmkit/hlm.hpp"
#include "hlmkit/io.hpp"
#include "hlmkit/splitkit.hpp"

namespace hlmkit {

/// SplitMix64 (Steele, Lea & Flood 2014). The seed is the whole state, so a
/// seed gives the same stream on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) by Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates driven by SplitMix64; unlike std::shuffle the result does not
/// depend on the standard library implementation.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

enum class ScheduleOrder { EasyToHard, HardToEasy, Random };

inline std::string_view to_string(ScheduleOrder o) {
  switch (o) {
    case ScheduleOrder::EasyToHard: return "easy_to_hard";
    case ScheduleOrder::HardToEasy: return "hard_to_easy";
    case ScheduleOrder::Random: return "random";
  }
  return "unknown";
}

inline ScheduleOrder parse_schedule_order(std::string_view s) {
  for (const auto o : {ScheduleOrder::EasyToHard, ScheduleOrder::HardToEasy, ScheduleOrder::Random}) {
    if (to_string(o) == s) return o;
  }
  throw Error(ErrorCode::ValidationError, "unknown schedule order '" + std::string(s) + "'");
}

struct Schedule {
  ScheduleOrder order = ScheduleOrder::EasyToHard;
  std::uint64_t seed = 0;
  std::vector<std::string> sequence;
  std::array<std::size_t, 2> phase_boundaries{};
};

/// Phases keep the within-level order of the split. A random schedule is a
/// single phase, so its boundaries are both the sequence length.
inline Schedule make_schedule(const DifficultySplit& split, ScheduleOrder order,
                              std::uint64_t seed = 0) {
  Schedule s;
  s.order = order;
  s.seed = order == ScheduleOrder::Random ? seed : 0;
  auto append = [&](const std::vector<std::string>& ids) {
    s.sequence.insert(s.sequence.end(), ids.begin(), ids.end());
  };
  switch (order) {
    case ScheduleOrder::EasyToHard:
    case ScheduleOrder::Random:
      append(split.easy);
      append(split.medium);
      append(split.hard);
      s.phase_boundaries = {split.easy.size(), split.easy.size() + split.medium.size()};
      break;
    case ScheduleOrder::HardToEasy:
      append(split.hard);
      append(split.medium);
      append(split.easy);
      s.phase_boundaries = {split.hard.size(), split.hard.size() + split.medium.size()};
      break;
  }
  if (order == ScheduleOrder::Random) {
    seeded_shuffle(s.sequence, seed);
    s.phase_boundaries = {s.sequence.size(), s.sequence.size()};
  }
  return s;
}

inline json to_json(const Schedule& s) {
  return json{{"order", to_string(s.order)},
              {"seed", s.seed},
              {"sequence", s.sequence},
              {"phase_boundaries", s.phase_boundaries}};
}

// ---------------------------------------------------------------------------
// Convergence

struct LogEntry {
  std::int64_t step = 0;
  double value = 0.0;
};

struct TrainingLog {
  std::vector<LogEntry> steps;
  bool higher_is_better = true;
};

inline void validate(const TrainingLog& log) {
  if (log.steps.size() < 2) throw Error(ErrorCode::ValidationError, "training log needs >= 2 entries");
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    if (log.steps[i].step <= 0) throw Error(ErrorCode::ValidationError, "steps must be positive");
    if (!std::isfinite(log.steps[i].value)) {
      throw Error(ErrorCode::ValidationError, "non-finite metric in training log");
    }
    if (i > 0 && log.steps[i].step <= log.steps[i - 1].step) {
      throw Error(ErrorCode::ValidationError, "steps must be strictly increasing");
    }
  }
}

struct Convergence {
  double ratio = 1.0;
  std::int64_t convergent_step = 0;
  std::int64_t total_steps = 0;
  double best = 0.0;
};

/// The convergent step is the first step whose metric lies within
/// epsilon_rel * |best| of the best value in the log.
inline Convergence measure_convergence(const TrainingLog& log, double epsilon_rel = 0.001) {
  validate(log);
  if (!(epsilon_rel > 0.0 && epsilon_rel < 1.0)) {
    throw Error(ErrorCode::ValidationError, "epsilon_rel must be in (0, 1)");
  }
  double best = log.steps.front().value;
  for (const auto& e : log.steps) {
    best = log.higher_is_better ? std::max(best, e.value) : std::min(best, e.value);
  }
  const double tolerance = epsilon_rel * std::abs(best);
  Convergence c;
  c.best = best;
  c.total_steps = log.steps.back().step;
  for (const auto& e : log.steps) {
    if (std::abs(e.value - best) <= tolerance) {
      c.convergent_step = e.step;
      break;
    }
  }
  c.ratio = static_cast<double>(c.convergent_step) / static_cast<double>(c.total_steps);
  return c;
}

inline double convergence_ratio(const TrainingLog& log, double epsilon_rel = 0.001) {
  return measure_convergence(log, epsilon_rel).ratio;
}

/// CSV with header "step,value".
inline TrainingLog parse_training_log(std::istream& in, bool higher_is_better) {
  TrainingLog log;
  log.higher_is_better = higher_is_better;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = io::strip_cr(line);
    if (io::is_blank(text)) continue;
    const auto f = io::split_csv_line(text);
    if (!header_seen) {
      if (f.size() != 2 || io::trim_ascii(f[0]) != "step" || io::trim_ascii(f[1]) != "value") {
        throw Error(ErrorCode::ParseError, io::at_line(line_no) + ": expected header 'step,value'");
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 2) throw Error(ErrorCode::ParseError, io::at_line(line_no) + ": expected 2 fields");
    const double step = io::parse_double(f[0], line_no, "step");
    if (step != std::floor(step)) {
      throw Error(ErrorCode::ParseError, io::at_line(line_no) + ": step must be an integer");
    }
    log.steps.push_back({static_cast<std::int64_t>(step), io::parse_double(f[1], line_no, "value")});
  }
  try {
    validate(log);
  } catch (const Error& e) {
    throw e.with_context("training log");
  }
  return log;
}

inline TrainingLog read_training_log(const std::filesystem::path& path, bool higher_is_better) {
  auto in = io::open_input(path);
  return parse_training_log(in, higher_is_better);
}

// ---------------------------------------------------------------------------
// Transfer

/// cells[train][eval]; columns (fixed eval level) sum to 6 on complete data.
struct TransferMatrix {
  std::array<std::array<double, 3>, 3> cells{};
  std::array<std::size_t, 3> groups_per_column{};
  std::vector<std::string> warnings;

  double at(Level train, Level eval) const {
    return cells[static_cast<std::size_t>(train)][static_cast<std::size_t>(eval)];
  }
  double column_sum(Level eval) const {
    double s = 0.0;
    for (const auto t : kLevels) s += at(t, eval);
    return s;
  }
};

/// 3/2/1 points to the best/middle/worst of three values (direction-aware);
/// tied values share the mean of their points.
inline std::array<double, 3> rank_points(const std::array<double, 3>& values, bool higher_is_better) {
  std::array<double, 3> points{};
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t better = 0;
    std::size_t tied = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j == i) continue;
      const bool j_better = higher_is_better ? values[j] > values[i] : values[j] < values[i];
      if (j_better) ++better;
      else if (values[j] == values[i]) ++tied;
    }
    // Positions better+1 .. better+1+tied share points 3-(pos-1).
    double sum = 0.0;
    for (std::size_t k = 0; k <= tied; ++k) sum += 3.0 - static_cast<double>(better + k);
    points[i] = sum / static_cast<double>(tied + 1);
  }
  return points;
}

/// Rank the three train levels inside each (task, criterion, model, eval level)
/// column and average the points over groups. `model_filter` restricts to one
/// model when non-empty. Groups lacking any of the nine cells are skipped.
inline TransferMatrix transfer_scores(const PerformanceCube& cube, const std::string& model_filter = {}) {
  TransferMatrix out;
  for (const auto& task : cube.tasks()) {
    for (const auto& criterion : cube.criteria()) {
      for (const auto& model : cube.models()) {
        if (!model_filter.empty() && model != model_filter) continue;
        std::array<std::optional<PerformanceTriplet>, 3> columns;
        bool complete = true;
        bool any = false;
        for (const auto eval : kLevels) {
          const auto t = cube.triplet(task, criterion, model, to_string(eval));
          any = any || cube.has_any(task, criterion, model, to_string(eval));
          if (!t) complete = false;
          columns[static_cast<std::size_t>(eval)] = t;
        }
        if (!complete) {
          if (any) out.warnings.push_back("incomplete transfer group skipped: " + task + "/" + criterion + "/" + model);
          continue;
        }
        for (const auto eval : kLevels) {
          const auto& t = *columns[static_cast<std::size_t>(eval)];
          const auto pts = rank_points({t.easy, t.medium, t.hard}, t.higher_is_better);
          const auto e = static_cast<std::size_t>(eval);
          for (std::size_t train = 0; train < 3; ++train) out.cells[train][e] += pts[train];
          ++out.groups_per_column[e];
        }
      }
    }
  }
  for (std::size_t e = 0; e < 3; ++e) {
    if (out.groups_per_column[e] == 0) continue;
    for (std::size_t train = 0; train < 3; ++train) {
      out.cells[train][e] /= static_cast<double>(out.groups_per_column[e]);
    }
  }
  return out;
}

inline json to_json(const TransferMatrix& m) {
  json rows = json::object();
  for (const auto train : kLevels) {
    json row = json::object();
    for (const auto eval : kLevels) row[std::string(to_string(eval))] = m.at(train, eval);
    rows[std::string(to_string(train))] = row;
  }
  json sums = json::object();
  for (const auto eval : kLevels) sums[std::string(to_string(eval))] = m.column_sum(eval);
  return json{{"train_by_eval", rows},
              {"column_sums", sums},
              {"groups", m.groups_per_column[0]},
              {"warnings", m.warnings}};
}

}  // namespace hlmkit
