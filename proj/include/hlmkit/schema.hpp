#pragma once

// Self-checks for every file the CLI emits (`--validate`). Each function
// throws ValidationError/ParseError describing the first violation.

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "hlmkit/experiment.hpp"
#include "hlmkit/hlm.hpp"
#include "hlmkit/splitkit.hpp"
#include "hlmkit/surprisal.hpp"

namespace hlmkit::schema {

inline void fail(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

inline json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

inline void scores_jsonl(const std::string& text) {
  std::istringstream in(text);
  for (const auto& s : parse_scores(in)) {
    if (s.criterion == Criterion::Flesch && s.higher_is_harder) fail("flesch score flagged higher_is_harder");
    if ((s.criterion == Criterion::UidSl || s.criterion == Criterion::UidVar) && !s.higher_is_harder) {
      fail("uid score not flagged higher_is_harder");
    }
  }
}

inline void split_json(const std::string& text) {
  const auto split = split_from_json(parse_json(text, "split"));
  std::set<std::string> ids;
  for (const auto* level : {&split.easy, &split.medium, &split.hard}) {
    for (const auto& id : *level) {
      if (!ids.insert(id).second) fail("split levels overlap at '" + id + "'");
    }
  }
  const auto e = split.easy.size(), m = split.medium.size(), h = split.hard.size();
  if (!(e >= m && m >= h && h + 1 >= e)) fail("split sizes are not near-equal tertiles");
}

inline void model_json(const std::string& text) {
  const auto model = NgramModel::from_json(parse_json(text, "model"));
  if (model.dump() != text) fail("model JSON does not round-trip byte-identically");
}

inline void surprisals_jsonl(const std::string& text) {
  std::istringstream in(text);
  parse_surprisals(in);
}

inline void hlm_report_json(const std::string& text) {
  const auto r = hlm_report_from_json(parse_json(text, "HLM report"));
  for (const auto& c : r.cells) {
    const double s = std::abs(c.logical);
    if (s != 0.0 && s != 0.375 && s != 0.75) fail("logical score outside {0, 0.375, 0.75}");
    if (!(std::abs(c.value) < 1.0)) fail("cell value outside (-1, 1)");
    if ((c.value > 0) != (c.logical > 0) || (c.value < 0) != (c.logical < 0)) {
      fail("cell value sign differs from logical score sign");
    }
  }
  for (const auto* v : {&r.models, &r.tasks, &r.criteria}) {
    for (const auto& x : *v) {
      if (!(std::abs(x.value) < 1.0)) fail("index '" + x.key + "' outside (-1, 1)");
    }
  }
}

inline void heatmap_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t width = 0;
  bool header = true;
  while (std::getline(in, line)) {
    const auto f = io::split_csv_line(line);
    if (header) {
      if (f.size() < 3 || f[0] != "model" || f[1] != "criterion" || f.back() != "mean") {
        fail("heatmap CSV header malformed");
      }
      width = f.size();
      header = false;
    } else if (f.size() != width) {
      fail("heatmap CSV row width mismatch");
    }
  }
  if (header) fail("heatmap CSV is empty");
}

inline void svg(const std::string& text) {
  if (text.rfind("<svg", 0) != 0 || text.find("</svg>") == std::string::npos) fail("not an SVG document");
}

inline void schedule_json(const std::string& text) {
  const auto j = parse_json(text, "schedule");
  try {
    parse_schedule_order(j.at("order").get<std::string>());
    j.at("seed").get<std::uint64_t>();
    const auto seq = j.at("sequence").get<std::vector<std::string>>();
    const auto b = j.at("phase_boundaries").get<std::array<std::size_t, 2>>();
    if (b[0] > b[1] || b[1] > seq.size()) fail("phase boundaries out of range");
    if (std::set<std::string>(seq.begin(), seq.end()).size() != seq.size()) fail("schedule repeats an id");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("schedule: ") + e.what());
  }
}

inline void convergence_json(const std::string& text) {
  const auto j = parse_json(text, "convergence");
  try {
    for (const auto& run : j.at("runs")) {
      const double ratio = run.at("ratio").get<double>();
      if (!(ratio > 0.0 && ratio <= 1.0)) fail("convergence ratio outside (0, 1]");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("convergence: ") + e.what());
  }
}

inline void transfer_json(const std::string& text) {
  const auto j = parse_json(text, "transfer");
  auto check = [](const json& m) {
    if (m.at("groups").get<std::size_t>() == 0) return;
    for (const auto eval : kLevels) {
      const double sum = m.at("column_sums").at(std::string(to_string(eval))).get<double>();
      if (std::abs(sum - 6.0) > 1e-9) fail("transfer column does not sum to 6");
    }
  };
  try {
    check(j.at("all"));
    for (const auto& [model, m] : j.at("by_model").items()) check(m);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("transfer: ") + e.what());
  }
}

}  // namespace hlmkit::schema
