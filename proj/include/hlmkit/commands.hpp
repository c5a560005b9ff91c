#pragma once

// Subcommand implementations behind the hlmkit CLI. Each command validates
// its input paths before doing any work, writes its outputs in one go, and
// optionally re-reads them through the matching schema check.
//
// Exit codes: 0 success, 2 validation/parse failure, 3 I/O failure.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hlmkit/corpus.hpp"
#include "hlmkit/experiment.hpp"
#include "hlmkit/hlm.hpp"
#include "hlmkit/schema.hpp"
#include "hlmkit/splitkit.hpp"
#include "hlmkit/surprisal.hpp"
#include "hlmkit/svg.hpp"

namespace hlmkit::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;

inline int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::IoError ? kExitIo : kExitValidation;
}

struct CommandResult {
  std::vector<fs::path> outputs;
  std::vector<std::string> warnings;
};

namespace detail {

inline void require_input(const fs::path& p, const char* what) {
  if (p.empty()) throw Error(ErrorCode::ValidationError, std::string(what) + " path is required");
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) {
    throw Error(ErrorCode::IoError, std::string(what) + " '" + p.string() + "' does not exist");
  }
}

inline void require_output(const fs::path& p, const char* what) {
  if (p.empty()) throw Error(ErrorCode::ValidationError, std::string(what) + " path is required");
  const auto parent = p.parent_path();
  std::error_code ec;
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    throw Error(ErrorCode::IoError, "output directory '" + parent.string() + "' does not exist");
  }
}

inline void prepare_dir(const fs::path& dir) {
  if (dir.empty()) throw Error(ErrorCode::ValidationError, "output directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "'");
  }
}

inline void emit(CommandResult& result, const fs::path& path, const std::string& content,
                 bool validate, const std::function<void(const std::string&)>& check) {
  io::write_file(path, content);
  if (validate) {
    try {
      check(io::read_file(path));
    } catch (const Error& e) {
      throw e.with_context("self-check of '" + path.string() + "' failed");
    }
  }
  result.outputs.push_back(path);
}

}  // namespace detail

// --- score -----------------------------------------------------------------

struct ScoreOptions {
  fs::path corpus;
  Criterion criterion = Criterion::Flesch;
  fs::path lm;
  fs::path surprisals;
  fs::path neural;
  FleschConfig flesch{};
  UidSlConfig superlinear{};
  UidVarConfig variance{};
  LogBase base = LogBase::Two;
  bool per_sentence = false;
  unsigned threads = 1;
  fs::path out;
  bool validate = false;
};

inline CommandResult cmd_score(const ScoreOptions& o) {
  detail::require_input(o.corpus, "corpus");
  detail::require_output(o.out, "output");
  const bool uid = o.criterion == Criterion::UidSl || o.criterion == Criterion::UidVar;
  if (uid && o.lm.empty() && o.surprisals.empty()) {
    throw Error(ErrorCode::MissingSurprisal, "uid criteria need --lm or --surprisals");
  }
  if (o.criterion == Criterion::Neural && o.neural.empty()) {
    throw Error(ErrorCode::MissingScore, "neural criterion needs --neural");
  }
  if (!o.lm.empty()) detail::require_input(o.lm, "language model");
  if (!o.surprisals.empty()) detail::require_input(o.surprisals, "surprisal file");
  if (!o.neural.empty()) detail::require_input(o.neural, "neural score file");

  const auto corpus = read_corpus(o.corpus);
  std::optional<NgramModel> model;
  SurprisalTable imported;
  NeuralScores neural;
  ScoringProviders p;
  p.flesch = o.flesch;
  p.superlinear = o.superlinear;
  p.variance = o.variance;
  p.base = o.base;
  p.per_sentence = o.per_sentence;
  p.threads = o.threads;
  if (uid && !o.lm.empty()) {
    model.emplace(NgramModel::load(o.lm));
    p.model = &*model;
  }
  if (uid && !o.surprisals.empty()) {
    imported = index_surprisals(import_surprisals(o.surprisals));
    p.surprisals = &imported;
  }
  if (o.criterion == Criterion::Neural) {
    neural = read_neural_scores(o.neural);
    p.neural = &neural;
  }

  std::string content;
  for (const auto& s : score_corpus(corpus, o.criterion, p)) content += to_json(s).dump() + "\n";
  CommandResult result;
  detail::emit(result, o.out, content, o.validate, schema::scores_jsonl);
  return result;
}

// --- split -----------------------------------------------------------------

struct SplitOptions {
  fs::path scores;
  fs::path out;
  bool validate = false;
};

inline CommandResult cmd_split(const SplitOptions& o) {
  detail::require_input(o.scores, "scores");
  detail::require_output(o.out, "output");
  const auto split = tertile_split(read_scores(o.scores));
  CommandResult result;
  detail::emit(result, o.out, to_json(split).dump(2) + "\n", o.validate, schema::split_json);
  return result;
}

// --- lm-train / surprisal ----------------------------------------------------

struct LmTrainOptions {
  fs::path corpus;
  int order = 3;
  double discount = 0.75;
  fs::path out;
  bool validate = false;
};

inline CommandResult cmd_lm_train(const LmTrainOptions& o) {
  detail::require_input(o.corpus, "corpus");
  detail::require_output(o.out, "output");
  const auto model = train_lm(read_corpus(o.corpus), o.order, o.discount);
  CommandResult result;
  detail::emit(result, o.out, model.dump(), o.validate, schema::model_json);
  return result;
}

struct SurprisalOptions {
  fs::path lm;
  fs::path corpus;
  LogBase base = LogBase::Two;
  fs::path out;
  bool validate = false;
};

inline CommandResult cmd_surprisal(const SurprisalOptions& o) {
  detail::require_input(o.lm, "language model");
  detail::require_input(o.corpus, "corpus");
  detail::require_output(o.out, "output");
  const auto model = NgramModel::load(o.lm);
  std::string content;
  for (const auto& doc : read_corpus(o.corpus)) content += to_jsonl(token_surprisals(model, doc, o.base));
  CommandResult result;
  detail::emit(result, o.out, content, o.validate, schema::surprisals_jsonl);
  return result;
}

// --- hlm -------------------------------------------------------------------

struct HlmOptions {
  fs::path cube;
  fs::path out_dir;
  HlmConfig config{};
  bool validate = false;
};

inline CommandResult cmd_hlm(const HlmOptions& o) {
  detail::require_input(o.cube, "cube");
  detail::prepare_dir(o.out_dir);
  const auto report = build_hlm_report(read_cube(o.cube), o.config);
  CommandResult result;
  result.warnings = report.warnings;
  detail::emit(result, o.out_dir / "hlm_report.json", to_json(report).dump(2) + "\n", o.validate,
               schema::hlm_report_json);
  detail::emit(result, o.out_dir / "hlm_heatmap.csv", heatmap_csv(report), o.validate, schema::heatmap_csv);
  detail::emit(result, o.out_dir / "hlm_heatmap.svg", svg::hlm_heatmap(report), o.validate, schema::svg);
  return result;
}

// --- schedule --------------------------------------------------------------

struct ScheduleOptions {
  fs::path split;
  ScheduleOrder order = ScheduleOrder::EasyToHard;
  std::uint64_t seed = 0;
  fs::path out;
  bool validate = false;
};

inline CommandResult cmd_schedule(const ScheduleOptions& o) {
  detail::require_input(o.split, "split");
  detail::require_output(o.out, "output");
  const auto schedule = make_schedule(read_split(o.split), o.order, o.seed);
  CommandResult result;
  detail::emit(result, o.out, to_json(schedule).dump(2) + "\n", o.validate, schema::schedule_json);
  return result;
}

// --- converge --------------------------------------------------------------

/// Run manifest JSON: {"runs": [{"name": s, "log": path, "higher_is_better": b,
/// "transitions": [steps]}]}; log paths are relative to the manifest.
struct ManifestRun {
  std::string name;
  fs::path log;
  bool higher_is_better = true;
  std::vector<std::int64_t> transitions;
};

inline std::vector<ManifestRun> read_manifest(const fs::path& path) {
  const auto j = schema::parse_json(io::read_file(path), "manifest");
  std::vector<ManifestRun> runs;
  try {
    for (const auto& r : j.at("runs")) {
      ManifestRun run;
      run.name = r.at("name").get<std::string>();
      run.log = r.at("log").get<std::string>();
      if (run.log.is_relative()) run.log = path.parent_path() / run.log;
      run.higher_is_better = r.at("higher_is_better").get<bool>();
      if (r.contains("transitions")) run.transitions = r.at("transitions").get<std::vector<std::int64_t>>();
      runs.push_back(std::move(run));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "manifest: " + std::string(e.what()));
  }
  if (runs.empty()) throw Error(ErrorCode::ValidationError, "manifest lists no runs");
  for (const auto& r : runs) detail::require_input(r.log, "training log");
  return runs;
}

struct ConvergeOptions {
  fs::path log;
  bool higher_is_better = true;
  fs::path manifest;
  double epsilon_rel = 0.001;
  fs::path out;
  bool validate = false;
};

inline CommandResult cmd_converge(const ConvergeOptions& o) {
  if (o.log.empty() == o.manifest.empty()) {
    throw Error(ErrorCode::ValidationError, "give exactly one of --log or --manifest");
  }
  std::vector<ManifestRun> runs;
  if (!o.manifest.empty()) {
    detail::require_input(o.manifest, "manifest");
    runs = read_manifest(o.manifest);
  } else {
    detail::require_input(o.log, "training log");
    runs.push_back({o.log.stem().string(), o.log, o.higher_is_better, {}});
  }
  detail::require_output(o.out, "output");
  json out_runs = json::array();
  for (const auto& r : runs) {
    const auto c = measure_convergence(read_training_log(r.log, r.higher_is_better), o.epsilon_rel);
    out_runs.push_back({{"name", r.name},
                        {"ratio", c.ratio},
                        {"convergent_step", c.convergent_step},
                        {"total_steps", c.total_steps},
                        {"best", c.best},
                        {"higher_is_better", r.higher_is_better}});
  }
  CommandResult result;
  detail::emit(result, o.out,
               json{{"epsilon_rel", o.epsilon_rel}, {"runs", std::move(out_runs)}}.dump(2) + "\n",
               o.validate, schema::convergence_json);
  return result;
}

// --- transfer --------------------------------------------------------------

struct TransferOptions {
  fs::path cube;
  fs::path out;
  bool validate = false;
};

inline CommandResult cmd_transfer(const TransferOptions& o) {
  detail::require_input(o.cube, "cube");
  detail::require_output(o.out, "output");
  const auto cube = read_cube(o.cube);
  const auto all = transfer_scores(cube);
  if (all.groups_per_column[0] == 0) {
    throw Error(ErrorCode::ValidationError, "cube has no complete transfer groups (need easy/medium/hard eval levels)");
  }
  json by_model = json::object();
  for (const auto& m : cube.models()) {
    const auto matrix = transfer_scores(cube, m);
    if (matrix.groups_per_column[0] > 0) by_model[m] = to_json(matrix);
  }
  CommandResult result;
  result.warnings = all.warnings;
  detail::emit(result, o.out, json{{"all", to_json(all)}, {"by_model", by_model}}.dump(2) + "\n",
               o.validate, schema::transfer_json);
  return result;
}

// --- report ----------------------------------------------------------------

struct ReportOptions {
  fs::path hlm_report;
  fs::path manifest;
  std::string title = "Learning curves";
  fs::path out_dir;
  bool validate = false;
};

inline CommandResult cmd_report(const ReportOptions& o) {
  if (o.hlm_report.empty() && o.manifest.empty()) {
    throw Error(ErrorCode::ValidationError, "give --hlm-report and/or --manifest");
  }
  if (!o.hlm_report.empty()) detail::require_input(o.hlm_report, "HLM report");
  if (!o.manifest.empty()) detail::require_input(o.manifest, "manifest");
  detail::prepare_dir(o.out_dir);
  CommandResult result;
  if (!o.hlm_report.empty()) {
    const auto report =
        hlm_report_from_json(schema::parse_json(io::read_file(o.hlm_report), "HLM report"));
    detail::emit(result, o.out_dir / "hlm_heatmap.svg", svg::hlm_heatmap(report), o.validate, schema::svg);
  }
  if (!o.manifest.empty()) {
    std::vector<svg::CurveSeries> series;
    for (const auto& r : read_manifest(o.manifest)) {
      series.push_back({r.name, read_training_log(r.log, r.higher_is_better), r.transitions});
    }
    detail::emit(result, o.out_dir / "learning_curves.svg", svg::learning_curves(series, o.title),
                 o.validate, schema::svg);
  }
  return result;
}

}  // namespace hlmkit::cli
