// hlmkit command-line driver.
//
// Options may also come from an INI-style config file, named by a global
// --config given before the subcommand or by the HLMKIT_CONFIG environment
// variable. Sections name subcommands, e.g.
//
//   [score]
//   criterion = uid_sl
//   k = 1.25
//
// Explicit flags always override file values.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hlmkit/commands.hpp"

namespace {

using namespace hlmkit;
using namespace hlmkit::cli;

void add_validate(CLI::App* cmd, bool& flag) {
  cmd->add_flag("--validate", flag, "Re-read every emitted file and check it against its schema");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hlmkit: text difficulty criteria, difficulty splits and HLM index analysis"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file (sections per subcommand)")->envname("HLMKIT_CONFIG");

  // Enumerated choices are read as text and converted after parsing.
  std::string criterion;
  std::string score_base = "2";
  std::string surprisal_base = "2";
  std::string divisor = "population";
  std::string order;

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Score every corpus document under one criterion");
  score_cmd->add_option("--corpus", score.corpus, "Corpus JSONL {id, text}")->required();
  score_cmd->add_option("--criterion", criterion, "flesch | uid_sl | uid_var | neural")
      ->required()
      ->check(CLI::IsMember({"flesch", "uid_sl", "uid_var", "neural"}));
  score_cmd->add_option("--lm", score.lm, "Trained n-gram model (uid criteria)");
  score_cmd->add_option("--surprisals", score.surprisals, "Surprisal JSONL (uid criteria)");
  score_cmd->add_option("--neural", score.neural, "Neural score JSONL {id, score, higher_is_harder}");
  score_cmd->add_option("--k", score.superlinear.k, "UID super-linear exponent")->capture_default_str();
  score_cmd->add_option("--mu-lang", score.variance.mu_lang, "UID variance language mean")
      ->capture_default_str();
  score_cmd->add_option("--base", score_base, "Surprisal log base: 2 | e")
      ->check(CLI::IsMember({"2", "e"}))
      ->capture_default_str();
  score_cmd->add_flag("--per-sentence", score.per_sentence, "Average UID per sentence instead of per document");
  score_cmd->add_option("--threads", score.threads, "Worker threads for scoring")->capture_default_str();
  score_cmd->add_option("--flesch-base", score.flesch.base)->group("")->capture_default_str();
  score_cmd->add_option("--flesch-sentence-weight", score.flesch.words_per_sentence_weight)->group("");
  score_cmd->add_option("--flesch-syllable-weight", score.flesch.syllables_per_word_weight)->group("");
  score_cmd->add_option("--out", score.out, "Output scores JSONL")->required();
  add_validate(score_cmd, score.validate);

  SplitOptions split;
  auto* split_cmd = app.add_subcommand("split", "Partition scored documents into easy/medium/hard");
  split_cmd->add_option("--scores", split.scores, "Scores JSONL from `score`")->required();
  split_cmd->add_option("--out", split.out, "Output split JSON")->required();
  add_validate(split_cmd, split.validate);

  LmTrainOptions lm;
  auto* lm_cmd = app.add_subcommand("lm-train", "Train an interpolated Kneser-Ney n-gram model");
  lm_cmd->add_option("--corpus", lm.corpus, "Corpus JSONL {id, text}")->required();
  lm_cmd->add_option("--order", lm.order, "n-gram order (1-3)")->check(CLI::Range(1, 3))->capture_default_str();
  lm_cmd->add_option("--discount", lm.discount, "Absolute discount in (0,1)")->capture_default_str();
  lm_cmd->add_option("--out", lm.out, "Output model JSON")->required();
  add_validate(lm_cmd, lm.validate);

  SurprisalOptions surprisal;
  auto* surprisal_cmd = app.add_subcommand("surprisal", "Per-token surprisal of a corpus under a model");
  surprisal_cmd->add_option("--lm", surprisal.lm, "Trained model JSON")->required();
  surprisal_cmd->add_option("--corpus", surprisal.corpus, "Corpus JSONL {id, text}")->required();
  surprisal_cmd->add_option("--base", surprisal_base, "Log base: 2 | e")
      ->check(CLI::IsMember({"2", "e"}))
      ->capture_default_str();
  surprisal_cmd->add_option("--out", surprisal.out, "Output surprisal JSONL")->required();
  add_validate(surprisal_cmd, surprisal.validate);

  HlmOptions hlm;
  auto* hlm_cmd = app.add_subcommand("hlm", "HLM index report from a performance cube CSV");
  hlm_cmd->add_option("--cube", hlm.cube, "Performance cube CSV")->required();
  hlm_cmd->add_option("--out-dir", hlm.out_dir, "Directory for report JSON, heatmap CSV and SVG")->required();
  hlm_cmd->add_option("--std", divisor, "STD divisor: population | sample")
      ->check(CLI::IsMember({"population", "sample"}))
      ->capture_default_str();
  hlm_cmd->add_option("--eval-level", hlm.config.eval_level, "Evaluation level used for triplets")
      ->capture_default_str();
  add_validate(hlm_cmd, hlm.validate);

  ScheduleOptions schedule;
  auto* schedule_cmd = app.add_subcommand("schedule", "Curriculum order over a difficulty split");
  schedule_cmd->add_option("--split", schedule.split, "Split JSON from `split`")->required();
  schedule_cmd->add_option("--order", order, "easy_to_hard | hard_to_easy | random")
      ->required()
      ->check(CLI::IsMember({"easy_to_hard", "hard_to_easy", "random"}));
  schedule_cmd->add_option("--seed", schedule.seed, "Seed for the random order")->capture_default_str();
  schedule_cmd->add_option("--out", schedule.out, "Output schedule JSON")->required();
  add_validate(schedule_cmd, schedule.validate);

  ConvergeOptions converge;
  bool lower_is_better = false;
  auto* converge_cmd = app.add_subcommand("converge", "Convergence ratio of training logs");
  converge_cmd->add_option("--log", converge.log, "Training log CSV (step,value)");
  converge_cmd->add_flag("--lower-is-better", lower_is_better, "Metric of --log improves downward");
  converge_cmd->add_option("--manifest", converge.manifest, "Run manifest JSON");
  converge_cmd->add_option("--epsilon", converge.epsilon_rel, "Relative distance to the best value")
      ->capture_default_str();
  converge_cmd->add_option("--out", converge.out, "Output JSON")->required();
  add_validate(converge_cmd, converge.validate);

  TransferOptions transfer;
  auto* transfer_cmd = app.add_subcommand("transfer", "3/2/1 transfer scores from a performance cube");
  transfer_cmd->add_option("--cube", transfer.cube, "Performance cube CSV with per-level eval rows")->required();
  transfer_cmd->add_option("--out", transfer.out, "Output JSON")->required();
  add_validate(transfer_cmd, transfer.validate);

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Render heatmap and learning-curve SVGs");
  report_cmd->add_option("--hlm-report", report.hlm_report, "hlm_report.json from `hlm`");
  report_cmd->add_option("--manifest", report.manifest, "Run manifest JSON for learning curves");
  report_cmd->add_option("--title", report.title, "Learning-curve title")->capture_default_str();
  report_cmd->add_option("--out-dir", report.out_dir, "Output directory")->required();
  add_validate(report_cmd, report.validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    CommandResult result;
    if (*score_cmd) score.criterion = parse_criterion(criterion);
    score.base = parse_log_base(score_base);
    surprisal.base = parse_log_base(surprisal_base);
    hlm.config.divisor = divisor == "sample" ? StdDivisor::Sample : StdDivisor::Population;
    if (*schedule_cmd) schedule.order = parse_schedule_order(order);

    if (*score_cmd) result = cmd_score(score);
    else if (*split_cmd) result = cmd_split(split);
    else if (*lm_cmd) result = cmd_lm_train(lm);
    else if (*surprisal_cmd) result = cmd_surprisal(surprisal);
    else if (*hlm_cmd) result = cmd_hlm(hlm);
    else if (*schedule_cmd) result = cmd_schedule(schedule);
    else if (*converge_cmd) {
      converge.higher_is_better = !lower_is_better;
      result = cmd_converge(converge);
    } else if (*transfer_cmd) result = cmd_transfer(transfer);
    else if (*report_cmd) result = cmd_report(report);

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& p : result.outputs) std::cout << "wrote " << p.string() << '\n';
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
