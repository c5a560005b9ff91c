#pragma once

// Corpus scoring under a difficulty criterion and easy/medium/hard tertiles.
//
// Split JSON: {"criterion": "...", "boundaries": [b1, b2],
//              "easy": [ids], "medium": [ids], "hard": [ids]}
// Boundaries are the raw criterion values of the hardest easy document and
// the hardest medium document.

#include <algorithm>
#include <array>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <istream>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hlmkit/io.hpp"
#include "hlmkit/surprisal.hpp"
#include "hlmkit/textstat.hpp"
#include "hlmkit/uid.hpp"

namespace hlmkit {

enum class Criterion { Flesch, UidSl, UidVar, Neural };

inline std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::Flesch: return "flesch";
    case Criterion::UidSl: return "uid_sl";
    case Criterion::UidVar: return "uid_var";
    case Criterion::Neural: return "neural";
  }
  return "unknown";
}

inline Criterion parse_criterion(std::string_view s) {
  for (const auto c : {Criterion::Flesch, Criterion::UidSl, Criterion::UidVar, Criterion::Neural}) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::ValidationError, "unknown criterion '" + std::string(s) + "'");
}

struct DifficultyScore {
  std::string doc_id;
  Criterion criterion = Criterion::Flesch;
  double value = 0.0;
  bool higher_is_harder = true;

  /// Difficulty on a common "higher = harder" scale.
  double normalized() const { return higher_is_harder ? value : -value; }
};

struct NeuralScore {
  double value = 0.0;
  bool higher_is_harder = true;
};

using NeuralScores = std::unordered_map<std::string, NeuralScore>;
using SurprisalTable = std::unordered_map<std::string, SurprisalSequence>;

/// Neural score JSONL: {"id": string, "score": real, "higher_is_harder": bool}.
/// The flag is optional and defaults to true.
inline NeuralScores parse_neural_scores(std::istream& in) {
  NeuralScores out;
  io::for_each_jsonl(in, [&](const json& obj, std::size_t line_no) {
    auto id = io::require_string(obj, "id", line_no);
    NeuralScore score{io::require_number(obj, "score", line_no), true};
    if (obj.contains("higher_is_harder")) score.higher_is_harder = io::require_bool(obj, "higher_is_harder", line_no);
    if (!out.emplace(std::move(id), score).second) {
      throw Error(ErrorCode::ValidationError, io::at_line(line_no) + ": duplicate id");
    }
  });
  return out;
}

inline NeuralScores read_neural_scores(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return parse_neural_scores(in);
}

inline SurprisalTable index_surprisals(std::vector<SurprisalSequence> seqs) {
  SurprisalTable out;
  for (auto& s : seqs) {
    const auto id = s.doc_id;
    if (!out.try_emplace(id, std::move(s)).second) {
      throw Error(ErrorCode::ValidationError, "duplicate surprisal id '" + id + "'");
    }
  }
  return out;
}

/// Everything a criterion may need. Pointers are non-owning and may be null
/// when the corresponding source is not supplied.
struct ScoringProviders {
  const NgramModel* model = nullptr;
  const SurprisalTable* surprisals = nullptr;
  const NeuralScores* neural = nullptr;
  FleschConfig flesch{};
  UidSlConfig superlinear{};
  UidVarConfig variance{};
  LogBase base = LogBase::Two;
  bool per_sentence = false;
  unsigned threads = 1;
};

namespace detail {

template <typename Score>
double uid_score(const Document& doc, const ScoringProviders& p, Score&& score) {
  if (p.surprisals != nullptr) {
    const auto it = p.surprisals->find(doc.id);
    if (it != p.surprisals->end()) {
      if (p.per_sentence) {
        throw Error(ErrorCode::ValidationError,
                    "per-sentence UID needs LM surprisals; imported sequences have no sentence boundaries");
      }
      const auto seq = convert_base(it->second, p.base);
      return score(std::span<const double>(seq.values));
    }
  }
  if (p.model == nullptr) throw Error(ErrorCode::MissingSurprisal, doc.id);
  if (p.per_sentence) return per_sentence_mean(sentence_surprisals(*p.model, doc, p.base), score);
  const auto seq = token_surprisals(*p.model, doc, p.base);
  return score(std::span<const double>(seq.values));
}

}  // namespace detail

inline DifficultyScore score_document(const Document& doc, Criterion criterion,
                                      const ScoringProviders& p) {
  DifficultyScore out{doc.id, criterion, 0.0, true};
  switch (criterion) {
    case Criterion::Flesch:
      out.value = flesch_score(compute_stats(doc.text), p.flesch);
      out.higher_is_harder = false;
      break;
    case Criterion::UidSl:
      out.value = detail::uid_score(doc, p, [&](std::span<const double> s) {
        return uid_superlinear(s, p.superlinear);
      });
      break;
    case Criterion::UidVar:
      out.value = detail::uid_score(doc, p, [&](std::span<const double> s) {
        return uid_variance(s, p.variance);
      });
      break;
    case Criterion::Neural: {
      if (p.neural == nullptr) throw Error(ErrorCode::MissingScore, doc.id);
      const auto it = p.neural->find(doc.id);
      if (it == p.neural->end()) throw Error(ErrorCode::MissingScore, doc.id);
      out.value = it->second.value;
      out.higher_is_harder = it->second.higher_is_harder;
      break;
    }
  }
  return out;
}

/// One score per document, in corpus order. With threads > 1 documents are
/// scored concurrently; the first failure in corpus order is rethrown.
inline std::vector<DifficultyScore> score_corpus(const std::vector<Document>& corpus,
                                                 Criterion criterion, const ScoringProviders& p) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus contains no documents");
  std::vector<DifficultyScore> scores(corpus.size());
  std::vector<std::exception_ptr> failures(corpus.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < corpus.size(); i += stride) {
      try {
        scores[i] = score_document(corpus[i], criterion, p);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(p.threads, 1, corpus.size());
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return scores;
}

struct DifficultySplit {
  Criterion criterion = Criterion::Flesch;
  std::vector<std::string> easy;
  std::vector<std::string> medium;
  std::vector<std::string> hard;
  std::array<double, 2> boundaries{};
};

/// Sorts easiest-first by (normalized difficulty, doc_id) and cuts three
/// contiguous blocks; remainder documents go to easy first, then medium.
inline DifficultySplit tertile_split(std::vector<DifficultyScore> scores) {
  if (scores.size() < 3) {
    throw Error(ErrorCode::TooSmall, "need at least 3 documents, got " + std::to_string(scores.size()));
  }
  const Criterion criterion = scores.front().criterion;
  std::unordered_set<std::string> seen;
  for (const auto& s : scores) {
    if (s.criterion != criterion) {
      throw Error(ErrorCode::ValidationError, "scores mix criteria");
    }
    if (!std::isfinite(s.value)) {
      throw Error(ErrorCode::ValidationError, "non-finite score for '" + s.doc_id + "'");
    }
    if (!seen.insert(s.doc_id).second) {
      throw Error(ErrorCode::ValidationError, "duplicate doc id '" + s.doc_id + "'");
    }
  }
  std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    const double da = a.normalized();
    const double db = b.normalized();
    if (da != db) return da < db;
    return a.doc_id < b.doc_id;
  });

  const std::size_t n = scores.size();
  const std::size_t base = n / 3;
  const std::size_t rem = n % 3;
  const std::size_t n_easy = base + (rem >= 1 ? 1 : 0);
  const std::size_t n_medium = base + (rem >= 2 ? 1 : 0);

  DifficultySplit split;
  split.criterion = criterion;
  for (std::size_t i = 0; i < n; ++i) {
    auto& level = i < n_easy ? split.easy : (i < n_easy + n_medium ? split.medium : split.hard);
    level.push_back(scores[i].doc_id);
  }
  split.boundaries = {scores[n_easy - 1].value, scores[n_easy + n_medium - 1].value};
  return split;
}

inline json to_json(const DifficultyScore& s) {
  return json{{"id", s.doc_id},
              {"criterion", to_string(s.criterion)},
              {"value", s.value},
              {"higher_is_harder", s.higher_is_harder}};
}

inline std::vector<DifficultyScore> parse_scores(std::istream& in) {
  std::vector<DifficultyScore> out;
  io::for_each_jsonl(in, [&](const json& obj, std::size_t line_no) {
    DifficultyScore s;
    s.doc_id = io::require_string(obj, "id", line_no);
    try {
      s.criterion = parse_criterion(io::require_string(obj, "criterion", line_no));
    } catch (const Error& e) {
      throw e.with_context(io::at_line(line_no));
    }
    s.value = io::require_number(obj, "value", line_no);
    s.higher_is_harder = io::require_bool(obj, "higher_is_harder", line_no);
    out.push_back(std::move(s));
  });
  return out;
}

inline std::vector<DifficultyScore> read_scores(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return parse_scores(in);
}

inline json to_json(const DifficultySplit& split) {
  return json{{"criterion", to_string(split.criterion)},
              {"boundaries", split.boundaries},
              {"easy", split.easy},
              {"medium", split.medium},
              {"hard", split.hard}};
}

inline DifficultySplit split_from_json(const json& j) {
  try {
    DifficultySplit split;
    split.criterion = parse_criterion(j.at("criterion").get<std::string>());
    split.boundaries = j.at("boundaries").get<std::array<double, 2>>();
    split.easy = j.at("easy").get<std::vector<std::string>>();
    split.medium = j.at("medium").get<std::vector<std::string>>();
    split.hard = j.at("hard").get<std::vector<std::string>>();
    return split;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("split JSON: ") + e.what());
  }
}

inline DifficultySplit read_split(const std::filesystem::path& path) {
  const auto text = io::read_file(path);
  try {
    return split_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace hlmkit
