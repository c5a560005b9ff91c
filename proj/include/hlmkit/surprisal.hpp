#pragma once

// Per-token surprisal from an interpolated Kneser-Ney n-gram model, plus
// import/export of externally produced surprisal sequences.
//
// Persistence format (JSON, "hlmkit-ngram" version 1):
//   {"format": "hlmkit-ngram", "version": 1, "order": n, "discount": D,
//    "vocabulary": [sorted tokens], "ngrams": [[[t1..tn], count], ...]}
// Only the highest-order counts are stored; continuation counts for the lower
// orders are rebuilt on load, so dump(load(dump(m))) is byte-identical.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hlmkit/io.hpp"
#include "hlmkit/textstat.hpp"

namespace hlmkit {

enum class LogBase { Two, E };

inline std::string_view to_string(LogBase base) { return base == LogBase::Two ? "2" : "e"; }

inline LogBase parse_log_base(std::string_view s) {
  if (s == "2") return LogBase::Two;
  if (s == "e") return LogBase::E;
  throw Error(ErrorCode::ValidationError, "log base must be \"2\" or \"e\", got '" + std::string(s) + "'");
}

inline double log_in_base(double x, LogBase base) {
  return base == LogBase::Two ? std::log2(x) : std::log(x);
}

/// -log_base(p), clamped at 0 against rounding for p ~ 1.
inline double surprisal_from_probability(double p, LogBase base) {
  return std::max(0.0, -log_in_base(p, base));
}

struct SurprisalSequence {
  std::string doc_id;
  std::vector<double> values;
  LogBase base = LogBase::Two;
};

inline void validate(const SurprisalSequence& seq) {
  if (seq.values.empty()) {
    throw Error(ErrorCode::EmptyDocument, "surprisal sequence for '" + seq.doc_id + "' is empty");
  }
  for (const double v : seq.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::ValidationError,
                  "surprisal for '" + seq.doc_id + "' must be finite and >= 0");
    }
  }
}

/// Rescales the values into `target` units (bits <-> nats).
inline SurprisalSequence convert_base(SurprisalSequence seq, LogBase target) {
  if (seq.base == target) return seq;
  const double factor = target == LogBase::Two ? 1.0 / std::log(2.0) : std::log(2.0);
  for (double& v : seq.values) v *= factor;
  seq.base = target;
  return seq;
}

inline constexpr std::string_view kUnknownToken = "<unk>";
inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";

/// Lowercased word tokens grouped by sentence; sentences without words are dropped.
inline std::vector<std::vector<std::string>> lm_sentences(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  if (detail::trim(text).empty()) return out;
  for (const auto& sentence : segment_sentences(text)) {
    auto words = tokenize_words(sentence);
    if (words.empty()) continue;
    for (auto& w : words) {
      std::transform(w.begin(), w.end(), w.begin(), detail::ascii_lower);
    }
    out.push_back(std::move(words));
  }
  return out;
}

class NgramModel {
 public:
  using TokenId = std::uint32_t;
  using Ngram = std::vector<std::string>;

  static constexpr int kMaxOrder = 3;
  static constexpr int kFormatVersion = 1;

  /// `counts` are highest-order n-gram occurrence counts (length == order).
  NgramModel(int order, double discount, std::vector<std::string> vocabulary,
             const std::map<Ngram, std::uint64_t>& counts)
      : order_(order), discount_(discount), vocab_(std::move(vocabulary)) {
    if (order_ < 1 || order_ > kMaxOrder) {
      throw Error(ErrorCode::ValidationError, "order must be in [1, 3]");
    }
    if (!(discount_ > 0.0 && discount_ < 1.0)) {
      throw Error(ErrorCode::ValidationError, "discount must be in (0, 1)");
    }
    std::sort(vocab_.begin(), vocab_.end());
    vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
    for (const auto reserved : {kUnknownToken, kSentenceStart, kSentenceEnd}) {
      if (!std::binary_search(vocab_.begin(), vocab_.end(), reserved)) {
        throw Error(ErrorCode::ValidationError,
                    "vocabulary lacks reserved token " + std::string(reserved));
      }
    }
    for (TokenId i = 0; i < vocab_.size(); ++i) ids_.emplace(vocab_[i], i);
    bos_ = ids_.at(std::string(kSentenceStart));
    unk_ = ids_.at(std::string(kUnknownToken));

    for (const auto& [gram, count] : counts) {
      if (static_cast<int>(gram.size()) != order_ || count == 0) {
        throw Error(ErrorCode::ValidationError, "malformed n-gram count entry");
      }
      std::vector<TokenId> ids;
      for (const auto& tok : gram) {
        const auto it = ids_.find(tok);
        if (it == ids_.end()) {
          throw Error(ErrorCode::ValidationError, "n-gram token '" + tok + "' not in vocabulary");
        }
        ids.push_back(it->second);
      }
      if (ids.back() == bos_) {
        throw Error(ErrorCode::ValidationError, "<s> cannot be a predicted token");
      }
      counts_[ids] += count;
    }
    if (counts_.empty()) throw Error(ErrorCode::EmptyCorpus, "model has no n-gram counts");
    build_levels();
  }

  static NgramModel train(const std::vector<Document>& corpus, int order, double discount) {
    if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "training corpus is empty");
    if (order < 1 || order > kMaxOrder) {
      throw Error(ErrorCode::ValidationError, "order must be in [1, 3]");
    }
    std::set<std::string> vocab{std::string(kUnknownToken), std::string(kSentenceStart),
                                std::string(kSentenceEnd)};
    std::map<Ngram, std::uint64_t> counts;
    for (const auto& doc : corpus) {
      for (auto sentence : lm_sentences(doc.text)) {
        vocab.insert(sentence.begin(), sentence.end());
        sentence.emplace_back(kSentenceEnd);
        sentence.insert(sentence.begin(), static_cast<std::size_t>(order - 1),
                        std::string(kSentenceStart));
        for (std::size_t i = static_cast<std::size_t>(order - 1); i < sentence.size(); ++i) {
          Ngram gram(sentence.begin() + static_cast<std::ptrdiff_t>(i) - (order - 1),
                     sentence.begin() + static_cast<std::ptrdiff_t>(i) + 1);
          ++counts[gram];
        }
      }
    }
    if (counts.empty()) throw Error(ErrorCode::EmptyCorpus, "training corpus has no tokens");
    return NgramModel(order, discount, {vocab.begin(), vocab.end()}, counts);
  }

  int order() const { return order_; }
  double discount() const { return discount_; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }

  TokenId id_of(std::string_view token) const {
    const auto it = ids_.find(std::string(token));
    return it == ids_.end() ? unk_ : it->second;
  }

  /// p(token | context); only the last order-1 context tokens are used and
  /// short contexts are left-padded with <s>. Unknown tokens map to <unk>.
  double probability(std::span<const std::string> context, std::string_view token) const {
    std::vector<TokenId> ctx(static_cast<std::size_t>(order_ - 1), bos_);
    const std::size_t take = std::min(context.size(), ctx.size());
    for (std::size_t i = 0; i < take; ++i) {
      ctx[ctx.size() - take + i] = id_of(context[context.size() - take + i]);
    }
    return probability_ids(ctx, id_of(token));
  }

  /// `context` must hold exactly order-1 ids.
  double probability_ids(std::span<const TokenId> context, TokenId target) const {
    if (target == bos_) return 0.0;
    return level_probability(order_, context, target);
  }

  /// Contexts (length order-1) seen in training at the highest order.
  std::vector<Ngram> observed_contexts() const {
    std::vector<Ngram> out;
    for (const auto& [ctx, stats] : levels_.back()) out.push_back(to_tokens(ctx));
    return out;
  }

  /// Raw number of times `token` was predicted in training.
  std::uint64_t token_count(std::string_view token) const {
    const auto it = ids_.find(std::string(token));
    if (it == ids_.end()) return 0;
    std::uint64_t total = 0;
    for (const auto& [gram, count] : counts_) {
      if (gram.back() == it->second) total += count;
    }
    return total;
  }

  json to_json() const {
    json grams = json::array();
    for (const auto& [gram, count] : counts_) grams.push_back(json::array({to_tokens(gram), count}));
    return json{{"format", "hlmkit-ngram"}, {"version", kFormatVersion}, {"order", order_},
                {"discount", discount_},   {"vocabulary", vocab_},     {"ngrams", std::move(grams)}};
  }

  static NgramModel from_json(const json& j) {
    try {
      if (j.at("format").get<std::string>() != "hlmkit-ngram" ||
          j.at("version").get<int>() != kFormatVersion) {
        throw Error(ErrorCode::ValidationError, "unsupported model format/version");
      }
      std::map<Ngram, std::uint64_t> counts;
      for (const auto& entry : j.at("ngrams")) {
        counts[entry.at(0).get<Ngram>()] += entry.at(1).get<std::uint64_t>();
      }
      return NgramModel(j.at("order").get<int>(), j.at("discount").get<double>(),
                        j.at("vocabulary").get<std::vector<std::string>>(), counts);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
    }
  }

  std::string dump() const { return to_json().dump() + "\n"; }

  static NgramModel load(const std::filesystem::path& path) {
    const std::string text = io::read_file(path);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    return from_json(j);
  }

 private:
  struct ContextStats {
    std::map<TokenId, std::uint64_t> next;
    std::uint64_t total = 0;
  };
  using Level = std::map<std::vector<TokenId>, ContextStats>;

  Ngram to_tokens(const std::vector<TokenId>& ids) const {
    Ngram out;
    out.reserve(ids.size());
    for (const auto id : ids) out.push_back(vocab_[id]);
    return out;
  }

  // levels_[n-1] maps n-1 token contexts to counts of the next token: raw
  // counts at the highest order, continuation counts (distinct left
  // extensions) below it.
  void build_levels() {
    levels_.assign(static_cast<std::size_t>(order_), Level{});
    for (const auto& [gram, count] : counts_) {
      auto& stats = levels_.back()[{gram.begin(), gram.end() - 1}];
      stats.next[gram.back()] += count;
      stats.total += count;
    }
    std::set<std::vector<TokenId>> types;
    for (const auto& [gram, count] : counts_) types.insert(gram);
    for (int n = order_ - 1; n >= 1; --n) {
      // `types` holds distinct (n+1)-grams here.
      std::set<std::vector<TokenId>> shorter;
      for (const auto& gram : types) {
        std::vector<TokenId> suffix(gram.begin() + 1, gram.end());
        auto& stats = levels_[static_cast<std::size_t>(n - 1)][{suffix.begin(), suffix.end() - 1}];
        stats.next[suffix.back()] += 1;
        stats.total += 1;
        shorter.insert(std::move(suffix));
      }
      types = std::move(shorter);
    }
  }

  double level_probability(int n, std::span<const TokenId> context, TokenId target) const {
    const double lower = n == 1 ? 1.0 / static_cast<double>(vocab_.size() - 1)
                                : level_probability(n - 1, context.subspan(1), target);
    const auto& level = levels_[static_cast<std::size_t>(n - 1)];
    const auto it = level.find(std::vector<TokenId>(context.begin(), context.end()));
    if (it == level.end() || it->second.total == 0) return lower;
    const auto& stats = it->second;
    const auto c = stats.next.find(target);
    const double count = c == stats.next.end() ? 0.0 : static_cast<double>(c->second);
    const double total = static_cast<double>(stats.total);
    const double types = static_cast<double>(stats.next.size());
    return std::max(count - discount_, 0.0) / total + discount_ * types / total * lower;
  }

  int order_;
  double discount_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, TokenId> ids_;
  TokenId bos_ = 0;
  TokenId unk_ = 0;
  std::map<std::vector<TokenId>, std::uint64_t> counts_;
  std::vector<Level> levels_;
};

inline NgramModel train_lm(const std::vector<Document>& corpus, int order, double discount = 0.75) {
  return NgramModel::train(corpus, order, discount);
}

/// Surprisal of every real token, grouped by sentence (</s> is not scored).
inline std::vector<std::vector<double>> sentence_surprisals(const NgramModel& model,
                                                            const Document& doc,
                                                            LogBase base = LogBase::Two) {
  std::vector<std::vector<double>> out;
  const auto ctx_len = static_cast<std::size_t>(model.order() - 1);
  const auto bos = model.id_of(kSentenceStart);
  for (const auto& sentence : lm_sentences(doc.text)) {
    std::vector<NgramModel::TokenId> padded(ctx_len, bos);
    for (const auto& tok : sentence) padded.push_back(model.id_of(tok));
    std::vector<double> values;
    values.reserve(sentence.size());
    for (std::size_t i = ctx_len; i < padded.size(); ++i) {
      const std::span<const NgramModel::TokenId> ctx(padded.data() + i - ctx_len, ctx_len);
      values.push_back(surprisal_from_probability(model.probability_ids(ctx, padded[i]), base));
    }
    out.push_back(std::move(values));
  }
  if (out.empty()) throw Error(ErrorCode::EmptyDocument, "document '" + doc.id + "' has no tokens");
  return out;
}

inline SurprisalSequence token_surprisals(const NgramModel& model, const Document& doc,
                                          LogBase base = LogBase::Two) {
  SurprisalSequence seq{doc.id, {}, base};
  for (const auto& sentence : sentence_surprisals(model, doc, base)) {
    seq.values.insert(seq.values.end(), sentence.begin(), sentence.end());
  }
  return seq;
}

/// JSONL: {"id": string, "surprisals": [real...], "base": "2"|"e"} per line.
inline std::vector<SurprisalSequence> parse_surprisals(std::istream& in) {
  std::vector<SurprisalSequence> out;
  io::for_each_jsonl(in, [&](const json& obj, std::size_t line_no) {
    SurprisalSequence seq;
    seq.doc_id = io::require_string(obj, "id", line_no);
    const auto& values = io::require_field(obj, "surprisals", line_no);
    if (!values.is_array()) {
      throw Error(ErrorCode::ParseError, io::at_line(line_no) + ": 'surprisals' must be an array");
    }
    for (const auto& v : values) {
      if (!v.is_number()) {
        throw Error(ErrorCode::ParseError, io::at_line(line_no) + ": non-numeric surprisal");
      }
      seq.values.push_back(v.get<double>());
    }
    const auto base = io::require_string(obj, "base", line_no);
    try {
      seq.base = parse_log_base(base);
      validate(seq);
    } catch (const Error& e) {
      throw e.with_context(io::at_line(line_no));
    }
    out.push_back(std::move(seq));
  });
  return out;
}

inline std::vector<SurprisalSequence> import_surprisals(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return parse_surprisals(in);
}

inline std::string to_jsonl(const SurprisalSequence& seq) {
  return json{{"id", seq.doc_id}, {"surprisals", seq.values}, {"base", to_string(seq.base)}}.dump() +
         "\n";
}

}  // namespace hlmkit
