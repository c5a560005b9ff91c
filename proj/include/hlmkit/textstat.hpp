#pragma once

// Sentence/word/syllable counting and the Flesch reading-ease score.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hlmkit/error.hpp"

namespace hlmkit {

struct Document {
  std::string id;
  std::string text;
};

struct TextStats {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t syllables = 0;
};

struct FleschConfig {
  double base = 206.835;
  double words_per_sentence_weight = 1.015;
  double syllables_per_word_weight = 84.6;
};

namespace detail {

// Decodes one UTF-8 code point starting at `pos` and advances `pos`.
// Malformed sequences yield U+FFFD and consume a single byte.
inline char32_t next_code_point(std::string_view s, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

constexpr bool is_unicode_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 ||
         cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

// Byte length of the whitespace code point at `pos`, or 0 if it is not space.
inline std::size_t space_length_at(std::string_view s, std::size_t pos) {
  std::size_t next = pos;
  const char32_t cp = next_code_point(s, next);
  return is_unicode_space(cp) ? next - pos : 0;
}

inline std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  while (begin < s.size()) {
    const std::size_t len = space_length_at(s, begin);
    if (len == 0) break;
    begin += len;
  }
  std::size_t end = begin;
  std::size_t pos = begin;
  while (pos < s.size()) {
    const std::size_t len = space_length_at(s, pos);
    if (len == 0) {
      next_code_point(s, pos);
      end = pos;
    } else {
      pos += len;
    }
  }
  return s.substr(begin, end - begin);
}

inline std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  std::size_t token_start = std::string_view::npos;
  while (pos < s.size()) {
    const std::size_t len = space_length_at(s, pos);
    if (len > 0) {
      if (token_start != std::string_view::npos) {
        out.push_back(s.substr(token_start, pos - token_start));
        token_start = std::string_view::npos;
      }
      pos += len;
    } else {
      if (token_start == std::string_view::npos) token_start = pos;
      next_code_point(s, pos);
    }
  }
  if (token_start != std::string_view::npos) out.push_back(s.substr(token_start));
  return out;
}

inline bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

inline bool is_ascii_alpha(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

inline char ascii_lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

inline std::string_view strip_punctuation(std::string_view token) {
  while (!token.empty() && is_ascii_punct(token.front())) token.remove_prefix(1);
  while (!token.empty() && is_ascii_punct(token.back())) token.remove_suffix(1);
  return token;
}

inline constexpr std::array<std::string_view, 12> kAbbreviations = {
    "dr.", "mr.", "mrs.", "ms.", "etc.", "e.g.",
    "i.e.", "vs.", "prof.", "jr.", "sr.", "st."};

inline bool is_abbreviation(std::string_view word) {
  while (!word.empty() && (word.front() == '(' || word.front() == '"' ||
                           word.front() == '\'' || word.front() == '[')) {
    word.remove_prefix(1);
  }
  std::string lowered(word);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), ascii_lower);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lowered) !=
         kAbbreviations.end();
}

constexpr bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }
constexpr bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}

}  // namespace detail

/// Splits after a run of [.?!] (plus closing quotes/brackets) that is followed
/// by whitespace and an uppercase ASCII letter, unless the word carrying the
/// terminator is a known abbreviation. Returned sentences are trimmed.
inline std::vector<std::string> segment_sentences(std::string_view text) {
  if (detail::trim(text).empty()) {
    throw Error(ErrorCode::EmptyDocument, "text is empty or whitespace-only");
  }
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!detail::is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && detail::is_terminator(text[j])) ++j;
    while (j < text.size() && detail::is_closer(text[j])) ++j;
    std::size_t k = j;
    while (k < text.size()) {
      const std::size_t len = detail::space_length_at(text, k);
      if (len == 0) break;
      k += len;
    }
    const bool has_space = k > j;
    if (!has_space || k >= text.size() ||
        !std::isupper(static_cast<unsigned char>(text[k]))) {
      i = j;
      continue;
    }
    std::size_t word_start = i;
    while (word_start > start &&
           !std::isspace(static_cast<unsigned char>(text[word_start - 1]))) {
      --word_start;
    }
    if (detail::is_abbreviation(text.substr(word_start, j - word_start))) {
      i = j;
      continue;
    }
    const auto sentence = detail::trim(text.substr(start, j - start));
    if (!sentence.empty()) sentences.emplace_back(sentence);
    start = k;
    i = k;
  }
  const auto tail = detail::trim(text.substr(start));
  if (!tail.empty()) sentences.emplace_back(tail);
  return sentences;
}

/// Whitespace tokenization with leading/trailing ASCII punctuation removed.
/// Hyphenated compounds stay one word; tokens that are pure punctuation vanish.
inline std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> words;
  for (const auto raw : detail::split_whitespace(text)) {
    const auto word = detail::strip_punctuation(raw);
    if (!word.empty()) words.emplace_back(word);
  }
  return words;
}

/// Vowel-group heuristic: maximal runs of a/e/i/o/u (and y when it follows a
/// consonant), minus one for a lone trailing "e", never below 1.
inline std::size_t count_syllables(std::string_view word) {
  std::string letters;
  letters.reserve(word.size());
  for (const char c : word) letters.push_back(detail::ascii_lower(c));

  auto is_plain_vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  };
  auto is_consonant = [&](char c) {
    return detail::is_ascii_alpha(c) && !is_plain_vowel(c) && c != 'y';
  };

  std::size_t groups = 0;
  bool in_group = false;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const char c = letters[i];
    const bool vowel =
        is_plain_vowel(c) || (c == 'y' && i > 0 && is_consonant(letters[i - 1]));
    if (vowel && !in_group) ++groups;
    in_group = vowel;
  }

  const std::size_t n = letters.size();
  const bool silent_e = n >= 2 && letters[n - 1] == 'e' && is_consonant(letters[n - 2]);
  if (silent_e && groups > 1) --groups;
  return std::max<std::size_t>(groups, 1);
}

inline TextStats compute_stats(std::string_view text) {
  TextStats stats;
  stats.sentences = segment_sentences(text).size();
  for (const auto& word : tokenize_words(text)) {
    ++stats.words;
    stats.syllables += count_syllables(word);
  }
  if (stats.words == 0) {
    throw Error(ErrorCode::DegenerateStats, "text contains no words");
  }
  return stats;
}

/// Higher is easier.
inline double flesch_score(const TextStats& stats, const FleschConfig& config = {}) {
  if (stats.sentences == 0 || stats.words == 0) {
    throw Error(ErrorCode::DegenerateStats, "sentence and word counts must be >= 1");
  }
  const auto s = static_cast<double>(stats.sentences);
  const auto w = static_cast<double>(stats.words);
  const auto l = static_cast<double>(stats.syllables);
  return config.base - config.words_per_sentence_weight * w / s -
         config.syllables_per_word_weight * l / w;
}

inline void validate(const Document& doc) {
  if (doc.id.empty()) throw Error(ErrorCode::ValidationError, "document id is empty");
  if (detail::trim(doc.text).empty()) {
    throw Error(ErrorCode::EmptyDocument, "document '" + doc.id + "' has no text");
  }
}

}  // namespace hlmkit
