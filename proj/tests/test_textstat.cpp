#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "hlmkit/textstat.hpp"

using namespace hlmkit;

namespace {

std::string collapse_ws(const std::string& s) {
  std::string out;
  bool space = false;
  for (const char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
    } else {
      if (space && !out.empty()) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

TEST(SegmentSentences, SplitsOnTerminatorBeforeCapital) {
  EXPECT_EQ(segment_sentences("Hi. Bye."), (std::vector<std::string>{"Hi.", "Bye."}));
}

TEST(SegmentSentences, AbbreviationSuppressesSplit) {
  EXPECT_EQ(segment_sentences("Dr. Smith left."), (std::vector<std::string>{"Dr. Smith left."}));
  EXPECT_EQ(segment_sentences("Compare A vs. B today. Then stop."),
            (std::vector<std::string>{"Compare A vs. B today.", "Then stop."}));
}

TEST(SegmentSentences, TrailingTextIsOneSentence) {
  EXPECT_EQ(segment_sentences("No terminator"), (std::vector<std::string>{"No terminator"}));
}

TEST(SegmentSentences, LowercaseContinuationDoesNotSplit) {
  EXPECT_EQ(segment_sentences("It cost 3.5 dollars. it was fine."),
            (std::vector<std::string>{"It cost 3.5 dollars. it was fine."}));
}

TEST(SegmentSentences, HandlesTerminatorRunsAndQuotes) {
  // An opening quote is not an uppercase letter, so "Yes." does not end a sentence.
  EXPECT_EQ(segment_sentences("Really?! Yes.  \"Go.\" Now"),
            (std::vector<std::string>{"Really?!", "Yes.  \"Go.\"", "Now"}));
  EXPECT_EQ(segment_sentences("He said \"stop.\" Then left."),
            (std::vector<std::string>{"He said \"stop.\"", "Then left."}));
}

TEST(SegmentSentences, UnicodeWhitespaceSeparates) {
  // U+00A0 NO-BREAK SPACE between sentences.
  EXPECT_EQ(segment_sentences("One.\xC2\xA0Two."), (std::vector<std::string>{"One.", "Two."}));
}

TEST(SegmentSentences, EmptyTextIsAnError) {
  try {
    segment_sentences(" \n\t ");
    FAIL() << "expected EmptyDocument";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDocument);
  }
}

TEST(SegmentSentences, RoundTripPropertyOnRandomText) {
  std::mt19937 rng(7);
  const std::vector<std::string> pieces = {"The", "cat", "Dr.", "sat.", "Why?", "Go!", "e.g.",
                                           "A",   "b.",  "  ",  "\n",   "x",    "Mr.",  "ok"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      text += pieces[rng() % pieces.size()];
      text += (rng() % 3 == 0) ? "  " : " ";
    }
    if (collapse_ws(text).empty()) continue;
    const auto sentences = segment_sentences(text);
    ASSERT_GE(sentences.size(), 1u);
    std::string joined;
    for (const auto& s : sentences) joined += (joined.empty() ? "" : " ") + s;
    EXPECT_EQ(collapse_ws(joined), collapse_ws(text)) << text;
  }
}

TEST(TokenizeWords, StripsPunctuationAndKeepsHyphenatedCompounds) {
  EXPECT_EQ(tokenize_words("\"Well-known,\" she said... (twice) - 42!"),
            (std::vector<std::string>{"Well-known", "she", "said", "twice", "42"}));
}

TEST(CountSyllables, SpecExamples) {
  EXPECT_EQ(count_syllables("cat"), 1u);
  EXPECT_EQ(count_syllables("make"), 1u);
  EXPECT_EQ(count_syllables("beautiful"), 3u);
}

TEST(CountSyllables, HeuristicDetails) {
  EXPECT_EQ(count_syllables("the"), 1u);     // silent-e would reach 0
  EXPECT_EQ(count_syllables("free"), 1u);    // "ee" is one group, not a lone e
  EXPECT_EQ(count_syllables("happy"), 2u);   // y after consonant is a vowel
  EXPECT_EQ(count_syllables("day"), 1u);     // y after vowel is not
  EXPECT_EQ(count_syllables("yes"), 1u);     // leading y is a consonant
  EXPECT_EQ(count_syllables("rhythm"), 1u);
  EXPECT_EQ(count_syllables("Banana"), 3u);  // case-insensitive
  EXPECT_EQ(count_syllables("42"), 1u);      // non-alphabetic
  EXPECT_EQ(count_syllables("%"), 1u);
}

TEST(CountSyllables, AlwaysAtLeastOne) {
  std::mt19937 rng(11);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz-'0";
  for (int i = 0; i < 2000; ++i) {
    std::string w;
    const int len = 1 + static_cast<int>(rng() % 12);
    for (int k = 0; k < len; ++k) w.push_back(alphabet[rng() % alphabet.size()]);
    EXPECT_GE(count_syllables(w), 1u) << w;
  }
}

TEST(FleschScore, HandEvaluatedCases) {
  EXPECT_NEAR(flesch_score({1, 1, 1}), 121.22, 1e-9);
  EXPECT_NEAR(flesch_score({1, 3, 3}), 119.19, 1e-9);
  EXPECT_NEAR(flesch_score({2, 20, 30}), 69.785, 1e-9);
}

TEST(FleschScore, DegenerateStatsRejected) {
  EXPECT_THROW(flesch_score({0, 3, 3}), Error);
  EXPECT_THROW(flesch_score({1, 0, 0}), Error);
}

TEST(FleschScore, AlgebraicIdentityAndSyllableMonotonicity) {
  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t s = 1 + rng() % 20;
    const std::size_t w = 1 + rng() % 200;
    const std::size_t l = w + rng() % 300;
    const double direct = 206.835 - 1.015 * static_cast<double>(w) / static_cast<double>(s) -
                          84.6 * static_cast<double>(l) / static_cast<double>(w);
    EXPECT_NEAR(flesch_score({s, w, l}), direct, 1e-9);
    EXPECT_LT(flesch_score({s, w, l + 1}), flesch_score({s, w, l}));
  }
}

TEST(FleschScore, CustomConfig) {
  const FleschConfig cfg{100.0, 1.0, 10.0};
  EXPECT_DOUBLE_EQ(flesch_score({2, 4, 8}, cfg), 100.0 - 2.0 - 20.0);
}

TEST(ComputeStats, CountsDocument) {
  const auto stats = compute_stats("The cat sat. It was beautiful.");
  EXPECT_EQ(stats.sentences, 2u);
  EXPECT_EQ(stats.words, 6u);
  // the(1) cat(1) sat(1) it(1) was(1) beautiful(3)
  EXPECT_EQ(stats.syllables, 8u);
  EXPECT_GE(stats.syllables, stats.words);
}

TEST(ComputeStats, PunctuationOnlyIsDegenerate) {
  try {
    compute_stats("... !!!");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateStats);
  }
}
