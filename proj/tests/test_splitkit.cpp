#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hlmkit/splitkit.hpp"

using namespace hlmkit;

namespace {

std::vector<DifficultyScore> scores_from(const std::vector<double>& values, Criterion c = Criterion::UidSl,
                                         bool higher_is_harder = true) {
  std::vector<DifficultyScore> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push_back({"doc" + std::to_string(i + 1), c, values[i], higher_is_harder});
  }
  return out;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ValidationError;
}

}  // namespace

TEST(ScoreCorpus, FleschIsEasierWhenHigher) {
  const auto scores = score_corpus({{"d1", "Cat sat down."}}, Criterion::Flesch, {});
  ASSERT_EQ(scores.size(), 1u);
  EXPECT_NEAR(scores[0].value, 119.19, 1e-9);
  EXPECT_FALSE(scores[0].higher_is_harder);
}

TEST(ScoreCorpus, UidVarianceAtLanguageMean) {
  const SurprisalTable table = index_surprisals({{"d1", {3.8845, 3.8845, 3.8845}, LogBase::Two}});
  ScoringProviders p;
  p.surprisals = &table;
  const auto scores = score_corpus({{"d1", "irrelevant text"}}, Criterion::UidVar, p);
  EXPECT_EQ(scores[0].value, 0.0);
  EXPECT_TRUE(scores[0].higher_is_harder);
}

TEST(ScoreCorpus, NeuralPassthrough) {
  std::istringstream in("{\"id\":\"d1\",\"score\":2.0}\n{\"id\":\"d2\",\"score\":-1,\"higher_is_harder\":false}\n");
  const auto neural = parse_neural_scores(in);
  ScoringProviders p;
  p.neural = &neural;
  const auto scores = score_corpus({{"d1", "a"}, {"d2", "b"}}, Criterion::Neural, p);
  EXPECT_EQ(scores[0].value, 2.0);
  EXPECT_TRUE(scores[0].higher_is_harder);
  EXPECT_EQ(scores[1].value, -1.0);
  EXPECT_FALSE(scores[1].higher_is_harder);
}

TEST(ScoreCorpus, MissingSources) {
  const std::vector<Document> corpus{{"d1", "Some words here."}};
  EXPECT_EQ(code_of([&] { score_corpus(corpus, Criterion::UidSl, {}); }), ErrorCode::MissingSurprisal);
  EXPECT_EQ(code_of([&] { score_corpus(corpus, Criterion::Neural, {}); }), ErrorCode::MissingScore);
  const NeuralScores other{{"zz", {1.0, true}}};
  ScoringProviders p;
  p.neural = &other;
  try {
    score_corpus(corpus, Criterion::Neural, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingScore);
    EXPECT_NE(std::string(e.what()).find("d1"), std::string::npos);
  }
  EXPECT_EQ(code_of([&] { score_corpus({}, Criterion::Flesch, {}); }), ErrorCode::EmptyCorpus);
}

TEST(ScoreCorpus, LanguageModelProvider) {
  const std::vector<Document> corpus{{"a", "The cat sat. The dog sat."}, {"b", "Cats and dogs ran far away."}};
  const auto model = train_lm(corpus, 2);
  ScoringProviders p;
  p.model = &model;
  const auto scores = score_corpus(corpus, Criterion::UidSl, p);
  const auto direct = token_surprisals(model, corpus[1]);
  EXPECT_DOUBLE_EQ(scores[1].value, uid_superlinear(direct.values));

  p.per_sentence = true;
  const auto per = score_corpus(corpus, Criterion::UidSl, p);
  const auto sentences = sentence_surprisals(model, corpus[0]);
  EXPECT_DOUBLE_EQ(per[0].value, (uid_superlinear(sentences[0]) + uid_superlinear(sentences[1])) / 2);
}

TEST(ScoreCorpus, ImportedSurprisalsAreConvertedToRequestedBase) {
  const SurprisalTable table = index_surprisals({{"d1", {1.0, 1.0}, LogBase::E}});
  ScoringProviders p;
  p.surprisals = &table;
  p.variance.mu_lang = 0.0;
  const auto bits = score_corpus({{"d1", "x"}}, Criterion::UidVar, p);
  EXPECT_NEAR(bits[0].value, 1.0 / (std::log(2.0) * std::log(2.0)), 1e-12);
}

TEST(ScoreCorpus, ThreadedMatchesSequential) {
  std::vector<Document> corpus;
  for (int i = 0; i < 200; ++i) {
    corpus.push_back({"d" + std::to_string(i), "Sentence number " + std::to_string(i) + " is here. Another one."});
  }
  ScoringProviders p;
  const auto seq = score_corpus(corpus, Criterion::Flesch, p);
  p.threads = 8;
  const auto par = score_corpus(corpus, Criterion::Flesch, p);
  ASSERT_EQ(seq.size(), par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(seq[i].doc_id, par[i].doc_id);
    EXPECT_EQ(seq[i].value, par[i].value);
  }
}

TEST(ScoreCorpus, ThreadedRethrowsFirstFailureInCorpusOrder) {
  std::vector<Document> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back({"d" + std::to_string(i), "Fine text."});
  corpus[10].text = "...";
  corpus[40].text = "!!!";
  ScoringProviders p;
  p.threads = 4;
  try {
    score_corpus(corpus, Criterion::Flesch, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateStats);
  }
}

TEST(TertileSplit, NineEqualTertiles) {
  const auto split = tertile_split(scores_from({1, 2, 3, 4, 5, 6, 7, 8, 9}));
  EXPECT_EQ(split.easy, (std::vector<std::string>{"doc1", "doc2", "doc3"}));
  EXPECT_EQ(split.medium, (std::vector<std::string>{"doc4", "doc5", "doc6"}));
  EXPECT_EQ(split.hard, (std::vector<std::string>{"doc7", "doc8", "doc9"}));
  EXPECT_EQ(split.boundaries, (std::array<double, 2>{3, 6}));
}

TEST(TertileSplit, RemainderGoesEasyFirst) {
  const auto split = tertile_split(scores_from({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
  EXPECT_EQ(split.easy.size(), 4u);
  EXPECT_EQ(split.medium.size(), 3u);
  EXPECT_EQ(split.hard.size(), 3u);
  const auto eleven = tertile_split(scores_from({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}));
  EXPECT_EQ(eleven.easy.size(), 4u);
  EXPECT_EQ(eleven.medium.size(), 4u);
  EXPECT_EQ(eleven.hard.size(), 3u);
}

TEST(TertileSplit, FleschHigherIsEasier) {
  const auto split = tertile_split(scores_from({10, 20, 30, 40, 50, 60, 70, 80, 90}, Criterion::Flesch, false));
  EXPECT_EQ(as_set(split.easy), (std::set<std::string>{"doc7", "doc8", "doc9"}));
  EXPECT_EQ(as_set(split.hard), (std::set<std::string>{"doc1", "doc2", "doc3"}));
}

TEST(TertileSplit, TiesBreakOnDocId) {
  std::vector<DifficultyScore> s{{"c", Criterion::UidSl, 1, true}, {"a", Criterion::UidSl, 1, true},
                                 {"b", Criterion::UidSl, 1, true}};
  const auto split = tertile_split(s);
  EXPECT_EQ(split.easy, (std::vector<std::string>{"a"}));
  EXPECT_EQ(split.medium, (std::vector<std::string>{"b"}));
  EXPECT_EQ(split.hard, (std::vector<std::string>{"c"}));
}

TEST(TertileSplit, Errors) {
  EXPECT_EQ(code_of([] { tertile_split(scores_from({1, 2})); }), ErrorCode::TooSmall);
  auto dup = scores_from({1, 2, 3});
  dup[2].doc_id = "doc1";
  EXPECT_EQ(code_of([&] { tertile_split(dup); }), ErrorCode::ValidationError);
  auto mixed = scores_from({1, 2, 3});
  mixed[1].criterion = Criterion::Flesch;
  EXPECT_EQ(code_of([&] { tertile_split(mixed); }), ErrorCode::ValidationError);
  auto nan = scores_from({1, 2, std::nan("")});
  EXPECT_EQ(code_of([&] { tertile_split(nan); }), ErrorCode::ValidationError);
}

TEST(TertileSplit, RandomCorpusProperties) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 300;
    const bool harder = rng() % 2 == 0;
    std::vector<double> values(n);
    for (auto& v : values) v = static_cast<double>(rng() % 50);  // plenty of ties
    auto scores = scores_from(values, Criterion::Neural, harder);
    const auto split = tertile_split(scores);

    std::map<std::string, double> difficulty;
    for (const auto& s : scores) difficulty[s.doc_id] = s.normalized();
    std::vector<std::string> all = split.easy;
    all.insert(all.end(), split.medium.begin(), split.medium.end());
    all.insert(all.end(), split.hard.begin(), split.hard.end());
    ASSERT_EQ(all.size(), n);
    ASSERT_EQ(as_set(all).size(), n);

    for (std::size_t i = 1; i < all.size(); ++i) ASSERT_LE(difficulty[all[i - 1]], difficulty[all[i]]);
    const auto sizes = {split.easy.size(), split.medium.size(), split.hard.size()};
    ASSERT_LE(std::max(sizes) - std::min(sizes), 1u);
    ASSERT_GE(split.easy.size(), split.medium.size());
    ASSERT_GE(split.medium.size(), split.hard.size());

    std::shuffle(scores.begin(), scores.end(), rng);
    const auto again = tertile_split(scores);
    ASSERT_EQ(again.easy, split.easy);
    ASSERT_EQ(again.medium, split.medium);
    ASSERT_EQ(again.hard, split.hard);
  }
}

TEST(SplitJson, RoundTrip) {
  const auto split = tertile_split(scores_from({5, 1, 9, 3, 7}));
  const auto back = split_from_json(to_json(split));
  EXPECT_EQ(back.easy, split.easy);
  EXPECT_EQ(back.medium, split.medium);
  EXPECT_EQ(back.hard, split.hard);
  EXPECT_EQ(back.boundaries, split.boundaries);
  EXPECT_EQ(back.criterion, split.criterion);
}

TEST(ScoresJsonl, ParseErrorsNameTheLine) {
  std::istringstream in(
      "{\"id\":\"a\",\"criterion\":\"flesch\",\"value\":1,\"higher_is_harder\":false}\n"
      "{\"id\":\"b\",\"criterion\":\"bogus\",\"value\":1,\"higher_is_harder\":false}\n");
  try {
    parse_scores(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}
