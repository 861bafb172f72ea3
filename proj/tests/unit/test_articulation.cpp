#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "stancesum/articulation.hpp"
#include "stancesum/error.hpp"
#include "stancesum/logistic.hpp"
#include "stancesum/synthgen.hpp"
#include "test_support.hpp"

using namespace stancesum;
using testsupport::tweet;

namespace {

const Lexicons& lexicons() {
  static const Lexicons lex = Lexicons::load(testsupport::lexicon_dir());
  return lex;
}

logistic::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  logistic::Dataset d;
  d.dimension = dim;
  for (std::size_t i = 0; i < n; ++i) {
    logistic::SparseRow row;
    for (std::uint32_t j = 0; j < dim; ++j) {
      if (rng() % 3 != 0) row.emplace_back(j, normal(rng));
    }
    d.rows.push_back(row);
    d.labels.push_back(static_cast<int>(rng() % 2));
  }
  return d;
}

}  // namespace

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t dim = 1 + rng() % 8;
    const logistic::Dataset d = random_dataset(rng, 2 + rng() % 20, dim);
    std::vector<double> params(dim + 1);
    for (double& p : params) p = normal(rng);
    const double l2 = 0.1 * static_cast<double>(rng() % 30);
    std::vector<double> grad;
    logistic::objective(params, d, l2, &grad);
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t j = 0; j < params.size(); ++j) {
      const double h = 1e-5;
      std::vector<double> plus = params, minus = params;
      plus[j] += h;
      minus[j] -= h;
      const double fd = (logistic::objective(plus, d, l2, nullptr) -
                         logistic::objective(minus, d, l2, nullptr)) /
                        (2 * h);
      diff2 += (fd - grad[j]) * (fd - grad[j]);
      norm2 += grad[j] * grad[j];
    }
    CHECK(std::sqrt(diff2) <= 1e-5 * std::max(std::sqrt(norm2), 1e-3));
  }
}

TEST_CASE("logistic fit reaches a stationary point") {
  std::mt19937_64 rng(2);
  const logistic::Dataset d = random_dataset(rng, 50, 4);
  const auto r = logistic::fit(d, {1.0, 1e-6, 5000});
  CHECK(r.converged);
  CHECK(r.gradient_norm <= 1e-6);
  CHECK_THROWS_AS(logistic::fit(logistic::Dataset{}, {}), TrainingError);
}

TEST_CASE("feature examples") {
  const ArticulationFeatures clean =
      extract_features(tweet("1", "u", "we love green apple pie"), lexicons());
  CHECK(clean.oov_ratio == 0.0);
  CHECK(clean.offensive_ratio == 0.0);

  const ArticulationFeatures rude = extract_features(tweet("2", "u", "go f***ing get one"), lexicons());
  CHECK(rude.offensive_ratio == 0.25);

  const ArticulationFeatures stop =
      extract_features(tweet("3", "u", "before I formed you in the womb"), lexicons());
  CHECK(stop.stopword_ratio == 5.0 / 7.0);
  CHECK(stop.tweet_length == 31.0);
  CHECK(stop.avg_word_length == doctest::Approx(25.0 / 7.0));
}

TEST_CASE("empty tweet gives a zero vector") {
  const ArticulationFeatures f = extract_features(tweet("e", "u", ""), lexicons());
  CHECK(f.tweet_length == 0.0);
  for (double r : f.pos_tag_ratios) CHECK(r == 0.0);
  CHECK(f.pos_ngram_counts.empty());
  CHECK(to_model_row(f).empty());
}

TEST_CASE("feature invariants on varied tweets") {
  const std::vector<std::string> texts = {
      "RT @bob: #MAGA rocks! http://x.co :)", "lol idk ppl smh", "The court ruled today.",
      "f*ck this crap 2day!!!", "Ünïcode wörds and 😀😀", "42", "I'm sure there's time.",
      "@a @b #c #d"};
  for (const std::string& text : texts) {
    CAPTURE(text);
    const ArticulationFeatures f = extract_features(tweet("x", "u", text), lexicons());
    double sum = 0.0;
    for (double r : f.pos_tag_ratios) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
      sum += r;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    for (double r : {f.oov_ratio, f.offensive_ratio, f.stopword_ratio}) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
    CHECK(f.tweet_length >= 0.0);
    CHECK(f.avg_word_length >= 0.0);
    for (const auto& [bucket, count] : f.pos_ngram_counts) CHECK(bucket < kPosNgramBuckets);
    const auto row = to_model_row(f);
    for (const auto& [idx, v] : row) CHECK(idx < kArticulationDimension);
  }
}

TEST_CASE("rule tagger uses token kinds and closed classes") {
  const RulePosTagger tagger;
  const TokenStream tokens = tokenize("RT @bob: I love the #cause at http://x.co :) 5 quickly");
  const auto tags = tagger.tag(tokens);
  std::string symbols;
  for (PosTag t : tags) symbols += pos_tag_symbol(t);
  CHECK(symbols == "~@,ON"  "D#PUE$R");
}

TEST_CASE("dictionary lookup handles inflections") {
  for (const char* w : {"rocks", "babies", "stopped", "making", "walked", "quickly", "don't",
                        "mother's", "clinics"}) {
    CAPTURE(w);
    CHECK(lexicons().in_dictionary(w));
  }
  for (const char* w : {"lol", "smh", "idk", "sux", "2day"}) {
    CAPTURE(w);
    CHECK(!lexicons().in_dictionary(w));
  }
}

TEST_CASE("features depend only on the tweet itself") {
  const Tweet t = tweet("x", "u", "History will remember this ruling.");
  const auto a = extract_features(t, lexicons());
  Tweet other = t;
  other.id = "y";
  other.user_id = "someone-else";
  other.timestamp = 99;
  const auto b = extract_features(other, lexicons());
  CHECK(a.pos_tag_ratios == b.pos_tag_ratios);
  CHECK(a.pos_ngram_counts == b.pos_ngram_counts);
  CHECK(a.oov_ratio == b.oov_ratio);
}

TEST_CASE("zero model scores one half, empty tweet scores sigmoid(bias)") {
  ArticulationModel zero = ArticulationModel::zero();
  CHECK(score(zero, extract_features(tweet("1", "u", "anything at all"), lexicons())) == 0.5);
  zero.params[0] = 1.3;
  CHECK(score(zero, extract_features(tweet("2", "u", ""), lexicons())) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-1.3))).epsilon(1e-15));
}

TEST_CASE("separable synthetic set trains to high accuracy") {
  const auto labeled = generate_labeled_set(60, 5);
  const ArticulationModel model = train_articulation(labeled, lexicons());
  REQUIRE(model.fold_accuracies.size() == 5);
  CHECK(model.cv_accuracy() >= 0.95);

  const auto held_out = generate_labeled_set(50, 77);
  double clean = 0.0, noisy = 0.0;
  for (const auto& item : held_out) {
    const double s = score(model, extract_features(item.tweet, lexicons()));
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    (item.articulate ? clean : noisy) += s;
  }
  CHECK(clean / 50 > noisy / 50);
}

TEST_CASE("duplicating every example with doubled l2 keeps the decision boundary") {
  const auto labeled = generate_labeled_set(40, 8);
  auto doubled = labeled;
  doubled.insert(doubled.end(), labeled.begin(), labeled.end());
  ArticulationTrainOptions base;
  base.folds = 0;
  ArticulationTrainOptions dup = base;
  dup.l2 = 2.0 * base.l2;
  const ArticulationModel m1 = train_articulation(labeled, lexicons(), base);
  const ArticulationModel m2 = train_articulation(doubled, lexicons(), dup);
  const auto probe = generate_labeled_set(100, 123);
  std::size_t agree = 0;
  for (const auto& item : probe) {
    const auto f = extract_features(item.tweet, lexicons());
    agree += (score(m1, f) >= 0.5) == (score(m2, f) >= 0.5) ? 1 : 0;
  }
  CHECK(static_cast<double>(agree) / probe.size() >= 0.99);
}

TEST_CASE("training is deterministic and rejects single-class input") {
  const auto labeled = generate_labeled_set(20, 1);
  const ArticulationModel a = train_articulation(labeled, lexicons());
  const ArticulationModel b = train_articulation(labeled, lexicons());
  CHECK(a.params == b.params);
  CHECK(a.fold_accuracies == b.fold_accuracies);

  std::vector<LabeledTweet> one_class;
  for (const auto& item : labeled) {
    if (item.articulate) one_class.push_back(item);
  }
  CHECK_THROWS_AS(train_articulation(one_class, lexicons()), TrainingError);
  std::vector<LabeledTweet> tiny = {one_class[0], one_class[1], labeled[1]};
  CHECK_THROWS_AS(train_articulation(tiny, lexicons()), TrainingError);
}

TEST_CASE("model save/load round trip and schema check") {
  const ArticulationModel model = train_articulation(generate_labeled_set(20, 2), lexicons());
  std::stringstream ss;
  model.save(ss);
  const std::string text = ss.str();
  const ArticulationModel back = ArticulationModel::load(ss);
  CHECK(back.params == model.params);
  CHECK(back.fold_accuracies == model.fold_accuracies);
  std::stringstream again;
  back.save(again);
  CHECK(again.str() == text);

  std::string tampered = text;
  tampered.replace(tampered.find("schema ") + 7, 4, "ffff");
  std::stringstream bad(tampered);
  CHECK_THROWS_AS(ArticulationModel::load(bad), FormatError);
}

TEST_CASE("labeled set reader") {
  std::stringstream ok("{\"text\":\"Fine words.\",\"label\":1}\n\n{\"text\":\"lol\",\"label\":0}\n");
  const auto items = read_labeled(ok);
  REQUIRE(items.size() == 2);
  CHECK(items[0].articulate);
  CHECK(!items[1].articulate);
  std::stringstream bad("{\"text\":\"x\",\"label\":2}\n");
  CHECK_THROWS_AS(read_labeled(bad), FormatError);
}

TEST_CASE("shipped labeled set is balanced and parses") {
  const auto items = read_labeled(testsupport::data_dir() / "articulation_labeled.jsonl");
  std::size_t pos = 0;
  for (const auto& item : items) pos += item.articulate ? 1 : 0;
  CHECK(pos == 150);
  CHECK(items.size() == 300);
}
