#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "stancesum/baselines.hpp"
#include "stancesum/error.hpp"
#include "test_support.hpp"

using namespace stancesum;
using testsupport::corpus_of;
using testsupport::tweet;

namespace {

std::vector<std::string> ids(const std::vector<Tweet>& tweets) {
  std::vector<std::string> out;
  for (const Tweet& t : tweets) out.push_back(t.id);
  return out;
}

// Closed-form SumBasic: after word w has been in m picked tweets its
// probability is p0(w)^(2^m). Recomputes everything from the pick history.
std::vector<std::string> sumbasic_oracle(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
                                         std::size_t k) {
  std::map<std::string, double> p0;
  double total = 0;
  for (const auto& [id, words] : docs) {
    for (const auto& w : words) p0[w] += 1;
    total += static_cast<double>(words.size());
  }
  for (auto& [w, p] : p0) p /= total;
  std::vector<bool> picked(docs.size(), false);
  std::vector<std::string> out;
  auto prob = [&](const std::string& w) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (picked[i] && std::count(docs[i].second.begin(), docs[i].second.end(), w) > 0) ++m;
    }
    double p = p0[w];
    for (std::size_t j = 0; j < m; ++j) p *= p;
    return p;
  };
  while (out.size() < std::min(k, docs.size())) {
    std::set<std::string> live;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (!picked[i]) live.insert(docs[i].second.begin(), docs[i].second.end());
    }
    if (live.empty()) break;
    std::string top;
    double top_p = -1;
    for (const auto& w : live) {  // ordered, so the first maximum is the smallest word
      if (prob(w) > top_p) {
        top_p = prob(w);
        top = w;
      }
    }
    std::size_t best = docs.size();
    double best_avg = -1;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const auto& words = docs[i].second;
      if (picked[i] || std::count(words.begin(), words.end(), top) == 0) continue;
      double sum = 0;
      for (const auto& w : words) sum += prob(w);
      if (sum / static_cast<double>(words.size()) > best_avg) {
        best_avg = sum / static_cast<double>(words.size());
        best = i;
      }
    }
    picked[best] = true;
    out.push_back(docs[best].first);
  }
  for (std::size_t i = 0; i < docs.size() && out.size() < std::min(k, docs.size()); ++i) {
    if (!picked[i]) {
      picked[i] = true;
      out.push_back(docs[i].first);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("random: k equal to the candidate count returns everything") {
  const Corpus c = corpus_of({"a", "b", "c", "d"});
  auto got = ids(random_summary(c, 4, 11));
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::string>{"t0", "t1", "t2", "t3"});
  CHECK_THROWS_AS(random_summary(c, 5, 0), DomainError);
  CHECK_THROWS_AS(random_summary(c, 0, 0), DomainError);
}

TEST_CASE("random: fixed seed is reproducible, samples are distinct") {
  const Corpus c = corpus_of({"a", "b", "c", "d", "e", "f", "g", "h"});
  CHECK(ids(random_summary(c, 3, 5)) == ids(random_summary(c, 3, 5)));
  bool differs = false;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = ids(random_summary(c, 3, seed));
    CHECK(std::set<std::string>(s.begin(), s.end()).size() == 3);
    differs = differs || s != ids(random_summary(c, 3, 5));
  }
  CHECK(differs);
}

TEST_CASE("random: selection is uniform") {
  std::vector<std::string> texts;
  for (int i = 0; i < 10; ++i) texts.push_back("text " + std::to_string(i));
  const Corpus c = corpus_of(texts);
  std::map<std::string, int> hits;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) ++hits[random_summary(c, 1, static_cast<std::uint64_t>(seed))[0].id];
  REQUIRE(hits.size() == 10);
  for (const auto& [id, n] : hits) {
    CAPTURE(id);
    CHECK(std::abs(static_cast<double>(n) / trials - 0.1) <= 0.02);
  }
}

TEST_CASE("most-rt: ordering, ties and day filter") {
  const std::int64_t day0 = 1'500'000'000 - 1'500'000'000 % 86400;
  const Corpus c("t", {tweet("c", "u", "one", day0 + 10, 5), tweet("a", "u", "two", day0 + 20, 5),
                       tweet("b", "u", "three", day0 + 30, 9), tweet("d", "u", "four", day0 + 86400, 50)});
  CHECK(ids(most_rt_summary(c, 3)) == std::vector<std::string>{"d", "b", "a"});
  CHECK(ids(most_rt_summary(c, 10, utc_day(day0))) == std::vector<std::string>{"b", "a", "c"});
  CHECK_THROWS_AS(most_rt_summary(c, 3, utc_day(day0) + 5), DomainError);
  CHECK(utc_day(-1) == -1);
  CHECK(utc_day(0) == 0);
  CHECK(utc_day(86399) == 0);
}

TEST_CASE("most-rt: corpus order does not matter") {
  std::vector<Tweet> tweets;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 40; ++i) {
    tweets.push_back(tweet("id" + std::to_string(i), "u", "text " + std::to_string(i), i,
                           static_cast<std::int64_t>(rng() % 6)));
  }
  const auto expected = ids(most_rt_summary(Corpus("t", tweets), 10));
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(tweets.begin(), tweets.end(), rng);
    CHECK(ids(most_rt_summary(Corpus("t", tweets), 10)) == expected);
  }
}

TEST_CASE("sumbasic content words") {
  CHECK(sumbasic_words("The vote is TODAY #Vote @x http://a.co 42", {"the", "is"}) ==
        std::vector<std::string>{"vote", "today", "#vote"});
}

TEST_CASE("sumbasic hand-traced fixture: word ties and average ties") {
  const Corpus c = corpus_of({"apple banana", "apple cherry", "banana cherry apple", "date"});
  std::vector<SumBasicStep> trace;
  CHECK(ids(sumbasic_summary(c, 4, {}, &trace)) == std::vector<std::string>{"t0", "t1", "t3", "t2"});
  REQUIRE(trace.size() == 4);
  CHECK(trace[0].top_word == "apple");
  CHECK(trace[0].probabilities.at("apple") == doctest::Approx(0.140625));
  CHECK(trace[0].probabilities.at("banana") == doctest::Approx(0.0625));
  CHECK(trace[1].top_word == "cherry");
  CHECK(trace[1].probabilities.at("apple") == doctest::Approx(0.019775390625));
  CHECK(trace[2].top_word == "date");
  CHECK(trace[3].top_word == "banana");
}

TEST_CASE("sumbasic hand-traced fixture: stopwords, hashtags, duplicates") {
  const Corpus c = corpus_of({"the vote is today #vote", "vote now", "the vote is today #vote",
                              "today is sunny"});
  std::vector<SumBasicStep> trace;
  CHECK(ids(sumbasic_summary(c, 2, {"the", "is"}, &trace)) == std::vector<std::string>{"t0", "t1"});
  REQUIRE(trace.size() == 2);
  CHECK(trace[0].top_word == "today");
  CHECK(trace[0].probabilities.at("vote") == doctest::Approx(4.0 / 49));
  CHECK(trace[0].probabilities.at("#vote") == doctest::Approx(1.0 / 49));
  CHECK(trace[1].top_word == "now");
  CHECK(ids(sumbasic_summary(c, 10, {"the", "is"})).size() == 3);
}

TEST_CASE("sumbasic hand-traced fixture: leftover slots fill in id order") {
  const Corpus c = corpus_of({"the", "cats cats dogs", "dogs"});
  std::vector<SumBasicStep> trace;
  CHECK(ids(sumbasic_summary(c, 5, {"the"}, &trace)) == std::vector<std::string>{"t1", "t2", "t0"});
  REQUIRE(trace.size() == 2);
  CHECK(trace[0].top_word == "cats");
  CHECK(trace[1].top_word == "dogs");
}

TEST_CASE("sumbasic matches the closed-form oracle on random corpora") {
  std::mt19937_64 rng(31);
  const std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta", "eps", "zeta", "#tag"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> texts;
    std::vector<std::pair<std::string, std::vector<std::string>>> docs;
    const std::size_t n = 1 + rng() % 9;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> words;
      const std::size_t len = rng() % 5;
      std::string text = "doc" + std::string(i + 1, 'x');
      for (std::size_t j = 0; j < len; ++j) {
        words.push_back(vocab[rng() % vocab.size()]);
        text += " " + words.back();
      }
      words.insert(words.begin(), "doc" + std::string(i + 1, 'x'));
      texts.push_back(text);
      docs.emplace_back("t" + std::to_string(i), words);
    }
    std::sort(docs.begin(), docs.end());
    const std::size_t k = 1 + rng() % 10;
    CAPTURE(trial);
    CHECK(ids(sumbasic_summary(corpus_of(texts), k, {})) == sumbasic_oracle(docs, k));
  }
}

TEST_CASE("sumbasic: the top word's probability drops after each pick") {
  const Corpus c = corpus_of({"a b c", "a c", "b d e", "a e", "c c d", "b"});
  std::vector<SumBasicStep> trace;
  sumbasic_summary(c, 6, {}, &trace);
  std::map<std::string, double> before;
  for (const char* w : {"a", "b", "c", "d", "e"}) before[w] = 0;
  // Initial probabilities from counts: a3 b3 c4 d2 e2 out of 14.
  before = {{"a", 3.0 / 14}, {"b", 3.0 / 14}, {"c", 4.0 / 14}, {"d", 2.0 / 14}, {"e", 2.0 / 14}};
  for (const SumBasicStep& step : trace) {
    CHECK(step.probabilities.at(step.top_word) < before.at(step.top_word));
    for (const auto& [w, p] : step.probabilities) CHECK(p <= before.at(w));
    before = step.probabilities;
  }
}

TEST_CASE("every baseline returns min(k, available) distinct tweets") {
  const Corpus c = corpus_of({"a b", "c d", "a b", "e", "f g h", "i"});
  const std::size_t available = unique_candidates(c).size();
  REQUIRE(available == 5);
  for (std::size_t k : {1, 3, 5, 8}) {
    std::vector<std::vector<Tweet>> outputs = {most_rt_summary(c, k), sumbasic_summary(c, k, {})};
    if (k <= available) outputs.push_back(random_summary(c, k, 3));
    for (const auto& out : outputs) {
      CHECK(out.size() == std::min(k, available));
      const auto got = ids(out);
      CHECK(std::set<std::string>(got.begin(), got.end()).size() == got.size());
    }
  }
  const Summary s = baseline_summary(c, "MostRT", 3, most_rt_summary(c, 3));
  CHECK(!s.stance_balanced);
  CHECK(s.unlabeled.size() == 3);
  CHECK(s.gamma_a.empty());
  CHECK(s.method == "MostRT");
}
