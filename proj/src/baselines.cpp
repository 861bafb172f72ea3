#include "stancesum/baselines.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "stancesum/error.hpp"

namespace stancesum {

std::vector<Tweet> random_summary(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  std::vector<Tweet> pool = unique_candidates(corpus);
  if (k == 0 || k > pool.size()) {
    throw DomainError("random baseline: k=" + std::to_string(k) + " but " +
                      std::to_string(pool.size()) + " unique candidates");
  }
  // Partial Fisher-Yates: the first k slots become the sample.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

std::int64_t utc_day(std::int64_t timestamp) {
  constexpr std::int64_t kDay = 86400;
  return timestamp >= 0 ? timestamp / kDay : -((-timestamp + kDay - 1) / kDay);
}

std::vector<Tweet> most_rt_summary(const Corpus& corpus, std::size_t k,
                                   std::optional<std::int64_t> day) {
  std::vector<Tweet> pool = unique_candidates(corpus);
  if (day) std::erase_if(pool, [&](const Tweet& t) { return utc_day(t.timestamp) != *day; });
  if (pool.empty()) throw DomainError("most-retweeted baseline: no candidates on the requested day");
  std::sort(pool.begin(), pool.end(), [](const Tweet& a, const Tweet& b) {
    if (a.retweet_count != b.retweet_count) return a.retweet_count > b.retweet_count;
    return a.id < b.id;
  });
  if (pool.size() > k) pool.resize(k);
  return pool;
}

std::vector<std::string> sumbasic_words(std::string_view text,
                                        const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> words;
  for (const Token& token : tokenize(text)) {
    if (token.kind != TokenKind::kWord && token.kind != TokenKind::kHashtag) continue;
    if (stopwords.count(token.norm)) continue;
    words.push_back(token.norm);
  }
  return words;
}

std::vector<Tweet> sumbasic_summary(const Corpus& corpus, std::size_t k,
                                    const std::unordered_set<std::string>& stopwords,
                                    std::vector<SumBasicStep>* trace) {
  std::vector<Tweet> pool = unique_candidates(corpus);
  std::sort(pool.begin(), pool.end(), [](const Tweet& a, const Tweet& b) { return a.id < b.id; });

  std::vector<std::vector<std::string>> words(pool.size());
  std::map<std::string, double> prob;
  double total = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    words[i] = sumbasic_words(pool[i].text, stopwords);
    for (const std::string& w : words[i]) prob[w] += 1.0;
    total += static_cast<double>(words[i].size());
  }
  for (auto& [w, p] : prob) p /= total;

  std::vector<bool> picked(pool.size(), false);
  std::vector<Tweet> out;
  const std::size_t target = std::min(k, pool.size());
  while (out.size() < target) {
    // Highest-probability word still present in an unpicked tweet.
    std::string top;
    double top_p = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (picked[i]) continue;
      for (const std::string& w : words[i]) {
        const double p = prob[w];
        if (p > top_p || (p == top_p && w < top)) {
          top_p = p;
          top = w;
        }
      }
    }
    if (top_p < 0.0) break;

    std::optional<std::size_t> best;
    double best_avg = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (picked[i] || std::find(words[i].begin(), words[i].end(), top) == words[i].end()) continue;
      double sum = 0.0;
      for (const std::string& w : words[i]) sum += prob[w];
      const double avg = sum / static_cast<double>(words[i].size());
      if (avg > best_avg) {  // pool is id-sorted, so ties keep the smaller id
        best_avg = avg;
        best = i;
      }
    }
    picked[*best] = true;
    for (const std::string& w : std::set<std::string>(words[*best].begin(), words[*best].end())) {
      prob[w] *= prob[w];
    }
    out.push_back(pool[*best]);
    if (trace) trace->push_back({top, pool[*best].id, prob});
  }
  for (std::size_t i = 0; i < pool.size() && out.size() < target; ++i) {
    if (!picked[i]) {
      picked[i] = true;
      out.push_back(pool[i]);
    }
  }
  return out;
}

Summary baseline_summary(const Corpus& corpus, std::string method, std::size_t k,
                         const std::vector<Tweet>& tweets) {
  Summary s;
  s.topic = corpus.topic();
  s.method = std::move(method);
  s.k = k;
  s.stance_balanced = false;
  for (const Tweet& t : tweets) {
    ScoredTweet st;
    st.tweet = t;
    s.unlabeled.push_back(std::move(st));
  }
  return s;
}

}  // namespace stancesum
