#include "stancesum/summarizer.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <thread>

#include "stancesum/error.hpp"

namespace stancesum {

double harmonic_mean(double stance, double articulation, double relevance) {
  auto clamp = [](double v) { return std::clamp(v, kScoreFloor, 1.0); };
  return 3.0 / (1.0 / clamp(stance) + 1.0 / clamp(articulation) + 1.0 / clamp(relevance));
}

double stance_score(const TweetPosterior& posterior, const StanceHashtagTable& table, Label stance,
                    const StanceScoreOptions& options) {
  auto side_sum = [&](Label side) {
    double sum = 0.0;
    for (const auto& [hashtag, p_s] : table.hashtags(side)) {
      double term = posterior(hashtag) * p_s;
      if (options.priors) {
        const auto it = options.priors->find(hashtag);
        term *= it == options.priors->end() ? 0.0 : it->second;
      }
      sum += term;
    }
    return sum;
  };
  return side_sum(stance) - side_sum(opposite(stance));
}

double stance_score(const Tweet& tweet, const StanceHashtagTable& table,
                    const HashtagPredictor& predictor, Label stance,
                    const StanceScoreOptions& options) {
  return stance_score(TweetPosterior(predictor, tweet), table, stance, options);
}

std::vector<const ScoredTweet*> Summary::all() const {
  std::vector<const ScoredTweet*> out;
  for (const auto* list : {&gamma_a, &gamma_b, &unlabeled}) {
    for (const ScoredTweet& s : *list) out.push_back(&s);
  }
  return out;
}

namespace {

void check_inputs(const ScoringModels& models, const SummarizerConfig& config) {
  if (config.k < 2 || config.k % 2 != 0) throw DomainError("k must be even and at least 2");
  if (!models.table || !models.predictor || !models.articulation || !models.relevance) {
    throw DomainError("summarizer needs a stance table, a hashtag predictor and both scorers");
  }
  if (config.community_only && !config.assignment) {
    throw DomainError("community-only selection needs a community assignment");
  }
  if (!config.aggregator) throw DomainError("aggregator is empty");
}

bool rank_before(const ScoredTweet& a, const ScoredTweet& b) {
  if (a.aggregate != b.aggregate) return a.aggregate > b.aggregate;
  return a.tweet.id < b.tweet.id;
}

std::string method_name(const char* base, bool community_only) {
  return std::string(base) + (community_only ? "-C" : "");
}

}  // namespace

void normalize_and_rank(std::vector<ScoredTweet>& pool, const Aggregator& aggregator) {
  auto normalize = [&pool](double ScoredTweet::*raw, double ScoredTweet::*norm) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const ScoredTweet& s : pool) {
      lo = std::min(lo, s.*raw);
      hi = std::max(hi, s.*raw);
    }
    for (ScoredTweet& s : pool) {
      s.*norm = hi > lo ? std::max(kScoreFloor, (s.*raw - lo) / (hi - lo)) : 1.0;
    }
  };
  normalize(&ScoredTweet::raw_stance, &ScoredTweet::stance_norm);
  normalize(&ScoredTweet::raw_articulation, &ScoredTweet::articulation);
  normalize(&ScoredTweet::raw_relevance, &ScoredTweet::relevance);
  for (ScoredTweet& s : pool) s.aggregate = aggregator(s.stance_norm, s.articulation, s.relevance);
  std::sort(pool.begin(), pool.end(), rank_before);
}

RankedPools rank_candidates(const Corpus& corpus, const ScoringModels& models,
                            const SummarizerConfig& config) {
  check_inputs(models, config);
  std::vector<Tweet> candidates = unique_candidates(corpus);
  if (config.community_only) {
    std::erase_if(candidates, [&](const Tweet& t) { return !config.assignment->covers(t.user_id); });
  }

  struct Raw {
    double a = 0.0, b = 0.0, articulation = 0.0, relevance = 0.0;
  };
  std::vector<Raw> raw(candidates.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const TweetPosterior posterior(*models.predictor, candidates[i]);
      raw[i].a = stance_score(posterior, *models.table, Label::kA, models.stance_options);
      raw[i].b = stance_score(posterior, *models.table, Label::kB, models.stance_options);
      if (raw[i].a > 0.0 || raw[i].b > 0.0) {
        raw[i].articulation = models.articulation(candidates[i]);
        raw[i].relevance = models.relevance(candidates[i]);
      }
    }
  };
  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(config.threads, candidates.size()));
  if (threads == 1) {
    work(0, candidates.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (candidates.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(candidates.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }

  RankedPools pools;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ScoredTweet s;
    s.raw_articulation = raw[i].articulation;
    s.raw_relevance = raw[i].relevance;
    if (raw[i].a > 0.0 && raw[i].a >= raw[i].b) {
      s.stance = Label::kA;
      s.raw_stance = raw[i].a;
    } else if (raw[i].b > 0.0) {
      s.stance = Label::kB;
      s.raw_stance = raw[i].b;
    } else {
      continue;
    }
    s.tweet = std::move(candidates[i]);
    (*s.stance == Label::kA ? pools.pool_a : pools.pool_b).push_back(std::move(s));
  }
  normalize_and_rank(pools.pool_a, config.aggregator);
  normalize_and_rank(pools.pool_b, config.aggregator);
  return pools;
}

Summary sum_sat(const Corpus& corpus, const ScoringModels& models, const SummarizerConfig& config) {
  const RankedPools pools = rank_candidates(corpus, models, config);
  Summary summary;
  summary.topic = corpus.topic();
  summary.method = method_name("SumSAT", config.community_only);
  summary.k = config.k;
  summary.community_only = config.community_only;
  const std::size_t half = config.k / 2;
  for (Label side : {Label::kA, Label::kB}) {
    const auto& pool = pools.pool(side);
    auto& gamma = side == Label::kA ? summary.gamma_a : summary.gamma_b;
    gamma.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(std::min(half, pool.size())));
    (side == Label::kA ? summary.shortfall_a : summary.shortfall_b) = half - gamma.size();
  }
  return summary;
}

Summary hashtag_sum_sat(const Corpus& corpus, const ScoringModels& models,
                        const SummarizerConfig& config) {
  const RankedPools pools = rank_candidates(corpus, models, config);
  Summary summary;
  summary.topic = corpus.topic();
  summary.method = method_name("HashtagSumSAT", config.community_only);
  summary.k = config.k;
  summary.community_only = config.community_only;
  const std::size_t half = config.k / 2;

  std::set<std::string> selected;
  for (Label side : {Label::kA, Label::kB}) {
    const auto& pool = pools.pool(side);
    auto& gamma = side == Label::kA ? summary.gamma_a : summary.gamma_b;
    std::vector<std::set<std::string>> explicit_tags;
    explicit_tags.reserve(pool.size());
    for (const ScoredTweet& s : pool) explicit_tags.push_back(hashtags_of(s.tweet));

    for (const std::string& hashtag : models.table->top_hashtags(side, half)) {
      std::optional<std::size_t> pick;
      // The pool is already in rank order, so the first hit is the best.
      for (std::size_t i = 0; i < pool.size() && !pick; ++i) {
        if (!selected.count(pool[i].tweet.id) && explicit_tags[i].count(hashtag)) pick = i;
      }
      if (!pick) {
        double best = kFallbackPosterior;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (selected.count(pool[i].tweet.id)) continue;
          const double p = posterior(*models.predictor, pool[i].tweet, hashtag);
          if (p >= best && (!pick || p > best)) {
            best = p;
            pick = i;
          }
        }
      }
      if (!pick) continue;
      ScoredTweet chosen = pool[*pick];
      chosen.anchor_hashtag = hashtag;
      selected.insert(chosen.tweet.id);
      gamma.push_back(std::move(chosen));
    }
    for (const ScoredTweet& s : pool) {
      if (gamma.size() >= half) break;
      if (selected.insert(s.tweet.id).second) gamma.push_back(s);
    }
    (side == Label::kA ? summary.shortfall_a : summary.shortfall_b) = half - gamma.size();
  }
  return summary;
}

}  // namespace stancesum
