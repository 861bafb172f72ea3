#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stancesum/community_graph.hpp"
#include "stancesum/corpus.hpp"
#include "stancesum/hashtag_posterior.hpp"
#include "stancesum/stance_hashtags.hpp"

namespace stancesum {

inline constexpr double kScoreFloor = 1e-9;

// 3 / (1/s + 1/a + 1/r) with every input clamped to [kScoreFloor, 1].
double harmonic_mean(double stance, double articulation, double relevance);

using Aggregator = std::function<double(double, double, double)>;

struct StanceScoreOptions {
  // When set, each term is additionally weighted by the hashtag prior P(h).
  const std::map<std::string, double>* priors = nullptr;
};

// sum_{h in H_s} P(h|t) P_S(s|h) - sum_{h in H_other} P(h|t) P_S(other|h)
double stance_score(const Tweet& tweet, const StanceHashtagTable& table,
                    const HashtagPredictor& predictor, Label stance,
                    const StanceScoreOptions& options = {});
double stance_score(const TweetPosterior& posterior, const StanceHashtagTable& table, Label stance,
                    const StanceScoreOptions& options = {});

struct ScoredTweet {
  Tweet tweet;
  std::optional<Label> stance;  // empty for stance-agnostic baselines
  double raw_stance = 0.0;
  double raw_articulation = 0.0;
  double raw_relevance = 0.0;
  double stance_norm = 0.0;  // min-max normalized within the stance pool
  double articulation = 0.0;
  double relevance = 0.0;
  double aggregate = 0.0;
  std::string anchor_hashtag;  // hashtag-anchored selection only
};

struct Summary {
  std::string topic;
  std::string method;
  std::size_t k = 0;
  bool community_only = false;
  bool stance_balanced = true;  // false for baselines
  std::vector<ScoredTweet> gamma_a;
  std::vector<ScoredTweet> gamma_b;
  std::vector<ScoredTweet> unlabeled;  // baseline output
  std::size_t shortfall_a = 0;
  std::size_t shortfall_b = 0;

  const std::vector<ScoredTweet>& gamma(Label stance) const {
    return stance == Label::kA ? gamma_a : gamma_b;
  }
  std::vector<const ScoredTweet*> all() const;
};

struct ScoringModels {
  const StanceHashtagTable* table = nullptr;
  const HashtagPredictor* predictor = nullptr;
  std::function<double(const Tweet&)> articulation;
  std::function<double(const Tweet&)> relevance;
  StanceScoreOptions stance_options;
};

struct SummarizerConfig {
  std::size_t k = 10;
  bool community_only = false;
  const CommunityAssignment* assignment = nullptr;  // required when community_only
  Aggregator aggregator = harmonic_mean;
  unsigned threads = 1;
};

// Both stance pools after scoring and per-pool normalization, each ranked
// by aggregate descending with ties broken by id.
struct RankedPools {
  std::vector<ScoredTweet> pool_a;
  std::vector<ScoredTweet> pool_b;
  const std::vector<ScoredTweet>& pool(Label stance) const {
    return stance == Label::kA ? pool_a : pool_b;
  }
};

// Scores unique candidates (community authors only if requested). A
// tweet joins pool A when raw_A > 0 and raw_A >= raw_B, pool B when
// raw_B > 0 otherwise, and neither pool when both are <= 0. Results do
// not depend on the thread count.
RankedPools rank_candidates(const Corpus& corpus, const ScoringModels& models,
                            const SummarizerConfig& config);

// Min-max normalizes the raw components of one pool in place (constant
// component -> 1, floor kScoreFloor), aggregates and sorts.
void normalize_and_rank(std::vector<ScoredTweet>& pool, const Aggregator& aggregator);

// Top k/2 of each ranked pool. Throws DomainError unless k is even and >= 2.
Summary sum_sat(const Corpus& corpus, const ScoringModels& models, const SummarizerConfig& config);

// One tweet per top-P_S hashtag of each stance (explicit occurrences first,
// then the highest model posterior >= 0.01); unfilled slots come from the
// ranked pool.
Summary hashtag_sum_sat(const Corpus& corpus, const ScoringModels& models,
                        const SummarizerConfig& config);

inline constexpr double kFallbackPosterior = 0.01;

}  // namespace stancesum
