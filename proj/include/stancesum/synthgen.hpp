#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stancesum/articulation.hpp"
#include "stancesum/community_graph.hpp"
#include "stancesum/corpus.hpp"
#include "stancesum/stance_hashtags.hpp"
#include "stancesum/summarizer.hpp"

namespace stancesum {

struct SynthSpec {
  std::size_t users_per_side = 100;
  double p_in = 0.10;
  double p_out = 0.005;
  std::size_t tweets_per_user = 20;
  std::size_t stance_hashtag_count = 5;  // per side, at most 5
  double hashtag_use_rate = 0.5;
  double noise_hashtag_rate = 0.3;
  double articulate_fraction = 0.5;
  double topical_word_rate = 0.5;
  std::uint64_t seed = 0;

  // Throws DomainError for probabilities outside [0, 1], p_in <= p_out,
  // zero users or tweets, or too many stance hashtags.
  void validate() const;
};

struct GroundTruth {
  CommunityAssignment assignment;  // every generated user
  std::set<std::string> hashtags_a;
  std::set<std::string> hashtags_b;
  std::set<std::string> noise_hashtags;

  const std::set<std::string>& hashtags(Label side) const {
    return side == Label::kA ? hashtags_a : hashtags_b;
  }
  // Planted stance of a tweet's content: the side of the original author.
  std::optional<Label> stance_of(const Tweet& tweet) const;
};

struct SynthOutput {
  Corpus corpus;
  GroundTruth truth;
};

// Planted-partition retweet graph; each sampled edge becomes one retweet
// of a random post by one endpoint, made by the other.
SynthOutput generate(const SynthSpec& spec);

// Planted hashtag manifest as JSON (spec echo, hashtag sets).
void write_manifest(std::ostream& out, const SynthSpec& spec, const GroundTruth& truth);
GroundTruth read_ground_truth(std::istream& assignment, std::istream& manifest);

// Balanced articulate/non-articulate training examples in the labeled-set
// format, built from the same templates as generate().
std::vector<LabeledTweet> generate_labeled_set(std::size_t per_class, std::uint64_t seed);
void write_labeled(std::ostream& out, const std::vector<LabeledTweet>& labeled);

struct PipelineOutputs {
  const CommunityAssignment* assignment = nullptr;
  const StanceHashtagTable* table = nullptr;
  const Summary* summary = nullptr;
};

struct Diagnostics {
  std::optional<double> partition_accuracy;
  std::optional<double> hashtag_recovery;
  std::optional<double> summary_purity;
  std::size_t gamma_a = 0;
  std::size_t gamma_b = 0;
  bool labels_swapped = false;  // detected A corresponds to planted B
};

// Label correspondence is fixed by the partition when one is supplied and
// otherwise chosen per metric as the better of the two mappings.
// partition_accuracy counts unassigned planted users as errors. Throws
// MismatchError when outputs mention users or tweets absent from corpus.
Diagnostics diagnose(const Corpus& corpus, const GroundTruth& truth, const PipelineOutputs& outputs);

std::string diagnostics_json(const Diagnostics& d);

}  // namespace stancesum
