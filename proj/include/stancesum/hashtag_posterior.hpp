#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stancesum/corpus.hpp"

namespace stancesum {

// Predicts P(h | tweet) over a fixed hashtag vocabulary. Implementations
// must be immutable after construction so one instance can serve
// concurrent queries.
class HashtagPredictor {
 public:
  virtual ~HashtagPredictor() = default;

  // Sorted, lowercase, without '#'.
  virtual const std::vector<std::string>& vocabulary() const = 0;

  // Model posterior over vocabulary(); non-negative, sums to 1.
  virtual std::vector<double> predict(const Tweet& tweet) const = 0;

  std::optional<std::size_t> vocabulary_index(const std::string& hashtag) const;
};

// P(h | tweet) for one tweet with the explicit-hashtag rule applied:
// 1 for hashtags present in the text, 0 outside the vocabulary, otherwise
// the model posterior. Computes the model distribution once.
class TweetPosterior {
 public:
  TweetPosterior(const HashtagPredictor& predictor, const Tweet& tweet);
  double operator()(const std::string& hashtag) const;

 private:
  const HashtagPredictor* predictor_;
  std::set<std::string> explicit_;
  std::vector<double> distribution_;
};

double posterior(const HashtagPredictor& predictor, const Tweet& tweet,
                 const std::string& hashtag);

// Text the predictor sees: lowercase token norms with hashtags, mentions,
// URLs and the retweet marker removed.
std::string featurization_text(std::string_view text);

struct CharNgramOptions {
  std::uint32_t dimension = 1u << 18;  // hashed feature space
  int min_n = 1;
  int max_n = 3;
  int epochs = 5;
  double learning_rate = 0.1;  // decays as lr / sqrt(step)
  std::int64_t vocab_min_freq = 5;
  std::uint64_t seed = 0;
};

// Multinomial logistic regression over L2-normalized hashed character
// n-gram counts, trained by SGD on (stripped text -> observed hashtag).
class CharNgramPredictor final : public HashtagPredictor {
 public:
  // Throws TrainingError when no hashtag reaches vocab_min_freq.
  static CharNgramPredictor train(const Corpus& corpus, const CharNgramOptions& options = {});

  const std::vector<std::string>& vocabulary() const override { return vocabulary_; }
  std::vector<double> predict(const Tweet& tweet) const override;
  std::vector<double> predict_text(std::string_view featurized) const;

  const CharNgramOptions& options() const { return options_; }
  bool same_parameters(const CharNgramPredictor& other) const;

  // Sparse feature vector (index, value) sorted by index.
  std::vector<std::pair<std::uint32_t, double>> features(std::string_view featurized) const;

  // Text format, documented in docs/formats.md.
  void save(std::ostream& out) const;
  static CharNgramPredictor load(std::istream& in);

 private:
  CharNgramPredictor() = default;

  CharNgramOptions options_;
  std::vector<std::string> vocabulary_;
  std::vector<double> bias_;
  // Rows only for features seen in training; absent rows are zero.
  std::unordered_map<std::uint32_t, std::vector<double>> weights_;
};

}  // namespace stancesum
