#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stancesum/corpus.hpp"

namespace stancesum {

// Terms the language model sees: lowercase word tokens plus hashtags with
// the '#' removed. URLs, mentions, numbers, emoticons and punctuation are
// not scored.
std::vector<std::string> lm_terms(std::string_view text);

// Jelinek-Mercer mixture of a topic unigram model and a background model:
//   p(w) = lambda * p_topic(w) + (1 - lambda) * p_bg(w)
// Words unseen in both get the floor (1 - lambda) / |V_bg|.
class TopicLanguageModel {
 public:
  // Distributions must each be non-empty, positive and sum to 1 within 1e-9.
  TopicLanguageModel(std::map<std::string, double> topic, std::map<std::string, double> background,
                     double lambda);

  // Maximum-likelihood estimates from both corpora. Throws DomainError when
  // lambda is outside (0, 1) or either corpus yields no terms.
  static TopicLanguageModel build(const Corpus& topic, const Corpus& background,
                                  double lambda = 0.8);

  double lambda() const { return lambda_; }
  double probability(const std::string& word) const;
  double topic_probability(const std::string& word) const;
  double background_probability(const std::string& word) const;
  double floor() const;

  const std::map<std::string, double>& topic() const { return topic_; }
  const std::map<std::string, double>& background() const { return background_; }

  // "# lambda L" and "# background_vocabulary N" headers, then
  // `word<TAB>p_topic<TAB>p_background` over the union vocabulary.
  void save(std::ostream& out) const;
  static TopicLanguageModel load(std::istream& in);

 private:
  std::map<std::string, double> topic_;
  std::map<std::string, double> background_;
  double lambda_;
};

// Geometric mean of the per-term probabilities; the floor when the tweet
// has no scoreable terms.
double relevance_score(const TopicLanguageModel& lm, const Tweet& tweet);

}  // namespace stancesum
