#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "stancesum/corpus.hpp"
#include "stancesum/summarizer.hpp"

namespace stancesum {

// Uniform sample without replacement from unique_candidates. Throws
// DomainError when k is 0 or exceeds the candidate count.
std::vector<Tweet> random_summary(const Corpus& corpus, std::size_t k, std::uint64_t seed);

// Days since the Unix epoch for a UTC timestamp (floor division).
std::int64_t utc_day(std::int64_t timestamp);

// Unique candidates, optionally limited to one UTC day, by retweet_count
// descending and id ascending. Throws DomainError on an empty filtered set.
std::vector<Tweet> most_rt_summary(const Corpus& corpus, std::size_t k,
                                   std::optional<std::int64_t> day = std::nullopt);

// Content words for frequency counting: word and hashtag tokens (hashtags
// keep their '#') whose norm is not a stopword.
std::vector<std::string> sumbasic_words(std::string_view text,
                                        const std::unordered_set<std::string>& stopwords);

struct SumBasicStep {
  std::string top_word;
  std::string chosen_id;
  std::map<std::string, double> probabilities;  // after the update
};

// Classic SumBasic over unique candidates. Each step takes the most
// probable word (ties lexicographic) that still occurs in an unpicked
// tweet, picks the unpicked tweet containing it with the highest mean word
// probability (ties by id), then squares the probability of every word in
// that tweet. Tweets without content words fill leftover slots in id order.
std::vector<Tweet> sumbasic_summary(const Corpus& corpus, std::size_t k,
                                    const std::unordered_set<std::string>& stopwords,
                                    std::vector<SumBasicStep>* trace = nullptr);

// Wraps a baseline selection in the shared summary document shape.
Summary baseline_summary(const Corpus& corpus, std::string method, std::size_t k,
                         const std::vector<Tweet>& tweets);

}  // namespace stancesum
