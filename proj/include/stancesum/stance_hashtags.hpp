#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "stancesum/community_graph.hpp"
#include "stancesum/corpus.hpp"

namespace stancesum {

// Information gain (bits) of a binary presence feature about the two-class
// community label, from the 2x2 contingency table of tweet counts:
//   IG = H(C) - P(h) H(C | h) - P(~h) H(C | ~h),  0 log 0 = 0.
// Throws DomainError when all counts are zero or any count is negative.
double information_gain(std::int64_t a_with, std::int64_t a_without, std::int64_t b_with,
                        std::int64_t b_without);

struct HashtagStats {
  std::string hashtag;
  std::int64_t freq_a = 0;    // community-A tweets containing the hashtag
  std::int64_t freq_b = 0;
  std::int64_t doc_freq = 0;  // corpus tweets containing it
  double ig = 0.0;
};

struct MineOptions {
  std::size_t top_n = 30;
  std::int64_t min_freq = 5;  // on freq_a + freq_b
};

// H_A and H_B with normalized stance representativeness P_S(S|h).
class StanceHashtagTable {
 public:
  StanceHashtagTable() = default;
  StanceHashtagTable(std::vector<HashtagStats> ranked, std::size_t top_n);

  // Top-N entries by IG descending (ties by hashtag), including ties on
  // frequency that belong to neither side.
  const std::vector<HashtagStats>& ranked() const { return ranked_; }
  std::size_t top_n() const { return top_n_; }

  const std::map<std::string, double>& hashtags(Label stance) const {
    return stance == Label::kA ? side_a_ : side_b_;
  }
  // P_S(stance | h); 0 if h is not a stance hashtag of that side.
  double score(const std::string& hashtag, Label stance) const;
  // Side hashtags ordered by P_S descending, ties by name.
  std::vector<std::string> top_hashtags(Label stance, std::size_t count) const;

  // Fewer than two hashtags on either side.
  bool insufficient() const { return side_a_.size() < 2 || side_b_.size() < 2; }

 private:
  std::vector<HashtagStats> ranked_;
  std::size_t top_n_ = 0;
  std::map<std::string, double> side_a_;
  std::map<std::string, double> side_b_;
};

// Per-tweet presence counts over tweets of assigned users. Candidates need
// freq_a + freq_b >= min_freq; the global top_n by IG are split by the
// strict frequency condition and normalized per side. Throws DomainError
// when either community has no tweets or top_n < 2.
StanceHashtagTable mine(const Corpus& corpus, const CommunityAssignment& assignment,
                        const MineOptions& options = {});

double stance_score_of_hashtag(const StanceHashtagTable& table, const std::string& hashtag,
                               Label stance);

// P(h): fraction of corpus tweets carrying h.
std::map<std::string, double> hashtag_priors(const Corpus& corpus);

// `hashtag<TAB>side<TAB>freq_A<TAB>freq_B<TAB>ig<TAB>p_s` lines by IG
// descending; side is A, B or '-' for frequency ties.
void write_table(std::ostream& out, const StanceHashtagTable& table);
StanceHashtagTable read_table(std::istream& in);

}  // namespace stancesum
