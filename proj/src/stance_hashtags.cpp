#include "stancesum/stance_hashtags.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "stancesum/error.hpp"
#include "stancesum/format.hpp"

namespace stancesum {
namespace {

// Binary entropy in bits of a two-way split given by counts.
double entropy(std::int64_t x, std::int64_t y) {
  const double total = static_cast<double>(x + y);
  if (total == 0.0) return 0.0;
  double h = 0.0;
  for (const std::int64_t c : {x, y}) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double information_gain(std::int64_t a_with, std::int64_t a_without, std::int64_t b_with,
                        std::int64_t b_without) {
  if (a_with < 0 || a_without < 0 || b_with < 0 || b_without < 0) {
    throw DomainError("information_gain: negative count");
  }
  const std::int64_t with = a_with + b_with;
  const std::int64_t without = a_without + b_without;
  const std::int64_t total = with + without;
  if (total == 0) throw DomainError("information_gain: all counts are zero");
  const double n = static_cast<double>(total);
  const double ig = entropy(a_with + a_without, b_with + b_without) -
                    static_cast<double>(with) / n * entropy(a_with, b_with) -
                    static_cast<double>(without) / n * entropy(a_without, b_without);
  // Rounding can leave a tiny negative value for independent features.
  return std::max(ig, 0.0);
}

StanceHashtagTable::StanceHashtagTable(std::vector<HashtagStats> ranked, std::size_t top_n)
    : ranked_(std::move(ranked)), top_n_(top_n) {
  for (const HashtagStats& s : ranked_) {
    if (s.freq_a > s.freq_b) side_a_[s.hashtag] = s.ig;
    else if (s.freq_b > s.freq_a) side_b_[s.hashtag] = s.ig;
  }
  for (auto* side : {&side_a_, &side_b_}) {
    double total = 0.0;
    for (const auto& [h, ig] : *side) total += ig;
    for (auto& [h, value] : *side) {
      value = total > 0.0 ? value / total : 1.0 / static_cast<double>(side->size());
    }
  }
}

double StanceHashtagTable::score(const std::string& hashtag, Label stance) const {
  const auto& side = hashtags(stance);
  const auto it = side.find(hashtag);
  return it == side.end() ? 0.0 : it->second;
}

std::vector<std::string> StanceHashtagTable::top_hashtags(Label stance, std::size_t count) const {
  std::vector<std::pair<std::string, double>> items(hashtags(stance).begin(),
                                                    hashtags(stance).end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < items.size() && i < count; ++i) out.push_back(items[i].first);
  return out;
}

StanceHashtagTable mine(const Corpus& corpus, const CommunityAssignment& assignment,
                        const MineOptions& options) {
  if (options.top_n < 2) throw DomainError("top_n must be at least 2");
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> counts;
  for (const Tweet& t : corpus.tweets()) {
    const auto label = assignment.label_of(t.user_id);
    if (!label) continue;
    (*label == Label::kA ? n_a : n_b) += 1;
    for (const std::string& h : hashtags_of(t)) {
      auto& c = counts[h];
      (*label == Label::kA ? c.first : c.second) += 1;
    }
  }
  if (n_a == 0 || n_b == 0) {
    throw DomainError("stance hashtag mining needs tweets from both communities");
  }

  std::vector<HashtagStats> stats;
  for (const auto& [h, c] : counts) {
    if (c.first + c.second < options.min_freq) continue;
    HashtagStats s;
    s.hashtag = h;
    s.freq_a = c.first;
    s.freq_b = c.second;
    const auto it = corpus.hashtag_index().find(h);
    s.doc_freq = it == corpus.hashtag_index().end() ? 0
                                                    : static_cast<std::int64_t>(it->second.size());
    s.ig = information_gain(c.first, n_a - c.first, c.second, n_b - c.second);
    stats.push_back(std::move(s));
  }
  // counts is name-ordered, so a stable sort keeps name order within IG ties.
  std::stable_sort(stats.begin(), stats.end(),
                   [](const HashtagStats& x, const HashtagStats& y) { return x.ig > y.ig; });
  if (stats.size() > options.top_n) stats.resize(options.top_n);
  return StanceHashtagTable(std::move(stats), options.top_n);
}

double stance_score_of_hashtag(const StanceHashtagTable& table, const std::string& hashtag,
                               Label stance) {
  return table.score(hashtag, stance);
}

std::map<std::string, double> hashtag_priors(const Corpus& corpus) {
  std::map<std::string, double> priors;
  if (corpus.empty()) return priors;
  const double n = static_cast<double>(corpus.size());
  for (const auto& [h, ids] : corpus.hashtag_index()) {
    priors[h] = static_cast<double>(ids.size()) / n;
  }
  return priors;
}

void write_table(std::ostream& out, const StanceHashtagTable& table) {
  for (const HashtagStats& s : table.ranked()) {
    std::string side = "-";
    double p_s = 0.0;
    if (s.freq_a > s.freq_b) {
      side = "A";
      p_s = table.score(s.hashtag, Label::kA);
    } else if (s.freq_b > s.freq_a) {
      side = "B";
      p_s = table.score(s.hashtag, Label::kB);
    }
    out << s.hashtag << '\t' << side << '\t' << s.freq_a << '\t' << s.freq_b << '\t'
        << format_double(s.ig) << '\t' << format_double(p_s) << '\n';
  }
}

StanceHashtagTable read_table(std::istream& in) {
  std::vector<HashtagStats> ranked;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 6) {
      throw FormatError("hashtag table line " + std::to_string(line_no) + ": expected 6 fields");
    }
    HashtagStats s;
    s.hashtag = f[0];
    s.freq_a = parse_int(f[2]);
    s.freq_b = parse_int(f[3]);
    s.ig = parse_double(f[4]);
    const std::string expected = s.freq_a > s.freq_b ? "A" : s.freq_b > s.freq_a ? "B" : "-";
    if (f[1] != expected) {
      throw FormatError("hashtag table line " + std::to_string(line_no) +
                        ": side does not match frequencies");
    }
    ranked.push_back(std::move(s));
  }
  const std::size_t n = ranked.size();
  return StanceHashtagTable(std::move(ranked), std::max<std::size_t>(n, 2));
}

}  // namespace stancesum
