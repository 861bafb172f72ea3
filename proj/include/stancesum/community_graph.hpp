#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "stancesum/corpus.hpp"

namespace stancesum {

enum class Label : std::uint8_t { kA, kB };

inline Label opposite(Label l) { return l == Label::kA ? Label::kB : Label::kA; }
std::string_view label_name(Label l);  // "A" / "B"
Label parse_label(std::string_view s);  // throws FormatError

// Undirected weighted user graph. Users are stored sorted, so node index
// order is lexicographic user-id order.
class RetweetGraph {
 public:
  struct Neighbor {
    std::size_t node;
    double weight;
  };
  struct Edge {
    std::size_t u;  // u < v
    std::size_t v;
    double weight;
  };

  RetweetGraph() = default;

  // Merges parallel and reversed pairs by summing weights; drops self-loops
  // and non-positive weights.
  static RetweetGraph from_edges(
      const std::vector<std::tuple<std::string, std::string, double>>& edges);

  std::size_t node_count() const { return users_.size(); }
  bool empty() const { return users_.empty(); }
  const std::vector<std::string>& users() const { return users_; }
  const std::string& user(std::size_t node) const { return users_[node]; }
  std::optional<std::size_t> index_of(const std::string& user) const;

  std::span<const Neighbor> neighbors(std::size_t node) const { return adjacency_[node]; }
  double degree(std::size_t node) const;
  double weight(const std::string& u, const std::string& v) const;
  const std::vector<Edge>& edges() const { return edges_; }
  double total_weight() const;

  // Subgraph induced by the given (sorted or unsorted) node indices.
  RetweetGraph induced(const std::vector<std::size_t>& nodes) const;

  // Connected components, each sorted; components ordered by size
  // descending, ties by smallest member.
  std::vector<std::vector<std::size_t>> components() const;

 private:
  std::vector<std::string> users_;
  std::vector<std::vector<Neighbor>> adjacency_;  // sorted by neighbor index
  std::vector<Edge> edges_;
};

struct GraphOptions {
  bool binary_weights = false;  // count each user pair once instead of per retweet
};

// Edge (u, v) weight = number of tweets where u retweeted v or v retweeted
// u. The retweeted author is retweeted_user_id, or the mention following a
// textual "RT" marker. Throws EmptyGraphError when no interaction exists.
RetweetGraph build_graph(const Corpus& corpus, const GraphOptions& options = {});

struct CommunityAssignment {
  std::map<std::string, Label> labels;  // covered users
  double cut_weight = 0.0;

  std::optional<Label> label_of(const std::string& user) const;
  std::size_t count(Label l) const;
  bool covers(const std::string& user) const { return labels.count(user) > 0; }
  CommunityAssignment swapped() const;
};

// Sum of weights of edges whose endpoints carry different labels. Edges
// touching unassigned users are ignored.
double cut_weight(const RetweetGraph& graph, const std::map<std::string, Label>& labels);

struct PartitionOptions {
  double balance_tolerance = 0.2;  // smaller side >= (0.5 - tol) * n
  std::uint64_t seed = 0;
  double eigen_tolerance = 1e-8;
  int max_iterations = 10'000;
  int max_refinement_passes = 50;
};

// Fiedler vector of the weighted Laplacian by power iteration on
// (c I - L) with the constant vector deflated. Unit norm.
std::vector<double> fiedler_vector(const RetweetGraph& graph, std::uint64_t seed,
                                   double tolerance = 1e-8, int max_iterations = 10'000);

// Two-way min-cut partition of the largest connected component: spectral
// sweep cut followed by balanced single-vertex Kernighan-Lin refinement.
// Label A is the side holding the lexicographically smallest user.
// Throws GraphTooSmallError when the component has fewer than 4 nodes.
CommunityAssignment partition(const RetweetGraph& graph, const PartitionOptions& options = {});

std::vector<Tweet> community_tweets(const Corpus& corpus, const CommunityAssignment& assignment,
                                    Label label);

// `user<TAB>label` lines sorted by user.
void write_assignment(std::ostream& out, const CommunityAssignment& assignment);
// cut_weight is not stored in the file; it is left at 0 unless a graph is given.
CommunityAssignment read_assignment(std::istream& in, const RetweetGraph* graph = nullptr);

// `u<TAB>v<TAB>weight` lines, u < v, sorted.
void write_edge_list(std::ostream& out, const RetweetGraph& graph);
RetweetGraph read_edge_list(std::istream& in);

}  // namespace stancesum
