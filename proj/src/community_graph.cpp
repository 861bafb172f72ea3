#include "stancesum/community_graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "stancesum/error.hpp"
#include "stancesum/format.hpp"

namespace stancesum {

std::string_view label_name(Label l) { return l == Label::kA ? "A" : "B"; }

Label parse_label(std::string_view s) {
  if (s == "A" || s == "a") return Label::kA;
  if (s == "B" || s == "b") return Label::kB;
  throw FormatError("invalid community label '" + std::string(s) + "'");
}

RetweetGraph RetweetGraph::from_edges(
    const std::vector<std::tuple<std::string, std::string, double>>& edges) {
  std::map<std::pair<std::string, std::string>, double> merged;
  std::set<std::string> users;
  for (const auto& [a, b, w] : edges) {
    if (a == b || !(w > 0.0)) continue;
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    merged[key] += w;
    users.insert(a);
    users.insert(b);
  }
  RetweetGraph g;
  g.users_.assign(users.begin(), users.end());
  g.adjacency_.resize(g.users_.size());
  for (const auto& [pair, w] : merged) {
    const std::size_t u = *g.index_of(pair.first);
    const std::size_t v = *g.index_of(pair.second);
    g.edges_.push_back({u, v, w});
    g.adjacency_[u].push_back({v, w});
    g.adjacency_[v].push_back({u, w});
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }
  std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  return g;
}

std::optional<std::size_t> RetweetGraph::index_of(const std::string& user) const {
  const auto it = std::lower_bound(users_.begin(), users_.end(), user);
  if (it == users_.end() || *it != user) return std::nullopt;
  return static_cast<std::size_t>(it - users_.begin());
}

double RetweetGraph::degree(std::size_t node) const {
  double d = 0.0;
  for (const Neighbor& n : adjacency_[node]) d += n.weight;
  return d;
}

double RetweetGraph::weight(const std::string& u, const std::string& v) const {
  const auto iu = index_of(u);
  const auto iv = index_of(v);
  if (!iu || !iv) return 0.0;
  for (const Neighbor& n : adjacency_[*iu]) {
    if (n.node == *iv) return n.weight;
  }
  return 0.0;
}

double RetweetGraph::total_weight() const {
  double total = 0.0;
  for (const Edge& e : edges_) total += e.weight;
  return total;
}

RetweetGraph RetweetGraph::induced(const std::vector<std::size_t>& nodes) const {
  std::vector<char> keep(users_.size(), 0);
  for (std::size_t n : nodes) keep[n] = 1;
  std::vector<std::tuple<std::string, std::string, double>> kept;
  for (const Edge& e : edges_) {
    if (keep[e.u] && keep[e.v]) kept.emplace_back(users_[e.u], users_[e.v], e.weight);
  }
  return from_edges(kept);
}

std::vector<std::vector<std::size_t>> RetweetGraph::components() const {
  std::vector<std::vector<std::size_t>> comps;
  std::vector<char> seen(users_.size(), 0);
  for (std::size_t start = 0; start < users_.size(); ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> comp;
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      comp.push_back(x);
      for (const Neighbor& n : adjacency_[x]) {
        if (!seen[n.node]) {
          seen[n.node] = 1;
          stack.push_back(n.node);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return comps;
}

RetweetGraph build_graph(const Corpus& corpus, const GraphOptions& options) {
  std::vector<std::tuple<std::string, std::string, double>> edges;
  std::set<std::pair<std::string, std::string>> seen_pairs;
  for (const Tweet& t : corpus.tweets()) {
    if (!t.is_retweet) continue;
    std::string source;
    if (t.retweeted_user_id) {
      source = *t.retweeted_user_id;
    } else {
      const TokenStream tokens = tokenize(t.text);
      if (tokens.size() >= 2 && tokens[1].kind == TokenKind::kMention) {
        source = tokens[1].surface.substr(1);
      }
    }
    if (source.empty() || source == t.user_id) continue;
    if (options.binary_weights) {
      auto key = t.user_id < source ? std::make_pair(t.user_id, source)
                                    : std::make_pair(source, t.user_id);
      if (!seen_pairs.insert(key).second) continue;
    }
    edges.emplace_back(t.user_id, source, 1.0);
  }
  RetweetGraph g = RetweetGraph::from_edges(edges);
  if (g.empty()) throw EmptyGraphError("corpus has no retweet interactions");
  return g;
}

std::optional<Label> CommunityAssignment::label_of(const std::string& user) const {
  const auto it = labels.find(user);
  if (it == labels.end()) return std::nullopt;
  return it->second;
}

std::size_t CommunityAssignment::count(Label l) const {
  return static_cast<std::size_t>(std::count_if(
      labels.begin(), labels.end(), [l](const auto& kv) { return kv.second == l; }));
}

CommunityAssignment CommunityAssignment::swapped() const {
  CommunityAssignment out = *this;
  for (auto& [user, label] : out.labels) label = opposite(label);
  return out;
}

double cut_weight(const RetweetGraph& graph, const std::map<std::string, Label>& labels) {
  double cut = 0.0;
  for (const auto& e : graph.edges()) {
    const auto a = labels.find(graph.user(e.u));
    const auto b = labels.find(graph.user(e.v));
    if (a == labels.end() || b == labels.end()) continue;
    if (a->second != b->second) cut += e.weight;
  }
  return cut;
}

std::vector<double> fiedler_vector(const RetweetGraph& graph, std::uint64_t seed,
                                   double tolerance, int max_iterations) {
  const std::size_t n = graph.node_count();
  if (n < 2) throw GraphTooSmallError("Fiedler vector needs at least 2 nodes");

  std::vector<double> degree(n);
  double max_degree = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    degree[i] = graph.degree(i);
    max_degree = std::max(max_degree, degree[i]);
  }
  // Gershgorin: every Laplacian eigenvalue lies in [0, 2 * max_degree].
  const double shift = 2.0 * max_degree;

  auto deflate_normalize = [n](std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    double norm = 0.0;
    for (double& x : v) {
      x -= mean;
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return false;
    for (double& x : v) x /= norm;
    return true;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = normal(rng);
  if (!deflate_normalize(x)) {
    std::iota(x.begin(), x.end(), 0.0);
    deflate_normalize(x);
  }

  std::vector<double> y(n);
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double wx = 0.0;
      for (const auto& nb : graph.neighbors(i)) wx += nb.weight * x[nb.node];
      y[i] = (shift - degree[i]) * x[i] + wx;  // (cI - L) x
    }
    if (!deflate_normalize(y)) break;
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += (y[i] - x[i]) * (y[i] - x[i]);
    x.swap(y);
    if (std::sqrt(diff) < tolerance) break;
  }
  return x;
}

namespace {

constexpr double kWeightEps = 1e-9;

// Balanced single-vertex-move refinement (Kernighan-Lin passes with
// Fiduccia-Mattheyses moves). side[i] in {0, 1}. Returns the final cut.
double refine(const RetweetGraph& g, std::vector<int>& side, std::size_t min_side,
              double cut, int max_passes) {
  const std::size_t n = g.node_count();
  for (int pass = 0; pass < max_passes; ++pass) {
    std::array<std::size_t, 2> size{0, 0};
    for (int s : side) ++size[static_cast<std::size_t>(s)];
    std::vector<double> gain(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& nb : g.neighbors(i)) {
        gain[i] += side[nb.node] != side[i] ? nb.weight : -nb.weight;
      }
    }
    // Ordered by highest gain, then smallest index (= smallest user id).
    std::array<std::set<std::pair<double, std::size_t>>, 2> queue;
    for (std::size_t i = 0; i < n; ++i) queue[side[i]].insert({-gain[i], i});
    std::vector<char> locked(n, 0);

    std::vector<std::size_t> moves;
    double running = cut;
    double best_cut = cut;
    std::size_t best_len = 0;
    while (true) {
      std::optional<std::pair<double, std::size_t>> pick;
      for (std::size_t s = 0; s < 2; ++s) {
        if (queue[s].empty() || size[s] <= min_side) continue;
        const auto cand = *queue[s].begin();
        if (!pick || cand < *pick) pick = cand;
      }
      if (!pick) break;
      const std::size_t x = pick->second;
      const int from = side[x];
      queue[from].erase(queue[from].begin());
      locked[x] = 1;
      running -= gain[x];
      side[x] = 1 - from;
      --size[from];
      ++size[1 - from];
      moves.push_back(x);
      for (const auto& nb : g.neighbors(x)) {
        const std::size_t y = nb.node;
        if (locked[y]) continue;
        queue[side[y]].erase({-gain[y], y});
        gain[y] += side[y] == from ? 2.0 * nb.weight : -2.0 * nb.weight;
        queue[side[y]].insert({-gain[y], y});
      }
      if (running < best_cut - kWeightEps) {
        best_cut = running;
        best_len = moves.size();
      }
    }
    for (std::size_t k = moves.size(); k > best_len; --k) side[moves[k - 1]] ^= 1;
    if (best_len == 0) return cut;
    cut = best_cut;
  }
  return cut;
}

}  // namespace

CommunityAssignment partition(const RetweetGraph& graph, const PartitionOptions& options) {
  if (graph.empty()) throw EmptyGraphError("cannot partition an empty graph");
  // Tolerance 0 means exact halves (floor(n/2) on the smaller side).
  if (!(options.balance_tolerance >= 0.0) || options.balance_tolerance > 0.5) {
    throw DomainError("balance_tolerance must lie in [0, 0.5]");
  }
  const auto comps = graph.components();
  if (comps.front().size() < 4) {
    throw GraphTooSmallError("largest connected component has fewer than 4 users");
  }
  const RetweetGraph g = graph.induced(comps.front());
  const std::size_t n = g.node_count();

  std::size_t min_side = static_cast<std::size_t>(
      std::ceil((0.5 - options.balance_tolerance) * static_cast<double>(n) - 1e-9));
  min_side = std::clamp<std::size_t>(min_side, 1, n / 2);

  const std::vector<double> f =
      fiedler_vector(g, options.seed, options.eigen_tolerance, options.max_iterations);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return f[a] != f[b] ? f[a] < f[b] : a < b;
  });

  // Sweep cut over the Fiedler ordering within the balance window.
  std::vector<char> in_prefix(n, 0);
  double cut = 0.0;
  double best_cut = 0.0;
  std::size_t best_size = 0;
  const double half = static_cast<double>(n) / 2.0;
  for (std::size_t s = 1; s + min_side <= n; ++s) {
    const std::size_t x = order[s - 1];
    for (const auto& nb : g.neighbors(x)) cut += in_prefix[nb.node] ? -nb.weight : nb.weight;
    in_prefix[x] = 1;
    if (s < min_side) continue;
    const bool better =
        best_size == 0 || cut < best_cut - kWeightEps ||
        (std::abs(cut - best_cut) <= kWeightEps &&
         std::abs(static_cast<double>(s) - half) < std::abs(static_cast<double>(best_size) - half));
    if (better) {
      best_cut = cut;
      best_size = s;
    }
  }
  std::vector<int> side(n, 1);
  for (std::size_t k = 0; k < best_size; ++k) side[order[k]] = 0;

  refine(g, side, min_side, best_cut, options.max_refinement_passes);

  CommunityAssignment out;
  const int a_side = side[0];
  for (std::size_t i = 0; i < n; ++i) {
    out.labels[g.user(i)] = side[i] == a_side ? Label::kA : Label::kB;
  }
  out.cut_weight = cut_weight(g, out.labels);
  return out;
}

std::vector<Tweet> community_tweets(const Corpus& corpus, const CommunityAssignment& assignment,
                                    Label label) {
  std::vector<Tweet> out;
  for (const Tweet& t : corpus.tweets()) {
    const auto l = assignment.label_of(t.user_id);
    if (l && *l == label) out.push_back(t);
  }
  return out;
}

void write_assignment(std::ostream& out, const CommunityAssignment& assignment) {
  for (const auto& [user, label] : assignment.labels) {
    out << user << '\t' << label_name(label) << '\n';
  }
}

CommunityAssignment read_assignment(std::istream& in, const RetweetGraph* graph) {
  CommunityAssignment a;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      throw FormatError("assignment line " + std::to_string(line_no) + ": expected 2 fields");
    }
    a.labels[fields[0]] = parse_label(fields[1]);
  }
  if (graph) a.cut_weight = cut_weight(*graph, a.labels);
  return a;
}

void write_edge_list(std::ostream& out, const RetweetGraph& graph) {
  for (const auto& e : graph.edges()) {
    out << graph.user(e.u) << '\t' << graph.user(e.v) << '\t' << format_double(e.weight) << '\n';
  }
}

RetweetGraph read_edge_list(std::istream& in) {
  std::vector<std::tuple<std::string, std::string, double>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw FormatError("edge line " + std::to_string(line_no) + ": expected 3 fields");
    }
    edges.emplace_back(fields[0], fields[1], parse_double(fields[2]));
  }
  return RetweetGraph::from_edges(edges);
}

}  // namespace stancesum
