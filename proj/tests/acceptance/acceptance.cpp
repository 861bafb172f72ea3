// Acceptance gate: one PASS/FAIL line per primary criterion, nonzero exit
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "cli_pipeline.hpp"
#include "stancesum/articulation.hpp"
#include "stancesum/baselines.hpp"
#include "stancesum/community_graph.hpp"
#include "stancesum/logistic.hpp"
#include "stancesum/relevance.hpp"
#include "stancesum/stance_hashtags.hpp"
#include "stancesum/summarizer.hpp"
#include "stancesum/synthgen.hpp"

using namespace stancesum;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double entropy2(double x, double y) {
  const double t = x + y;
  double h = 0.0;
  if (t == 0.0) return 0.0;
  if (x > 0) h -= x / t * std::log2(x / t);
  if (y > 0) h -= y / t * std::log2(y / t);
  return h;
}

// Standalone entropy formula for the presence feature of a hashtag.
double ig_oracle(double aw, double ao, double bw, double bo) {
  const double n = aw + ao + bw + bo;
  const double v = entropy2(aw + ao, bw + bo) - (aw + bw) / n * entropy2(aw, bw) -
                   (ao + bo) / n * entropy2(ao, bo);
  return std::max(0.0, v);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

Tweet make_tweet(std::string id, std::string user, std::string text) {
  Tweet t;
  t.id = std::move(id);
  t.user_id = std::move(user);
  t.text = std::move(text);
  return t;
}

Outcome ig_oracle_check() {
  Outcome o;
  o.require(std::abs(information_gain(2, 0, 0, 2) - 1.0) <= 1e-12, "perfect split != 1");
  o.require(information_gain(2, 0, 2, 0) == 0.0, "constant hashtag != 0");
  o.require(std::abs(information_gain(2, 1, 1, 2) - 0.0817) <= 1e-4, "2/1/1/2 != 0.0817");

  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int table = 0; table < 1000; ++table) {
    const std::size_t na = 1 + rng() % 15, nb = 1 + rng() % 15;
    const std::size_t tags = 1 + rng() % 4;
    std::vector<Tweet> tweets;
    CommunityAssignment assignment;
    std::vector<std::vector<bool>> has(tags, std::vector<bool>(na + nb));
    for (std::size_t i = 0; i < na + nb; ++i) {
      std::string text = "x";
      for (std::size_t h = 0; h < tags; ++h) {
        has[h][i] = rng() % 2 == 0;
        if (has[h][i]) text += " #h" + std::to_string(h);
      }
      const std::string user = (i < na ? "a" : "b") + std::to_string(i);
      assignment.labels[user] = i < na ? Label::kA : Label::kB;
      tweets.push_back(make_tweet("t" + std::to_string(i), user, text));
    }
    const StanceHashtagTable mined = mine(Corpus("t", tweets), assignment, MineOptions{30, 1});
    for (const HashtagStats& s : mined.ranked()) {
      const std::size_t h = static_cast<std::size_t>(std::stoul(s.hashtag.substr(1)));
      double aw = 0, bw = 0;
      for (std::size_t i = 0; i < na + nb; ++i) (i < na ? aw : bw) += has[h][i] ? 1 : 0;
      worst = std::max(worst, std::abs(s.ig - ig_oracle(aw, static_cast<double>(na) - aw, bw,
                                                        static_cast<double>(nb) - bw)));
    }
  }
  o.require(worst <= 1e-12, "max deviation " + std::to_string(worst));
  o.detail = o.detail.empty() ? "max |IG - oracle| = " + std::to_string(worst) : o.detail;
  return o;
}

Outcome partition_check() {
  Outcome o;
  double total = 0.0, lowest = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthSpec spec;
    spec.seed = seed;
    const SynthOutput synth = generate(spec);
    const CommunityAssignment a = partition(build_graph(synth.corpus));
    const double acc = *diagnose(synth.corpus, synth.truth, {&a, nullptr, nullptr}).partition_accuracy;
    total += acc;
    lowest = std::min(lowest, acc);
  }
  const double mean = total / 20;
  o.require(mean >= 0.95, "mean accuracy " + fmt(mean));
  o.require(lowest >= 0.85, "min accuracy " + fmt(lowest));
  const RetweetGraph bridge = RetweetGraph::from_edges(
      {{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 1}, {"d", "e", 1}, {"e", "f", 1}, {"d", "f", 1},
       {"c", "d", 1}});
  const double cut = partition(bridge).cut_weight;
  o.require(cut == 1.0, "bridge cut " + fmt(cut));
  if (o.pass) o.detail = "mean " + fmt(mean) + " min " + fmt(lowest) + " bridge cut 1";
  return o;
}

struct DefaultRun {
  SynthOutput synth;
  CommunityAssignment assignment;
  StanceHashtagTable table;
};

DefaultRun default_run() {
  SynthSpec spec;
  SynthOutput synth = generate(spec);
  CommunityAssignment assignment = partition(build_graph(synth.corpus));
  StanceHashtagTable table = mine(synth.corpus, assignment, MineOptions{30, 5});
  return {std::move(synth), std::move(assignment), std::move(table)};
}

Outcome hashtag_check(const DefaultRun& run) {
  Outcome o;
  const Diagnostics d = diagnose(run.synth.corpus, run.synth.truth, {&run.assignment, &run.table, nullptr});
  const double recovery = d.hashtag_recovery.value_or(0.0);
  o.require(recovery >= 0.9, "recovery " + fmt(recovery));
  std::size_t misplaced = 0;
  for (Label side : {Label::kA, Label::kB}) {
    const Label planted = d.labels_swapped ? opposite(side) : side;
    const Label other = opposite(planted);
    for (const auto& [h, score] : run.table.hashtags(side)) {
      if (run.synth.truth.hashtags(other).count(h)) ++misplaced;
    }
  }
  o.require(misplaced == 0, std::to_string(misplaced) + " hashtags on the wrong side");
  if (o.pass) o.detail = "recovery " + fmt(recovery) + ", all on their planted side";
  return o;
}

Outcome purity_check(const DefaultRun& run) {
  Outcome o;
  const Corpus& corpus = run.synth.corpus;
  const CharNgramPredictor predictor = CharNgramPredictor::train(corpus);
  auto lexicons = std::make_shared<const Lexicons>(
      Lexicons::load(std::filesystem::path(STANCESUM_DATA_DIR) / "lexicons"));
  const ArticulationModel model = train_articulation(
      read_labeled(std::filesystem::path(STANCESUM_DATA_DIR) / "articulation_labeled.jsonl"), *lexicons);
  const ArticulationScorer articulation(model, lexicons);
  const TopicLanguageModel lm =
      TopicLanguageModel::build(select_by_terms(corpus, {corpus.topic()}), corpus);

  ScoringModels models;
  models.table = &run.table;
  models.predictor = &predictor;
  models.articulation = [&](const Tweet& t) { return articulation(t); };
  models.relevance = [&](const Tweet& t) { return relevance_score(lm, t); };
  SummarizerConfig config;
  config.k = 10;

  std::string detail;
  for (int method = 0; method < 2; ++method) {
    const Summary s = method == 0 ? sum_sat(corpus, models, config) : hashtag_sum_sat(corpus, models, config);
    const Diagnostics d = diagnose(corpus, run.synth.truth, {&run.assignment, nullptr, &s});
    const double purity = d.summary_purity.value_or(0.0);
    o.require(purity >= 0.9, s.method + " purity " + fmt(purity));
    o.require(d.gamma_a == 5 && d.gamma_b == 5,
              s.method + " balance " + std::to_string(d.gamma_a) + "/" + std::to_string(d.gamma_b));
    detail += (detail.empty() ? "" : ", ") + s.method + " purity " + fmt(purity) + " " +
              std::to_string(d.gamma_a) + "/" + std::to_string(d.gamma_b);
  }
  if (o.pass) o.detail = detail;
  return o;
}

Outcome articulation_check() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int instance = 0; instance < 100; ++instance) {
    logistic::Dataset d;
    d.dimension = 1 + rng() % 10;
    const std::size_t n = 2 + rng() % 25;
    for (std::size_t i = 0; i < n; ++i) {
      logistic::SparseRow row;
      for (std::uint32_t j = 0; j < d.dimension; ++j) {
        if (rng() % 2) row.emplace_back(j, normal(rng));
      }
      d.rows.push_back(row);
      d.labels.push_back(static_cast<int>(rng() % 2));
    }
    std::vector<double> params(d.dimension + 1);
    for (double& p : params) p = normal(rng);
    const double l2 = 0.5 * static_cast<double>(rng() % 5);
    std::vector<double> grad;
    logistic::objective(params, d, l2, &grad);
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t j = 0; j < params.size(); ++j) {
      const double h = 1e-5;
      auto plus = params, minus = params;
      plus[j] += h;
      minus[j] -= h;
      const double fd =
          (logistic::objective(plus, d, l2, nullptr) - logistic::objective(minus, d, l2, nullptr)) / (2 * h);
      diff2 += (fd - grad[j]) * (fd - grad[j]);
      norm2 += grad[j] * grad[j];
    }
    worst = std::max(worst, std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-3));
  }
  o.require(worst <= 1e-5, "gradient relative error " + std::to_string(worst));

  const Lexicons lexicons = Lexicons::load(std::filesystem::path(STANCESUM_DATA_DIR) / "lexicons");
  const auto labeled = read_labeled(std::filesystem::path(STANCESUM_DATA_DIR) / "articulation_labeled.jsonl");
  const ArticulationModel model = train_articulation(labeled, lexicons);
  o.require(model.fold_accuracies.size() == 5, "expected 5 folds");
  o.require(model.cv_accuracy() >= 0.95, "CV accuracy " + fmt(model.cv_accuracy()));
  if (o.pass) {
    std::ostringstream ss;
    ss << "gradient rel. error " << worst << ", 5-fold CV " << fmt(model.cv_accuracy()) << " on "
       << labeled.size() << " examples";
    o.detail = ss.str();
  }
  return o;
}

Outcome sumbasic_check() {
  Outcome o;
  struct Fixture {
    std::vector<std::string> texts;
    std::unordered_set<std::string> stopwords;
    std::size_t k;
    std::vector<std::string> expected;
  };
  // Traced by hand from the update rule: pick the top word, the best
  // average tweet containing it, then square each of its words.
  const std::vector<Fixture> fixtures = {
      {{"apple banana", "apple cherry", "banana cherry apple", "date"}, {}, 4, {"t0", "t1", "t3", "t2"}},
      {{"the vote is today #vote", "vote now", "the vote is today #vote", "today is sunny"},
       {"the", "is"}, 2, {"t0", "t1"}},
      {{"the", "cats cats dogs", "dogs"}, {"the"}, 5, {"t1", "t2", "t0"}},
  };
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    std::vector<Tweet> tweets;
    for (std::size_t i = 0; i < fixtures[f].texts.size(); ++i) {
      Tweet t = make_tweet("t" + std::to_string(i), "u" + std::to_string(i), fixtures[f].texts[i]);
      t.timestamp = static_cast<std::int64_t>(i);
      tweets.push_back(t);
    }
    std::vector<std::string> got;
    for (const Tweet& t : sumbasic_summary(Corpus("t", tweets), fixtures[f].k, fixtures[f].stopwords)) {
      got.push_back(t.id);
    }
    o.require(got == fixtures[f].expected, "fixture " + std::to_string(f + 1) + " differs");
  }
  if (o.pass) o.detail = "3 fixtures match their traces";
  return o;
}

Outcome aggregator_check() {
  Outcome o;
  o.require(std::abs(harmonic_mean(0.5, 0.5, 0.5) - 0.5) <= 1e-12, "(0.5,0.5,0.5)");
  o.require(std::abs(harmonic_mean(1, 1, 0.5) - 0.75) <= 1e-12, "(1,1,0.5)");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double s = unit(rng), a = unit(rng), r = unit(rng);
    const double h = harmonic_mean(s, a, r);
    const double up = unit(rng);
    if (harmonic_mean(std::max(s, up), a, r) < h || harmonic_mean(s, std::max(a, up), r) < h ||
        harmonic_mean(s, a, std::max(r, up)) < h) {
      ++violations;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " monotonicity violations");
  const double at_floor = harmonic_mean(kScoreFloor, 1, 1);
  o.require(harmonic_mean(0.0, 1, 1) == at_floor, "zero not clamped to the floor");
  o.require(harmonic_mean(-1.0, 1, 1) == at_floor, "negative not clamped");
  o.require(harmonic_mean(2.0, 1, 1) == harmonic_mean(1, 1, 1), "values above 1 not clamped");
  o.require(std::abs(at_floor - 3.0 / (1.0 / kScoreFloor + 2.0)) <= 1e-24, "floor value");
  if (o.pass) o.detail = "examples exact, 10000 triples monotone, clamp at 1e-9";
  return o;
}

Outcome determinism_check() {
  Outcome o;
  namespace fs = std::filesystem;
  std::random_device rd;
  const fs::path root = fs::temp_directory_path() / ("stancesum-acceptance-" + std::to_string(rd()));
  const auto first = clipipeline::run_pipeline(root / "one", 11);
  const auto second = clipipeline::run_pipeline(root / "two", 11);
  o.require(first.ok, "step failed: " + first.failed_step);
  o.require(second.ok, "step failed: " + second.failed_step);
  if (first.ok && second.ok) {
    o.require(first.outputs.size() == second.outputs.size(), "different artifact sets");
    for (const auto& [name, content] : first.outputs) {
      const auto it = second.outputs.find(name);
      o.require(it != second.outputs.end() && it->second == content, name + " differs");
    }
  }
  if (o.pass) o.detail = std::to_string(first.outputs.size()) + " artifacts byte-identical across reruns";
  std::error_code ec;
  fs::remove_all(root, ec);
  return o;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  int failures = 0;
  auto report = [&](const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (budget_seconds > 0 && seconds >= budget_seconds) {
      o.pass = false;
      o.detail += " (took " + fmt(seconds) + " s, budget " + fmt(budget_seconds) + " s)";
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " [" << fmt(seconds) << " s] " << o.detail
              << std::endl;
  };

  report("ig-oracle-equivalence", 1.0, ig_oracle_check);
  report("partition-recovery", 10.0, partition_check);
  std::unique_ptr<DefaultRun> run;
  report("stance-hashtag-recovery", 5.0, [&] {
    run = std::make_unique<DefaultRun>(default_run());
    return hashtag_check(*run);
  });
  report("summary-purity", 10.0, [&] {
    if (!run) run = std::make_unique<DefaultRun>(default_run());
    return purity_check(*run);
  });
  report("articulation-training", 0.0, articulation_check);
  report("sumbasic-oracle", 0.0, sumbasic_check);
  report("aggregator-contract", 0.0, aggregator_check);
  report("determinism", 0.0, determinism_check);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
