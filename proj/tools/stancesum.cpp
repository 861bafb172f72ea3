// Command-line driver: each subcommand runs one pipeline stage and writes
// its artifact to disk so stages can be rerun independently.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stancesum/articulation.hpp"
#include "stancesum/baselines.hpp"
#include "stancesum/community_graph.hpp"
#include "stancesum/corpus.hpp"
#include "stancesum/error.hpp"
#include "stancesum/eval_bundle.hpp"
#include "stancesum/format.hpp"
#include "stancesum/hashtag_posterior.hpp"
#include "stancesum/relevance.hpp"
#include "stancesum/stance_hashtags.hpp"
#include "stancesum/summarizer.hpp"
#include "stancesum/summary_io.hpp"
#include "stancesum/synthgen.hpp"

namespace fs = std::filesystem;
using namespace stancesum;

namespace {

struct Globals {
  std::size_t k = 10;
  std::size_t top_n = 30;
  std::int64_t min_freq = 5;
  double lambda = 0.8;
  double balance_tolerance = 0.2;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool community_only = false;
  std::string lexicons = std::string(STANCESUM_DEFAULT_DATA_DIR) + "/lexicons";
};

void log_params(const std::string& command,
                const std::vector<std::pair<std::string, std::string>>& params) {
  std::cerr << "[stancesum] " << command;
  for (const auto& [key, value] : params) std::cerr << ' ' << key << '=' << value;
  std::cerr << '\n';
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return in;
}

// Writes through a sibling temporary file so a failed run never leaves a
// half-written artifact behind.
template <typename Fn>
void write_file(const std::string& path, Fn&& fill) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    fill(out);
    out.flush();
    if (!out) throw IoError("write failed for " + path);
  }
  fs::rename(tmp, target);
}

Corpus load_corpus(const std::string& path, const std::string& topic) {
  IngestResult r = ingest(fs::path(path), topic);
  if (r.skipped > 0) std::cerr << "[stancesum] skipped " << r.skipped << " record(s) in " << path << '\n';
  return std::move(r.corpus);
}

CommunityAssignment load_assignment(const std::string& path) {
  auto in = open_in(path);
  return read_assignment(in);
}

std::vector<std::string> split_terms(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string term;
  while (std::getline(ss, term, ',')) {
    if (!term.empty()) out.push_back(term);
  }
  return out;
}

std::string str(double v) { return format_double(v); }
template <typename T>
std::string str(T v) {
  return std::to_string(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stance summarization toolkit for two-sided social media controversies"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key = value configuration file; flags override it");

  Globals g;
  app.add_option("--k", g.k, "Summary size (k/2 tweets per stance)")->capture_default_str();
  app.add_option("--top-n", g.top_n, "Number of stance hashtags kept by information gain")
      ->capture_default_str();
  app.add_option("--min-freq", g.min_freq, "Minimum community frequency for hashtag candidates")
      ->capture_default_str();
  app.add_option("--lambda", g.lambda, "Topic language model mixing weight")->capture_default_str();
  app.add_option("--balance-tolerance", g.balance_tolerance, "Partition balance tolerance")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Scoring threads")->capture_default_str()->check(
      CLI::PositiveNumber);
  app.add_flag("--community-only", g.community_only,
               "Restrict summary candidates to community authors");
  app.add_option("--lexicons", g.lexicons, "Directory with the lexicon files")->capture_default_str();

  // ingest
  std::string in_path, out_path, topic = "topic";
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate raw records and write a clean corpus");
  ingest_cmd->add_option("--input", in_path, "Raw line-delimited records")->required();
  ingest_cmd->add_option("--topic", topic, "Topic name")->capture_default_str();
  ingest_cmd->add_option("--output", out_path, "Clean corpus file")->required();

  // partition
  std::string corpus_path, graph_out, assignment_path;
  bool binary_weights = false;
  auto* partition_cmd = app.add_subcommand("partition", "Bipartition the retweet graph");
  partition_cmd->add_option("--corpus", corpus_path)->required();
  partition_cmd->add_option("--output", out_path, "Assignment file (user<TAB>label)")->required();
  partition_cmd->add_option("--graph-output", graph_out, "Optional edge list export");
  partition_cmd->add_flag("--binary-weights", binary_weights, "Count each user pair once");

  // hashtags
  auto* hashtags_cmd = app.add_subcommand("hashtags", "Mine stance hashtags by information gain");
  hashtags_cmd->add_option("--corpus", corpus_path)->required();
  hashtags_cmd->add_option("--assignment", assignment_path)->required();
  hashtags_cmd->add_option("--output", out_path)->required();

  // train-hashtag-model
  CharNgramOptions ngram;
  auto* thm_cmd = app.add_subcommand("train-hashtag-model", "Train the hashtag posterior model");
  thm_cmd->add_option("--corpus", corpus_path)->required();
  thm_cmd->add_option("--output", out_path)->required();
  thm_cmd->add_option("--epochs", ngram.epochs)->capture_default_str();
  thm_cmd->add_option("--learning-rate", ngram.learning_rate)->capture_default_str();
  thm_cmd->add_option("--vocab-min-freq", ngram.vocab_min_freq)->capture_default_str();
  thm_cmd->add_option("--dimension", ngram.dimension)->capture_default_str();

  // train-articulation
  std::string labeled_path;
  ArticulationTrainOptions art;
  auto* ta_cmd = app.add_subcommand("train-articulation", "Train the articulation classifier");
  ta_cmd->add_option("--labeled", labeled_path, "Labeled set ({text, label} lines)")->required();
  ta_cmd->add_option("--output", out_path)->required();
  ta_cmd->add_option("--l2", art.l2)->capture_default_str();
  ta_cmd->add_option("--folds", art.folds)->capture_default_str();

  // build-lm
  std::string background_path, terms;
  auto* lm_cmd = app.add_subcommand("build-lm", "Build the topic language model");
  lm_cmd->add_option("--corpus", corpus_path)->required();
  lm_cmd->add_option("--background", background_path, "Background corpus (default: --corpus)");
  lm_cmd->add_option("--terms", terms, "Comma-separated topic query terms (default: topic name)");
  lm_cmd->add_option("--topic", topic)->capture_default_str();
  lm_cmd->add_option("--output", out_path)->required();

  // summarize
  std::string method = "sumsat", table_path, hashtag_model_path, articulation_path, lm_path;
  bool prior_weighted = false;
  auto* sum_cmd = app.add_subcommand("summarize", "Select a stance summary");
  sum_cmd->add_option("--method", method)->check(CLI::IsMember({"sumsat", "hashtag-sumsat"}))
      ->capture_default_str();
  sum_cmd->add_option("--corpus", corpus_path)->required();
  sum_cmd->add_option("--topic", topic)->capture_default_str();
  sum_cmd->add_option("--table", table_path)->required();
  sum_cmd->add_option("--hashtag-model", hashtag_model_path)->required();
  sum_cmd->add_option("--articulation-model", articulation_path)->required();
  sum_cmd->add_option("--lm", lm_path)->required();
  sum_cmd->add_option("--assignment", assignment_path, "Required with --community-only");
  sum_cmd->add_flag("--prior-weighted", prior_weighted,
                    "Weight stance terms by the corpus hashtag prior");
  sum_cmd->add_option("--output", out_path)->required();

  // baseline
  std::string baseline_method = "random", stopwords_path;
  std::optional<std::int64_t> day;
  auto* base_cmd = app.add_subcommand("baseline", "Run a stance-agnostic baseline");
  base_cmd->add_option("--method", baseline_method)
      ->check(CLI::IsMember({"random", "most-rt", "sumbasic"}))
      ->capture_default_str();
  base_cmd->add_option("--corpus", corpus_path)->required();
  base_cmd->add_option("--topic", topic)->capture_default_str();
  base_cmd->add_option("--day", day, "UTC day number for most-rt (days since epoch)");
  base_cmd->add_option("--stopwords", stopwords_path,
                       "Stopword list for sumbasic (default: lexicons/twitter_stopwords.txt)");
  base_cmd->add_option("--output", out_path)->required();

  // synth
  SynthSpec spec;
  std::string out_dir;
  std::size_t labeled_per_class = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  synth_cmd->add_option("--output-dir", out_dir)->required();
  synth_cmd->add_option("--users-per-side", spec.users_per_side)->capture_default_str();
  synth_cmd->add_option("--p-in", spec.p_in)->capture_default_str();
  synth_cmd->add_option("--p-out", spec.p_out)->capture_default_str();
  synth_cmd->add_option("--tweets-per-user", spec.tweets_per_user)->capture_default_str();
  synth_cmd->add_option("--stance-hashtags", spec.stance_hashtag_count)->capture_default_str();
  synth_cmd->add_option("--hashtag-use-rate", spec.hashtag_use_rate)->capture_default_str();
  synth_cmd->add_option("--noise-hashtag-rate", spec.noise_hashtag_rate)->capture_default_str();
  synth_cmd->add_option("--articulate-fraction", spec.articulate_fraction)->capture_default_str();
  synth_cmd->add_option("--topical-word-rate", spec.topical_word_rate)->capture_default_str();
  synth_cmd->add_option("--labeled-per-class", labeled_per_class,
                        "Also write labeled.jsonl with this many examples per class");

  // diagnose
  std::string truth_path, manifest_path, summary_path;
  auto* diag_cmd = app.add_subcommand("diagnose", "Compare pipeline outputs with planted truth");
  diag_cmd->add_option("--corpus", corpus_path)->required();
  diag_cmd->add_option("--topic", topic)->capture_default_str();
  diag_cmd->add_option("--truth", truth_path, "Planted assignment file")->required();
  diag_cmd->add_option("--manifest", manifest_path, "Planted hashtag manifest")->required();
  diag_cmd->add_option("--assignment", assignment_path);
  diag_cmd->add_option("--table", table_path);
  diag_cmd->add_option("--summary", summary_path);
  diag_cmd->add_option("--output", out_path)->required();

  // eval-bundle
  std::string x_path, y_path, mapping_path;
  auto* eval_cmd = app.add_subcommand("eval-bundle", "Blind two summaries for pairwise judging");
  eval_cmd->add_option("--first", x_path)->required();
  eval_cmd->add_option("--second", y_path)->required();
  eval_cmd->add_option("--output", out_path, "Blinded bundle")->required();
  eval_cmd->add_option("--mapping-output", mapping_path, "Separate X/Y -> method mapping")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ingest_cmd) {
      log_params("ingest", {{"input", in_path}, {"topic", topic}, {"output", out_path}});
      IngestResult r = ingest(fs::path(in_path), topic);
      for (const std::string& p : r.problems) std::cerr << "[stancesum] " << p << '\n';
      std::cerr << "[stancesum] kept " << r.corpus.size() << " skipped " << r.skipped << '\n';
      write_file(out_path, [&](std::ostream& out) { write_corpus(out, r.corpus); });
    } else if (*partition_cmd) {
      log_params("partition", {{"corpus", corpus_path},
                               {"balance_tolerance", str(g.balance_tolerance)},
                               {"seed", str(g.seed)},
                               {"binary_weights", binary_weights ? "true" : "false"}});
      const Corpus corpus = load_corpus(corpus_path, topic);
      const RetweetGraph graph = build_graph(corpus, GraphOptions{binary_weights});
      PartitionOptions options;
      options.balance_tolerance = g.balance_tolerance;
      options.seed = g.seed;
      const CommunityAssignment assignment = partition(graph, options);
      std::cerr << "[stancesum] nodes " << graph.node_count() << " A " << assignment.count(Label::kA)
                << " B " << assignment.count(Label::kB) << " cut " << str(assignment.cut_weight)
                << '\n';
      write_file(out_path, [&](std::ostream& out) { write_assignment(out, assignment); });
      if (!graph_out.empty()) {
        write_file(graph_out, [&](std::ostream& out) { write_edge_list(out, graph); });
      }
    } else if (*hashtags_cmd) {
      log_params("hashtags", {{"corpus", corpus_path},
                              {"assignment", assignment_path},
                              {"top_n", str(g.top_n)},
                              {"min_freq", str(g.min_freq)}});
      const Corpus corpus = load_corpus(corpus_path, topic);
      const StanceHashtagTable table =
          mine(corpus, load_assignment(assignment_path), MineOptions{g.top_n, g.min_freq});
      if (table.insufficient()) {
        std::cerr << "[stancesum] warning: fewer than two stance hashtags on a side\n";
      }
      write_file(out_path, [&](std::ostream& out) { write_table(out, table); });
    } else if (*thm_cmd) {
      ngram.seed = g.seed;
      log_params("train-hashtag-model", {{"corpus", corpus_path},
                                         {"epochs", str(ngram.epochs)},
                                         {"learning_rate", str(ngram.learning_rate)},
                                         {"vocab_min_freq", str(ngram.vocab_min_freq)},
                                         {"dimension", str(ngram.dimension)},
                                         {"seed", str(ngram.seed)}});
      const Corpus corpus = load_corpus(corpus_path, topic);
      const CharNgramPredictor model = CharNgramPredictor::train(corpus, ngram);
      std::cerr << "[stancesum] vocabulary " << model.vocabulary().size() << '\n';
      write_file(out_path, [&](std::ostream& out) { model.save(out); });
    } else if (*ta_cmd) {
      art.seed = g.seed;
      log_params("train-articulation", {{"labeled", labeled_path},
                                        {"l2", str(art.l2)},
                                        {"folds", str(art.folds)},
                                        {"seed", str(art.seed)},
                                        {"lexicons", g.lexicons}});
      const Lexicons lexicons = Lexicons::load(g.lexicons);
      const ArticulationModel model =
          train_articulation(read_labeled(fs::path(labeled_path)), lexicons, art);
      std::cerr << "[stancesum] cross-validation accuracy " << str(model.cv_accuracy()) << '\n';
      write_file(out_path, [&](std::ostream& out) { model.save(out); });
    } else if (*lm_cmd) {
      log_params("build-lm", {{"corpus", corpus_path},
                              {"background", background_path.empty() ? corpus_path : background_path},
                              {"terms", terms.empty() ? topic : terms},
                              {"lambda", str(g.lambda)}});
      const Corpus corpus = load_corpus(corpus_path, topic);
      const Corpus background =
          background_path.empty() ? corpus : load_corpus(background_path, topic);
      const Corpus topical =
          select_by_terms(corpus, terms.empty() ? std::vector<std::string>{topic} : split_terms(terms));
      if (topical.empty()) throw EmptyCorpusError("no tweet matches the topic terms");
      const TopicLanguageModel lm = TopicLanguageModel::build(topical, background, g.lambda);
      write_file(out_path, [&](std::ostream& out) { lm.save(out); });
    } else if (*sum_cmd) {
      log_params("summarize", {{"method", method},
                               {"k", str(g.k)},
                               {"community_only", g.community_only ? "true" : "false"},
                               {"prior_weighted", prior_weighted ? "true" : "false"},
                               {"threads", str(g.threads)}});
      const Corpus corpus = load_corpus(corpus_path, topic);
      auto table_in = open_in(table_path);
      const StanceHashtagTable table = read_table(table_in);
      auto hm_in = open_in(hashtag_model_path);
      const CharNgramPredictor predictor = CharNgramPredictor::load(hm_in);
      auto am_in = open_in(articulation_path);
      auto lexicons = std::make_shared<const Lexicons>(Lexicons::load(g.lexicons));
      const ArticulationScorer articulation(ArticulationModel::load(am_in), lexicons);
      auto lm_in = open_in(lm_path);
      const TopicLanguageModel lm = TopicLanguageModel::load(lm_in);
      const auto priors = hashtag_priors(corpus);

      std::optional<CommunityAssignment> assignment;
      if (!assignment_path.empty()) assignment = load_assignment(assignment_path);
      ScoringModels models;
      models.table = &table;
      models.predictor = &predictor;
      models.articulation = [&](const Tweet& t) { return articulation(t); };
      models.relevance = [&](const Tweet& t) { return relevance_score(lm, t); };
      if (prior_weighted) models.stance_options.priors = &priors;
      SummarizerConfig config;
      config.k = g.k;
      config.community_only = g.community_only;
      config.assignment = assignment ? &*assignment : nullptr;
      config.threads = g.threads;
      const Summary summary = method == "sumsat" ? sum_sat(corpus, models, config)
                                                 : hashtag_sum_sat(corpus, models, config);
      if (summary.shortfall_a + summary.shortfall_b > 0) {
        std::cerr << "[stancesum] warning: shortfall A " << summary.shortfall_a << " B "
                  << summary.shortfall_b << '\n';
      }
      write_file(out_path, [&](std::ostream& out) { write_summary(out, summary); });
    } else if (*base_cmd) {
      log_params("baseline", {{"method", baseline_method},
                              {"k", str(g.k)},
                              {"seed", str(g.seed)},
                              {"day", day ? str(*day) : "none"}});
      const Corpus corpus = load_corpus(corpus_path, topic);
      std::vector<Tweet> picked;
      std::string name;
      if (baseline_method == "random") {
        picked = random_summary(corpus, g.k, g.seed);
        name = "Random";
      } else if (baseline_method == "most-rt") {
        picked = most_rt_summary(corpus, g.k, day);
        name = "MostRT";
      } else {
        const std::string path =
            stopwords_path.empty() ? g.lexicons + "/twitter_stopwords.txt" : stopwords_path;
        picked = sumbasic_summary(corpus, g.k, load_word_list(path));
        name = "SumBasic";
      }
      const Summary summary = baseline_summary(corpus, name, g.k, picked);
      write_file(out_path, [&](std::ostream& out) { write_summary(out, summary); });
    } else if (*synth_cmd) {
      spec.seed = g.seed;
      log_params("synth", {{"users_per_side", str(spec.users_per_side)},
                           {"p_in", str(spec.p_in)},
                           {"p_out", str(spec.p_out)},
                           {"tweets_per_user", str(spec.tweets_per_user)},
                           {"seed", str(spec.seed)}});
      const SynthOutput synth = generate(spec);
      const fs::path dir(out_dir);
      write_file((dir / "corpus.jsonl").string(),
                 [&](std::ostream& out) { write_corpus(out, synth.corpus); });
      write_file((dir / "truth_assignment.tsv").string(),
                 [&](std::ostream& out) { write_assignment(out, synth.truth.assignment); });
      write_file((dir / "planted.json").string(),
                 [&](std::ostream& out) { write_manifest(out, spec, synth.truth); });
      if (labeled_per_class > 0) {
        write_file((dir / "labeled.jsonl").string(), [&](std::ostream& out) {
          write_labeled(out, generate_labeled_set(labeled_per_class, spec.seed));
        });
      }
    } else if (*diag_cmd) {
      log_params("diagnose", {{"corpus", corpus_path}, {"truth", truth_path}});
      const Corpus corpus = load_corpus(corpus_path, topic);
      auto truth_in = open_in(truth_path);
      auto manifest_in = open_in(manifest_path);
      const GroundTruth truth = read_ground_truth(truth_in, manifest_in);
      std::optional<CommunityAssignment> assignment;
      std::optional<StanceHashtagTable> table;
      std::optional<Summary> summary;
      if (!assignment_path.empty()) assignment = load_assignment(assignment_path);
      if (!table_path.empty()) {
        auto in = open_in(table_path);
        table = read_table(in);
      }
      if (!summary_path.empty()) {
        auto in = open_in(summary_path);
        summary = read_summary(in);
      }
      const Diagnostics d =
          diagnose(corpus, truth,
                   {assignment ? &*assignment : nullptr, table ? &*table : nullptr,
                    summary ? &*summary : nullptr});
      write_file(out_path, [&](std::ostream& out) { out << diagnostics_json(d); });
    } else if (*eval_cmd) {
      log_params("eval-bundle", {{"first", x_path}, {"second", y_path}, {"seed", str(g.seed)}});
      auto x_in = open_in(x_path);
      auto y_in = open_in(y_path);
      const EvalBundle bundle = make_eval_bundle(read_summary(x_in), read_summary(y_in), g.seed);
      write_file(out_path, [&](std::ostream& out) { out << bundle.bundle_json; });
      write_file(mapping_path, [&](std::ostream& out) { out << bundle.mapping_json; });
    }
  } catch (const Error& e) {
    std::cerr << "stancesum: error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "stancesum: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
