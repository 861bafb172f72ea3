#include "stancesum/hashtag_posterior.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "stancesum/error.hpp"
#include "stancesum/format.hpp"

namespace stancesum {

std::optional<std::size_t> HashtagPredictor::vocabulary_index(const std::string& hashtag) const {
  const auto& vocab = vocabulary();
  const auto it = std::lower_bound(vocab.begin(), vocab.end(), hashtag);
  if (it == vocab.end() || *it != hashtag) return std::nullopt;
  return static_cast<std::size_t>(it - vocab.begin());
}

TweetPosterior::TweetPosterior(const HashtagPredictor& predictor, const Tweet& tweet)
    : predictor_(&predictor), explicit_(hashtags_of(tweet)), distribution_(predictor.predict(tweet)) {}

double TweetPosterior::operator()(const std::string& hashtag) const {
  if (explicit_.count(hashtag)) return 1.0;
  const auto idx = predictor_->vocabulary_index(hashtag);
  return idx ? distribution_[*idx] : 0.0;
}

double posterior(const HashtagPredictor& predictor, const Tweet& tweet,
                 const std::string& hashtag) {
  if (hashtags_of(tweet).count(hashtag)) return 1.0;
  const auto idx = predictor.vocabulary_index(hashtag);
  if (!idx) return 0.0;
  return predictor.predict(tweet)[*idx];
}

std::string featurization_text(std::string_view text) {
  std::string out;
  const TokenStream tokens = tokenize(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    switch (t.kind) {
      case TokenKind::kHashtag:
      case TokenKind::kMention:
      case TokenKind::kUrl:
      case TokenKind::kRetweetMarker:
        continue;
      default:
        break;
    }
    // The colon closing an "RT @user:" prefix belongs to the marker.
    if (t.kind == TokenKind::kPunctuation && i >= 2 && tokens[i - 1].kind == TokenKind::kMention &&
        tokens[i - 2].kind == TokenKind::kRetweetMarker) {
      continue;
    }
    if (!out.empty()) out.push_back(' ');
    out += utf8_lower(t.norm);
  }
  return out;
}

namespace {

constexpr std::string_view kMagic = "stancesum-hashtag-model";
constexpr int kFormatVersion = 1;

std::uint64_t hash_ngram(const char32_t* cps, int n) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  mix(static_cast<std::uint64_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto c = static_cast<std::uint32_t>(cps[i]);
    for (int b = 0; b < 4; ++b) mix((c >> (8 * b)) & 0xFF);
  }
  return h;
}

void softmax_in_place(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

std::string expect_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(std::string("hashtag model: missing ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_spaces(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

}  // namespace

std::vector<std::pair<std::uint32_t, double>> CharNgramPredictor::features(
    std::string_view featurized) const {
  const std::vector<char32_t> cps = utf8_decode(" " + std::string(featurized) + " ");
  std::map<std::uint32_t, double> counts;
  for (int n = options_.min_n; n <= options_.max_n; ++n) {
    if (cps.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= cps.size(); ++i) {
      counts[static_cast<std::uint32_t>(hash_ngram(&cps[i], n) % options_.dimension)] += 1.0;
    }
  }
  double norm = 0.0;
  for (const auto& [idx, c] : counts) norm += c * c;
  norm = std::sqrt(norm);
  std::vector<std::pair<std::uint32_t, double>> out;
  out.reserve(counts.size());
  for (const auto& [idx, c] : counts) out.emplace_back(idx, c / norm);
  return out;
}

std::vector<double> CharNgramPredictor::predict_text(std::string_view featurized) const {
  std::vector<double> z = bias_;
  for (const auto& [idx, value] : features(featurized)) {
    const auto it = weights_.find(idx);
    if (it == weights_.end()) continue;
    for (std::size_t c = 0; c < z.size(); ++c) z[c] += value * it->second[c];
  }
  softmax_in_place(z);
  return z;
}

std::vector<double> CharNgramPredictor::predict(const Tweet& tweet) const {
  return predict_text(featurization_text(tweet.text));
}

CharNgramPredictor CharNgramPredictor::train(const Corpus& corpus,
                                             const CharNgramOptions& options) {
  if (options.dimension == 0 || options.min_n < 1 || options.max_n < options.min_n ||
      options.epochs < 0 || !(options.learning_rate > 0.0)) {
    throw DomainError("invalid hashtag model options");
  }
  CharNgramPredictor model;
  model.options_ = options;
  for (const auto& [h, ids] : corpus.hashtag_index()) {
    if (static_cast<std::int64_t>(ids.size()) >= options.vocab_min_freq) {
      model.vocabulary_.push_back(h);
    }
  }
  if (model.vocabulary_.empty()) {
    throw TrainingError("no hashtag occurs at least vocab_min_freq times");
  }
  const std::size_t classes = model.vocabulary_.size();
  model.bias_.assign(classes, 0.0);

  struct Example {
    std::size_t feature_set;
    std::size_t label;
  };
  std::vector<std::vector<std::pair<std::uint32_t, double>>> feature_sets;
  std::vector<Example> examples;
  for (const Tweet& t : corpus.tweets()) {
    std::vector<std::size_t> labels;
    for (const std::string& h : hashtags_of(t)) {
      if (const auto idx = model.vocabulary_index(h)) labels.push_back(*idx);
    }
    if (labels.empty()) continue;
    feature_sets.push_back(model.features(featurization_text(t.text)));
    for (std::size_t label : labels) examples.push_back({feature_sets.size() - 1, label});
  }
  if (examples.empty()) throw TrainingError("no tweet carries a vocabulary hashtag");

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> z(classes);
  std::uint64_t step = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const Example& ex = examples[idx];
      const auto& x = feature_sets[ex.feature_set];
      const double lr = options.learning_rate / std::sqrt(static_cast<double>(++step));
      z = model.bias_;
      for (const auto& [f, v] : x) {
        const auto it = model.weights_.find(f);
        if (it == model.weights_.end()) continue;
        for (std::size_t c = 0; c < classes; ++c) z[c] += v * it->second[c];
      }
      softmax_in_place(z);
      z[ex.label] -= 1.0;  // dLoss/dlogit
      for (std::size_t c = 0; c < classes; ++c) model.bias_[c] -= lr * z[c];
      for (const auto& [f, v] : x) {
        auto& row = model.weights_[f];
        if (row.empty()) row.assign(classes, 0.0);
        for (std::size_t c = 0; c < classes; ++c) row[c] -= lr * v * z[c];
      }
    }
  }
  return model;
}

bool CharNgramPredictor::same_parameters(const CharNgramPredictor& other) const {
  return vocabulary_ == other.vocabulary_ && bias_ == other.bias_ &&
         weights_ == other.weights_ && options_.dimension == other.options_.dimension &&
         options_.min_n == other.options_.min_n && options_.max_n == other.options_.max_n;
}

void CharNgramPredictor::save(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "dimension " << options_.dimension << '\n';
  out << "ngram " << options_.min_n << ' ' << options_.max_n << '\n';
  out << "training epochs " << options_.epochs << " learning_rate "
      << format_double(options_.learning_rate) << " vocab_min_freq " << options_.vocab_min_freq
      << " seed " << options_.seed << '\n';
  out << "vocabulary " << vocabulary_.size() << '\n';
  for (const auto& h : vocabulary_) out << h << '\n';
  out << "bias";
  for (double b : bias_) out << ' ' << format_double(b);
  out << '\n';
  std::vector<std::uint32_t> keys;
  keys.reserve(weights_.size());
  for (const auto& [k, row] : weights_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  out << "rows " << keys.size() << '\n';
  for (std::uint32_t k : keys) {
    out << k;
    for (double w : weights_.at(k)) out << ' ' << format_double(w);
    out << '\n';
  }
}

CharNgramPredictor CharNgramPredictor::load(std::istream& in) {
  CharNgramPredictor m;
  auto header = split_spaces(expect_line(in, "header"));
  if (header.size() != 2 || header[0] != kMagic) throw FormatError("not a hashtag model file");
  if (parse_int(header[1]) != kFormatVersion) {
    throw FormatError("unsupported hashtag model version " + header[1]);
  }
  auto dim = split_spaces(expect_line(in, "dimension"));
  if (dim.size() != 2 || dim[0] != "dimension") throw FormatError("hashtag model: bad dimension");
  m.options_.dimension = static_cast<std::uint32_t>(parse_int(dim[1]));
  auto ngram = split_spaces(expect_line(in, "ngram"));
  if (ngram.size() != 3 || ngram[0] != "ngram") throw FormatError("hashtag model: bad ngram");
  m.options_.min_n = static_cast<int>(parse_int(ngram[1]));
  m.options_.max_n = static_cast<int>(parse_int(ngram[2]));
  auto training = split_spaces(expect_line(in, "training"));
  if (training.size() != 9 || training[0] != "training") {
    throw FormatError("hashtag model: bad training line");
  }
  m.options_.epochs = static_cast<int>(parse_int(training[2]));
  m.options_.learning_rate = parse_double(training[4]);
  m.options_.vocab_min_freq = parse_int(training[6]);
  m.options_.seed = static_cast<std::uint64_t>(parse_int(training[8]));
  if (m.options_.dimension == 0 || m.options_.min_n < 1 || m.options_.max_n < m.options_.min_n) {
    throw FormatError("hashtag model: invalid feature space");
  }

  auto vocab = split_spaces(expect_line(in, "vocabulary"));
  if (vocab.size() != 2 || vocab[0] != "vocabulary") {
    throw FormatError("hashtag model: bad vocabulary header");
  }
  const auto v = static_cast<std::size_t>(parse_int(vocab[1]));
  for (std::size_t i = 0; i < v; ++i) m.vocabulary_.push_back(expect_line(in, "vocabulary entry"));
  if (!std::is_sorted(m.vocabulary_.begin(), m.vocabulary_.end()) || m.vocabulary_.empty()) {
    throw FormatError("hashtag model: vocabulary must be non-empty and sorted");
  }
  auto bias = split_spaces(expect_line(in, "bias"));
  if (bias.size() != v + 1 || bias[0] != "bias") throw FormatError("hashtag model: bad bias");
  for (std::size_t i = 1; i < bias.size(); ++i) m.bias_.push_back(parse_double(bias[i]));
  auto rows = split_spaces(expect_line(in, "rows"));
  if (rows.size() != 2 || rows[0] != "rows") throw FormatError("hashtag model: bad rows header");
  const auto r = static_cast<std::size_t>(parse_int(rows[1]));
  for (std::size_t i = 0; i < r; ++i) {
    auto fields = split_spaces(expect_line(in, "weight row"));
    if (fields.size() != v + 1) throw FormatError("hashtag model: bad weight row");
    const auto key = static_cast<std::uint32_t>(parse_int(fields[0]));
    if (key >= m.options_.dimension) throw FormatError("hashtag model: row index out of range");
    std::vector<double> row;
    row.reserve(v);
    for (std::size_t c = 1; c < fields.size(); ++c) row.push_back(parse_double(fields[c]));
    m.weights_[key] = std::move(row);
  }
  return m;
}

}  // namespace stancesum
