#include "stancesum/relevance.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "stancesum/error.hpp"
#include "stancesum/format.hpp"

namespace stancesum {

namespace {

std::map<std::string, double> unigram_mle(const Corpus& corpus) {
  std::map<std::string, double> counts;
  double total = 0.0;
  for (const Tweet& t : corpus.tweets()) {
    for (std::string& term : lm_terms(t.text)) {
      counts[std::move(term)] += 1.0;
      total += 1.0;
    }
  }
  for (auto& [word, c] : counts) c /= total;
  return counts;
}

double lookup(const std::map<std::string, double>& dist, const std::string& word) {
  const auto it = dist.find(word);
  return it == dist.end() ? 0.0 : it->second;
}

void check_distribution(const std::map<std::string, double>& dist, const char* name) {
  if (dist.empty()) throw DomainError(std::string(name) + " language model has no vocabulary");
  double sum = 0.0;
  for (const auto& [word, p] : dist) {
    if (!(p > 0.0)) throw DomainError(std::string(name) + " probability of '" + word + "' is not positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError(std::string(name) + " distribution sums to " + format_double(sum));
  }
}

}  // namespace

std::vector<std::string> lm_terms(std::string_view text) {
  std::vector<std::string> terms;
  for (const Token& token : tokenize(text)) {
    if (token.kind == TokenKind::kWord) {
      terms.push_back(token.norm);
    } else if (token.kind == TokenKind::kHashtag) {
      terms.push_back(token.norm.substr(1));
    }
  }
  return terms;
}

TopicLanguageModel::TopicLanguageModel(std::map<std::string, double> topic,
                                       std::map<std::string, double> background, double lambda)
    : topic_(std::move(topic)), background_(std::move(background)), lambda_(lambda) {
  if (!(lambda_ > 0.0 && lambda_ < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  check_distribution(topic_, "topic");
  check_distribution(background_, "background");
}

TopicLanguageModel TopicLanguageModel::build(const Corpus& topic, const Corpus& background,
                                             double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  return TopicLanguageModel(unigram_mle(topic), unigram_mle(background), lambda);
}

double TopicLanguageModel::topic_probability(const std::string& word) const {
  return lookup(topic_, word);
}

double TopicLanguageModel::background_probability(const std::string& word) const {
  return lookup(background_, word);
}

double TopicLanguageModel::floor() const {
  return (1.0 - lambda_) / static_cast<double>(background_.size());
}

double TopicLanguageModel::probability(const std::string& word) const {
  const double p = lambda_ * topic_probability(word) + (1.0 - lambda_) * background_probability(word);
  return p > 0.0 ? p : floor();
}

void TopicLanguageModel::save(std::ostream& out) const {
  out << "# lambda " << format_double(lambda_) << "\n";
  out << "# background_vocabulary " << background_.size() << "\n";
  std::set<std::string> vocab;
  for (const auto& [w, p] : topic_) vocab.insert(w);
  for (const auto& [w, p] : background_) vocab.insert(w);
  for (const std::string& w : vocab) {
    out << w << '\t' << format_double(topic_probability(w)) << '\t'
        << format_double(background_probability(w)) << '\n';
  }
}

TopicLanguageModel TopicLanguageModel::load(std::istream& in) {
  std::string line;
  double lambda = -1.0;
  std::map<std::string, double> topic, background;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# lambda ", 0) == 0) lambda = parse_double(std::string_view(line).substr(9));
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw FormatError("language model line " + std::to_string(lineno) + ": expected 3 fields");
    }
    const double pt = parse_double(fields[1]);
    const double pb = parse_double(fields[2]);
    if (pt > 0.0) topic[fields[0]] = pt;
    if (pb > 0.0) background[fields[0]] = pb;
  }
  if (lambda < 0.0) throw FormatError("language model: missing '# lambda' header");
  return TopicLanguageModel(std::move(topic), std::move(background), lambda);
}

double relevance_score(const TopicLanguageModel& lm, const Tweet& tweet) {
  const std::vector<std::string> terms = lm_terms(tweet.text);
  if (terms.empty()) return lm.floor();
  double log_sum = 0.0;
  for (const std::string& term : terms) log_sum += std::log(lm.probability(term));
  return std::exp(log_sum / static_cast<double>(terms.size()));
}

}  // namespace stancesum
