#include "stancesum/articulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "stancesum/error.hpp"
#include "stancesum/format.hpp"

namespace stancesum {

namespace {

constexpr std::string_view kTagSymbols = "NO^SZVLMAR!DP&TXY#@~UE$,G";
static_assert(kTagSymbols.size() == kPosTagCount);

const std::unordered_set<std::string>& pronouns() {
  static const std::unordered_set<std::string> s = {
      "i",     "me",       "you",    "he",    "him",    "she",        "it",    "we",
      "us",    "they",     "them",   "mine",  "yours",  "hers",       "ours",  "theirs",
      "myself", "yourself", "himself", "herself", "itself", "ourselves", "themselves",
      "who",   "whom",     "what",   "which", "whoever", "someone",   "anyone", "everyone",
      "nobody", "nothing", "something", "everything", "anything", "u", "ya"};
  return s;
}

const std::unordered_set<std::string>& determiners() {
  static const std::unordered_set<std::string> s = {
      "a",   "an",   "the",   "this", "that",  "these", "those", "my",   "your",
      "his", "her",  "its",   "our",  "their", "some",  "any",   "every", "no",
      "each", "either", "neither", "another", "much", "many", "few", "several", "ur"};
  return s;
}

const std::unordered_set<std::string>& prepositions() {
  static const std::unordered_set<std::string> s = {
      "in",     "on",      "at",     "by",      "for",   "with",  "about",  "against",
      "between", "into",   "through", "during", "before", "after", "above", "below",
      "to",     "from",    "of",     "over",    "under", "since", "without", "within",
      "upon",   "near",    "like",   "among",   "across", "behind", "beyond", "toward",
      "towards", "despite", "until", "via",     "per",   "than",  "as"};
  return s;
}

const std::unordered_set<std::string>& conjunctions() {
  static const std::unordered_set<std::string> s = {
      "and", "but", "or", "nor", "so", "yet", "because", "although", "though",
      "while", "if", "unless", "whereas", "whether", "&"};
  return s;
}

const std::unordered_set<std::string>& interjections() {
  static const std::unordered_set<std::string> s = {
      "oh",  "wow",  "lol", "omg", "haha", "hahaha", "yes",  "yeah", "ok",   "okay",
      "hey", "hmm",  "ugh", "yay", "smh",  "wtf",    "lmao", "damn", "dammit", "yep",
      "nope", "please", "thanks", "ah", "oops", "hi", "hello", "lmfao", "rofl", "meh"};
  return s;
}

const std::unordered_set<std::string>& verbs() {
  static const std::unordered_set<std::string> s = {
      "is",    "am",    "are",   "was",   "were",  "be",     "been",   "being", "have",
      "has",   "had",   "do",    "does",  "did",   "will",   "would",  "shall", "should",
      "can",   "could", "may",   "might", "must",  "get",    "got",    "make",  "made",
      "go",    "goes",  "went",  "know",  "think", "want",   "say",    "said",  "need",
      "see",   "let",   "take",  "give",  "come",  "tell",   "feel",   "keep",  "stand",
      "vote",  "stop",  "save",  "protect", "support", "defend", "believe", "ban", "fight",
      "don't", "doesn't", "didn't", "can't", "won't", "isn't", "aren't", "wasn't",
      "shouldn't", "wouldn't", "couldn't", "gonna", "wanna", "gotta"};
  return s;
}

const std::unordered_set<std::string>& adverbs() {
  static const std::unordered_set<std::string> s = {
      "not",   "never", "very", "really", "just", "also",  "too",  "always", "often",
      "still", "already", "even", "only", "quite", "now",  "then", "here",   "again",
      "soon",  "ever",  "almost", "perhaps", "maybe", "why", "how", "when", "where",
      "today", "tomorrow", "yesterday", "n't"};
  return s;
}

const std::unordered_set<std::string>& nominal_verbals() {
  static const std::unordered_set<std::string> s = {
      "i'm",   "im",     "you're", "we're", "they're", "he's",  "she's",   "it's",
      "i'll",  "you'll", "we'll",  "they'll", "i've",  "you've", "we've",  "they've",
      "i'd",   "you'd",  "we'd",   "they'd", "that's", "what's", "who's",  "let's"};
  return s;
}

const std::unordered_set<std::string>& existentials() {
  static const std::unordered_set<std::string> s = {"there", "both", "all", "half"};
  return s;
}

const std::unordered_set<std::string>& particles() {
  static const std::unordered_set<std::string> s = {"up", "out", "off", "down", "away", "back"};
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool ascii_upper_initial(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])) != 0;
}

bool all_ascii_upper(std::string_view s) {
  bool any = false;
  for (char c : s) {
    if (std::islower(static_cast<unsigned char>(c))) return false;
    if (std::isupper(static_cast<unsigned char>(c))) any = true;
  }
  return any;
}

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

PosTag tag_word(const Token& token, bool sentence_initial) {
  const std::string& w = token.norm;
  if (nominal_verbals().count(w)) return PosTag::kNominalVerbal;
  if (w == "there's" || w == "there're") return PosTag::kExistentialVerbal;
  if (pronouns().count(w)) return PosTag::kPronoun;
  if (determiners().count(w)) return PosTag::kDeterminer;
  if (prepositions().count(w)) return PosTag::kPreposition;
  if (conjunctions().count(w)) return PosTag::kConjunction;
  if (interjections().count(w)) return PosTag::kInterjection;
  if (verbs().count(w)) return PosTag::kVerb;
  if (adverbs().count(w)) return PosTag::kAdverb;
  if (existentials().count(w)) return PosTag::kExistential;
  if (particles().count(w)) return PosTag::kParticle;
  if (has_digit(w) || w.find('*') != std::string::npos) return PosTag::kOther;

  const bool proper = ascii_upper_initial(token.surface) && !sentence_initial &&
                      !(all_ascii_upper(token.surface) && token.surface.size() > 3);
  if (ends_with(w, "'s")) return proper ? PosTag::kProperPossessive : PosTag::kNominalPossessive;
  if (ends_with(w, "'ll") || ends_with(w, "'d")) {
    return proper ? PosTag::kProperVerbal : PosTag::kNominalVerbal;
  }
  if (proper) return PosTag::kProperNoun;
  if (w.size() <= 2 && w != "ox") return PosTag::kOther;
  if (ends_with(w, "ly")) return PosTag::kAdverb;
  if (ends_with(w, "ing") || ends_with(w, "ed") || ends_with(w, "ize") || ends_with(w, "ise")) {
    return PosTag::kVerb;
  }
  for (std::string_view suffix : {"ous", "ful", "ive", "able", "ible", "less", "ish", "ic", "al",
                                  "est", "ent", "ant"}) {
    if (ends_with(w, suffix)) return PosTag::kAdjective;
  }
  return PosTag::kCommonNoun;
}

std::uint32_t hash_ngram(std::string_view gram) {
  std::uint32_t h = 2166136261u;
  for (char c : gram) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h % kPosNgramBuckets;
}

std::uint64_t fnv64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

char pos_tag_symbol(PosTag tag) { return kTagSymbols[static_cast<std::size_t>(tag)]; }

std::vector<PosTag> RulePosTagger::tag(const TokenStream& tokens) const {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  bool sentence_start = true;
  for (const Token& token : tokens) {
    PosTag t = PosTag::kPunctuation;
    switch (token.kind) {
      case TokenKind::kHashtag: t = PosTag::kHashtag; break;
      case TokenKind::kMention: t = PosTag::kMention; break;
      case TokenKind::kUrl: t = PosTag::kUrl; break;
      case TokenKind::kEmoticon: t = PosTag::kEmoticon; break;
      case TokenKind::kNumber: t = PosTag::kNumeral; break;
      case TokenKind::kRetweetMarker: t = PosTag::kDiscourse; break;
      case TokenKind::kPunctuation: t = PosTag::kPunctuation; break;
      case TokenKind::kWord: t = tag_word(token, sentence_start); break;
    }
    if (token.kind == TokenKind::kWord || token.kind == TokenKind::kNumber) {
      sentence_start = false;
    } else if (token.kind == TokenKind::kPunctuation) {
      sentence_start = token.surface == "." || token.surface == "!" || token.surface == "?" ||
                       token.surface == ":" || sentence_start;
    }
    tags.push_back(t);
  }
  return tags;
}

std::unordered_set<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read word list " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.insert(utf8_lower(line));
  }
  return words;
}

Lexicons Lexicons::load(const std::filesystem::path& dir) {
  Lexicons lex;
  lex.dictionary = load_word_list(dir / "dictionary.txt");
  lex.offensive = load_word_list(dir / "offensive.txt");
  lex.stopwords = load_word_list(dir / "stopwords.txt");
  if (lex.dictionary.empty() || lex.offensive.empty() || lex.stopwords.empty()) {
    throw IoError("empty lexicon in " + dir.string());
  }
  return lex;
}

bool Lexicons::in_dictionary(std::string_view word) const {
  if (word.empty()) return false;
  auto has = [&](std::string_view w) { return !w.empty() && dictionary.count(std::string(w)) > 0; };
  if (has(word) || stopwords.count(std::string(word))) return true;

  std::string w(word);
  if (ends_with(w, "'s")) return has(w.substr(0, w.size() - 2));
  if (const auto apos = w.find('\''); apos != std::string::npos) {
    // Contractions: "don't" -> "do", "we're" -> "we".
    std::string head = w.substr(0, apos);
    if (ends_with(head, "n") && w.substr(apos) == "'t") head.pop_back();
    return has(head) || stopwords.count(head) > 0 || head == "ca" || head == "wo";
  }
  if (ends_with(w, "ies") && has(w.substr(0, w.size() - 3) + "y")) return true;
  if (ends_with(w, "es") && has(w.substr(0, w.size() - 2))) return true;
  if (ends_with(w, "s") && has(w.substr(0, w.size() - 1))) return true;
  if (ends_with(w, "ly") && has(w.substr(0, w.size() - 2))) return true;
  for (std::string_view suffix : {"ed", "ing", "er", "est"}) {
    if (!ends_with(w, suffix)) continue;
    const std::string stem = w.substr(0, w.size() - suffix.size());
    if (has(stem) || has(stem + "e")) return true;
    // Doubled final consonant: "stopped" -> "stop".
    if (stem.size() >= 2 && stem.back() == stem[stem.size() - 2] &&
        has(stem.substr(0, stem.size() - 1))) {
      return true;
    }
    if (suffix != "ing" && ends_with(stem, "i") && has(stem.substr(0, stem.size() - 1) + "y")) {
      return true;
    }
  }
  return false;
}

ArticulationFeatures extract_features(const Tweet& tweet, const Lexicons& lexicons,
                                      const PosTagger& tagger) {
  ArticulationFeatures f;
  f.tweet_length = static_cast<double>(utf8_length(tweet.text));
  const TokenStream tokens = tokenize(tweet.text);
  if (tokens.empty()) return f;

  const std::vector<PosTag> tags = tagger.tag(tokens);
  for (PosTag t : tags) f.pos_tag_ratios[static_cast<std::size_t>(t)] += 1.0;
  for (double& r : f.pos_tag_ratios) r /= static_cast<double>(tags.size());

  std::size_t words = 0, oov = 0, offensive = 0, stop = 0, chars = 0;
  for (const Token& token : tokens) {
    if (token.kind != TokenKind::kWord) continue;
    ++words;
    chars += utf8_length(token.surface);
    if (!lexicons.in_dictionary(token.norm)) ++oov;
    if (lexicons.offensive.count(token.norm)) ++offensive;
    if (lexicons.stopwords.count(token.norm)) ++stop;
  }
  if (words > 0) {
    const double n = static_cast<double>(words);
    f.oov_ratio = static_cast<double>(oov) / n;
    f.offensive_ratio = static_cast<double>(offensive) / n;
    f.stopword_ratio = static_cast<double>(stop) / n;
    f.avg_word_length = static_cast<double>(chars) / n;
  }

  std::vector<char> seq;
  seq.reserve(tags.size() + 2);
  seq.push_back('<');
  for (PosTag t : tags) seq.push_back(pos_tag_symbol(t));
  seq.push_back('>');
  for (std::size_t order = 2; order <= 3; ++order) {
    for (std::size_t i = 0; i + order <= seq.size(); ++i) {
      std::string gram(seq.begin() + static_cast<std::ptrdiff_t>(i),
                       seq.begin() + static_cast<std::ptrdiff_t>(i + order));
      f.pos_ngram_counts[hash_ngram(gram)] += 1.0;
    }
  }
  return f;
}

ArticulationFeatures extract_features(const Tweet& tweet, const Lexicons& lexicons) {
  static const RulePosTagger tagger;
  return extract_features(tweet, lexicons, tagger);
}

logistic::SparseRow to_model_row(const ArticulationFeatures& f) {
  logistic::SparseRow row;
  std::uint32_t idx = 0;
  for (double r : f.pos_tag_ratios) {
    if (r != 0.0) row.emplace_back(idx, r);
    ++idx;
  }
  const double dense[] = {f.oov_ratio, f.offensive_ratio, f.stopword_ratio,
                          f.tweet_length / 140.0, f.avg_word_length / 10.0};
  for (double v : dense) {
    if (v != 0.0) row.emplace_back(idx, v);
    ++idx;
  }
  double total = 0.0;
  for (const auto& [bucket, count] : f.pos_ngram_counts) total += count;
  for (const auto& [bucket, count] : f.pos_ngram_counts) {
    row.emplace_back(idx + bucket, count / total);
  }
  return row;
}

std::uint64_t articulation_schema_hash() {
  std::string schema = "articulation;tags=";
  schema += kTagSymbols;
  schema += ";lexicon=oov,offensive,stopword;length/140;avgword/10;posgram=2,3;buckets=1024";
  return fnv64(schema);
}

std::vector<LabeledTweet> read_labeled(std::istream& in) {
  std::vector<LabeledTweet> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "labeled set line " + std::to_string(lineno);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
    if (!record.is_object() || !record.contains("text") || !record["text"].is_string() ||
        !record.contains("label") || !record["label"].is_number_integer()) {
      throw FormatError(where + ": need string text and integer label");
    }
    const auto label = record["label"].get<long long>();
    if (label != 0 && label != 1) throw FormatError(where + ": label must be 0 or 1");
    LabeledTweet item;
    item.tweet.id = "labeled-" + std::to_string(lineno);
    item.tweet.user_id = "annotator";
    item.tweet.text = record["text"].get<std::string>();
    item.articulate = label == 1;
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<LabeledTweet> read_labeled(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read labeled set " + path.string());
  return read_labeled(in);
}

double ArticulationModel::cv_accuracy() const {
  if (fold_accuracies.empty()) return 0.0;
  return std::accumulate(fold_accuracies.begin(), fold_accuracies.end(), 0.0) /
         static_cast<double>(fold_accuracies.size());
}

ArticulationModel ArticulationModel::zero() {
  ArticulationModel m;
  m.params.assign(kArticulationDimension + 1, 0.0);
  return m;
}

void ArticulationModel::save(std::ostream& out) const {
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(schema_hash));
  out << "stancesum-articulation-model 1\n";
  out << "schema " << hex << "\n";
  out << "dimension " << (params.size() - 1) << "\n";
  out << "training iterations " << iterations << " converged " << (converged ? 1 : 0) << "\n";
  out << "folds " << fold_accuracies.size();
  for (double a : fold_accuracies) out << ' ' << format_double(a);
  out << "\nbias " << format_double(params[0]) << "\n";
  for (std::size_t j = 1; j < params.size(); ++j) out << format_double(params[j]) << "\n";
}

ArticulationModel ArticulationModel::load(std::istream& in) {
  auto fail = [](const std::string& what) -> ArticulationModel {
    throw FormatError("articulation model: " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != "stancesum-articulation-model 1") {
    return fail("missing version header");
  }
  ArticulationModel m;
  std::string key, hex;
  if (!std::getline(in, line)) return fail("missing schema");
  {
    std::istringstream ls(line);
    if (!(ls >> key >> hex) || key != "schema") return fail("bad schema line");
    m.schema_hash = std::stoull(hex, nullptr, 16);
    if (m.schema_hash != articulation_schema_hash()) {
      return fail("feature schema differs from this build");
    }
  }
  std::size_t dim = 0;
  if (!std::getline(in, line)) return fail("missing dimension");
  {
    std::istringstream ls(line);
    if (!(ls >> key >> dim) || key != "dimension" || dim != kArticulationDimension) {
      return fail("bad dimension");
    }
  }
  if (!std::getline(in, line)) return fail("missing training line");
  {
    std::istringstream ls(line);
    std::string k1, k2;
    int conv = 0;
    if (!(ls >> key >> k1 >> m.iterations >> k2 >> conv) || key != "training") {
      return fail("bad training line");
    }
    m.converged = conv != 0;
  }
  if (!std::getline(in, line)) return fail("missing folds");
  {
    std::istringstream ls(line);
    std::size_t count = 0;
    if (!(ls >> key >> count) || key != "folds") return fail("bad folds line");
    std::string tok;
    for (std::size_t i = 0; i < count; ++i) {
      if (!(ls >> tok)) return fail("truncated folds line");
      m.fold_accuracies.push_back(parse_double(tok));
    }
  }
  if (!std::getline(in, line) || line.rfind("bias ", 0) != 0) return fail("missing bias");
  m.params.push_back(parse_double(std::string_view(line).substr(5)));
  for (std::size_t j = 0; j < dim; ++j) {
    if (!std::getline(in, line)) return fail("truncated weights");
    m.params.push_back(parse_double(line));
  }
  return m;
}

double score(const ArticulationModel& model, const ArticulationFeatures& features) {
  return logistic::sigmoid(logistic::linear_score(model.params, to_model_row(features)));
}

ArticulationModel train_articulation(const std::vector<LabeledTweet>& labeled,
                                     const Lexicons& lexicons,
                                     const ArticulationTrainOptions& options) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    (labeled[i].articulate ? pos : neg).push_back(i);
  }
  if (pos.size() < 2 || neg.size() < 2) {
    throw TrainingError("articulation training needs at least two examples of each class");
  }

  logistic::Dataset all;
  all.dimension = kArticulationDimension;
  for (const LabeledTweet& item : labeled) {
    all.rows.push_back(to_model_row(extract_features(item.tweet, lexicons)));
    all.labels.push_back(item.articulate ? 1 : 0);
  }
  logistic::FitOptions fit_options{options.l2, options.gradient_tolerance, options.max_iterations};

  ArticulationModel model;
  if (options.folds >= 2) {
    const auto k = static_cast<std::size_t>(options.folds);
    if (k > std::min(pos.size(), neg.size())) {
      throw TrainingError("more folds than examples in the smaller class");
    }
    // Stratified assignment: shuffle each class, then deal round-robin.
    std::mt19937_64 rng(options.seed);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    std::vector<std::size_t> fold_of(labeled.size());
    for (std::size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = i % k;
    for (std::size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = (pos.size() + i) % k;

    for (std::size_t fold = 0; fold < k; ++fold) {
      logistic::Dataset train;
      train.dimension = all.dimension;
      std::vector<std::size_t> held;
      for (std::size_t i = 0; i < labeled.size(); ++i) {
        if (fold_of[i] == fold) {
          held.push_back(i);
        } else {
          train.rows.push_back(all.rows[i]);
          train.labels.push_back(all.labels[i]);
        }
      }
      const auto fitted = logistic::fit(train, fit_options);
      std::size_t correct = 0;
      for (std::size_t i : held) {
        const bool predicted = logistic::linear_score(fitted.params, all.rows[i]) >= 0.0;
        if (predicted == (all.labels[i] == 1)) ++correct;
      }
      model.fold_accuracies.push_back(static_cast<double>(correct) /
                                      static_cast<double>(held.size()));
    }
  }

  const auto fitted = logistic::fit(all, fit_options);
  model.params = fitted.params;
  model.iterations = fitted.iterations;
  model.converged = fitted.converged;
  return model;
}

ArticulationScorer::ArticulationScorer(ArticulationModel model,
                                       std::shared_ptr<const Lexicons> lexicons,
                                       std::shared_ptr<const PosTagger> tagger)
    : model_(std::move(model)), lexicons_(std::move(lexicons)), tagger_(std::move(tagger)) {
  if (model_.params.size() != kArticulationDimension + 1) {
    throw FormatError("articulation model has the wrong dimension");
  }
}

double ArticulationScorer::operator()(const Tweet& tweet) const {
  return score(model_, extract_features(tweet, *lexicons_, *tagger_));
}

}  // namespace stancesum
