#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "stancesum/corpus.hpp"
#include "stancesum/logistic.hpp"

namespace stancesum {

// Twitter part-of-speech tagset (25 coarse tags).
enum class PosTag : std::uint8_t {
  kCommonNoun,           // N
  kPronoun,              // O
  kProperNoun,           // ^
  kNominalPossessive,    // S
  kProperPossessive,     // Z
  kVerb,                 // V
  kNominalVerbal,        // L  (i'm, they're)
  kProperVerbal,         // M
  kAdjective,            // A
  kAdverb,               // R
  kInterjection,         // !
  kDeterminer,           // D
  kPreposition,          // P
  kConjunction,          // &
  kParticle,             // T
  kExistential,          // X
  kExistentialVerbal,    // Y  (there's)
  kHashtag,              // #
  kMention,              // @
  kDiscourse,            // ~  (RT marker)
  kUrl,                  // U
  kEmoticon,             // E
  kNumeral,              // $
  kPunctuation,          // ,
  kOther,                // G  (abbreviations, garbage)
};
inline constexpr std::size_t kPosTagCount = 25;
inline constexpr std::size_t kPosNgramBuckets = 1024;

char pos_tag_symbol(PosTag tag);

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<PosTag> tag(const TokenStream& tokens) const = 0;
};

// Token kinds decide non-word tags; closed-class words come from small
// lexicons; the rest fall back on capitalization and suffix rules.
class RulePosTagger final : public PosTagger {
 public:
  std::vector<PosTag> tag(const TokenStream& tokens) const override;
};

// Lowercase word lists, one entry per line; blank lines and lines starting
// with "#" are ignored.
std::unordered_set<std::string> load_word_list(const std::filesystem::path& path);

struct Lexicons {
  std::unordered_set<std::string> dictionary;
  std::unordered_set<std::string> offensive;
  std::unordered_set<std::string> stopwords;

  // Reads dictionary.txt, offensive.txt and stopwords.txt from dir.
  static Lexicons load(const std::filesystem::path& dir);

  // Exact match, or match after stripping a possessive, a contraction tail
  // or a regular inflection (-s, -es, -ies, -ed, -ing, -ly, -er, -est).
  bool in_dictionary(std::string_view lowercase_word) const;
};

struct ArticulationFeatures {
  std::array<double, kPosTagCount> pos_tag_ratios{};  // over all tokens
  double oov_ratio = 0.0;                             // over word tokens
  double offensive_ratio = 0.0;
  double stopword_ratio = 0.0;
  std::map<std::uint32_t, double> pos_ngram_counts;  // hashed tag bi/trigrams
  double tweet_length = 0.0;                         // code points
  double avg_word_length = 0.0;
};

ArticulationFeatures extract_features(const Tweet& tweet, const Lexicons& lexicons,
                                      const PosTagger& tagger);
ArticulationFeatures extract_features(const Tweet& tweet, const Lexicons& lexicons);

// Fixed-layout model input: tag ratios, the three lexicon ratios, scaled
// length features, then n-gram frequencies.
inline constexpr std::size_t kArticulationDimension = kPosTagCount + 5 + kPosNgramBuckets;
logistic::SparseRow to_model_row(const ArticulationFeatures& features);
std::uint64_t articulation_schema_hash();

struct LabeledTweet {
  Tweet tweet;
  bool articulate = false;
};

// Line-delimited {"text": ..., "label": 1|0}; malformed lines throw FormatError.
std::vector<LabeledTweet> read_labeled(const std::filesystem::path& path);
std::vector<LabeledTweet> read_labeled(std::istream& in);

struct ArticulationModel {
  std::vector<double> params;  // bias first, kArticulationDimension weights
  std::vector<double> fold_accuracies;
  std::uint64_t schema_hash = articulation_schema_hash();
  int iterations = 0;
  bool converged = false;

  double cv_accuracy() const;
  static ArticulationModel zero();

  void save(std::ostream& out) const;
  static ArticulationModel load(std::istream& in);
};

struct ArticulationTrainOptions {
  double l2 = 1.0;
  int folds = 5;  // < 2 disables cross-validation
  std::uint64_t seed = 0;
  double gradient_tolerance = 1e-6;
  int max_iterations = 5000;
};

// Throws TrainingError unless both classes have at least two examples.
ArticulationModel train_articulation(const std::vector<LabeledTweet>& labeled,
                                     const Lexicons& lexicons,
                                     const ArticulationTrainOptions& options = {});

double score(const ArticulationModel& model, const ArticulationFeatures& features);

// P_A(tweet) with a bound model, lexicons and tagger.
class ArticulationScorer {
 public:
  ArticulationScorer(ArticulationModel model, std::shared_ptr<const Lexicons> lexicons,
                     std::shared_ptr<const PosTagger> tagger = std::make_shared<RulePosTagger>());
  double operator()(const Tweet& tweet) const;
  const ArticulationModel& model() const { return model_; }

 private:
  ArticulationModel model_;
  std::shared_ptr<const Lexicons> lexicons_;
  std::shared_ptr<const PosTagger> tagger_;
};

}  // namespace stancesum
