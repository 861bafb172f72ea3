#include "stancesum/synthgen.hpp"

#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>

#include <json.hpp>

#include "stancesum/error.hpp"

namespace stancesum {

namespace {

// Explicit sampling helpers keep generated corpora identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return unit() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[index(v.size())]; }

 private:
  std::mt19937_64 engine_;
};

const std::vector<std::string> kTagsA = {"ProLife", "VoteProlife", "DefundPP", "SaveTheBabies",
                                         "UnbornLivesMatter"};
const std::vector<std::string> kTagsB = {"ProChoice", "MyBodyMyChoice", "StandWithPP",
                                         "ReproRights", "TrustWomen"};
const std::vector<std::string> kNoiseTags = {"news",  "politics", "usa",      "tbt",   "follow",
                                             "breaking", "trending", "love", "today", "mondaymotivation"};

const std::vector<std::string> kWordsA = {"life",     "unborn",   "baby",      "heartbeat", "adoption",
                                          "pregnancy", "mother",  "child",     "conception", "sanctity"};
const std::vector<std::string> kWordsB = {"choice", "rights",   "healthcare", "women",   "freedom",
                                          "clinic", "access",   "autonomy",   "doctor",  "privacy"};
const std::vector<std::string> kShared = {"abortion", "law",    "court", "vote",  "debate",
                                          "bill",     "state",  "policy", "ruling", "congress"};
const std::vector<std::string> kOffTopic = {"coffee", "weekend", "game",  "music",   "weather",
                                            "movie",  "pizza",   "traffic", "concert", "vacation"};

const std::vector<std::string> kArticulate = {
    "We must protect {X} and respect {Y} in every {S}.",
    "The new {S} ignores the importance of {X} for every family.",
    "Please read this thoughtful article about {X} and {Y}.",
    "I believe that {X} matters more than any political {S}.",
    "Our community should discuss {X} and {Y} with honesty and care.",
    "History will remember how we defended {X} during this {S}.",
    "Everyone deserves a clear conversation about {X} before the {S}.",
    "Thank you to the volunteers who support {X} and {Y} today.",
};
const std::vector<std::string> kNoisy = {
    "lol {X} is sooo dumb smh",
    "omg wtf {X} {Y} !!!",
    "ur {S} sux go and f***ing get one",
    "idk y ppl hate {X} lmao",
    "stfu abt {X} ffs",
    "{X} {X} {X} smh 2day",
    "dis {S} iz crap tbh",
    "nah bruh {Y} lolol",
};

std::string fill(const std::string& pattern, const std::string& x, const std::string& y,
                 const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '{' && i + 2 < pattern.size() && pattern[i + 2] == '}') {
      const char slot = pattern[i + 1];
      out += slot == 'X' ? x : slot == 'Y' ? y : s;
      i += 2;
    } else {
      out += pattern[i];
    }
  }
  return out;
}

// One original post. Side words only appear when the tweet is topical.
std::string compose(Rng& rng, const SynthSpec& spec, Label side, bool articulate) {
  const auto& side_words = side == Label::kA ? kWordsA : kWordsB;
  const bool topical = rng.chance(spec.topical_word_rate);
  const std::string x = rng.pick(topical ? side_words : kOffTopic);
  const std::string y = rng.pick(topical ? side_words : kOffTopic);
  const std::string s = rng.pick(topical ? kShared : kOffTopic);
  std::string text = fill(rng.pick(articulate ? kArticulate : kNoisy), x, y, s);
  if (rng.chance(spec.hashtag_use_rate)) {
    const auto& tags = side == Label::kA ? kTagsA : kTagsB;
    text += " #" + tags[rng.index(spec.stance_hashtag_count)];
  }
  if (rng.chance(spec.noise_hashtag_rate)) text += " #" + rng.pick(kNoiseTags);
  return text;
}

std::string lower(const std::string& s) { return utf8_lower(s); }

}  // namespace

void SynthSpec::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
  };
  prob(p_in, "p_in");
  prob(p_out, "p_out");
  prob(hashtag_use_rate, "hashtag_use_rate");
  prob(noise_hashtag_rate, "noise_hashtag_rate");
  prob(articulate_fraction, "articulate_fraction");
  prob(topical_word_rate, "topical_word_rate");
  if (!(p_in > p_out)) throw DomainError("p_in must exceed p_out for the communities to be recoverable");
  if (users_per_side == 0 || tweets_per_user == 0) throw DomainError("empty synthetic spec");
  if (stance_hashtag_count == 0 || stance_hashtag_count > kTagsA.size()) {
    throw DomainError("stance_hashtag_count must be between 1 and " + std::to_string(kTagsA.size()));
  }
}

std::optional<Label> GroundTruth::stance_of(const Tweet& tweet) const {
  return assignment.label_of(tweet.retweeted_user_id.value_or(tweet.user_id));
}

SynthOutput generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t n_users = 2 * spec.users_per_side;

  std::vector<std::string> users(n_users);
  for (std::size_t i = 0; i < n_users; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "u%04zu", i);
    users[i] = buf;
  }
  std::vector<std::size_t> order(n_users);
  for (std::size_t i = 0; i < n_users; ++i) order[i] = i;
  for (std::size_t i = n_users - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  std::vector<Label> side(n_users);
  GroundTruth truth;
  for (std::size_t r = 0; r < n_users; ++r) {
    side[order[r]] = r < spec.users_per_side ? Label::kA : Label::kB;
    truth.assignment.labels[users[order[r]]] = side[order[r]];
  }
  for (std::size_t i = 0; i < spec.stance_hashtag_count; ++i) {
    truth.hashtags_a.insert(lower(kTagsA[i]));
    truth.hashtags_b.insert(lower(kTagsB[i]));
  }
  truth.noise_hashtags.insert(kNoiseTags.begin(), kNoiseTags.end());

  char prefix[32];
  std::snprintf(prefix, sizeof prefix, "s%llx", static_cast<unsigned long long>(spec.seed));
  constexpr std::int64_t kStart = 1'500'000'000;
  constexpr std::int64_t kDay = 86'400;

  std::vector<Tweet> tweets;
  std::vector<std::vector<std::size_t>> posts_of(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    for (std::size_t j = 0; j < spec.tweets_per_user; ++j) {
      Tweet t;
      char id[64];
      std::snprintf(id, sizeof id, "%s-t%06zu", prefix, tweets.size());
      t.id = id;
      t.user_id = users[u];
      const bool articulate = rng.chance(spec.articulate_fraction);
      t.text = compose(rng, spec, side[u], articulate);
      t.timestamp = kStart + static_cast<std::int64_t>(rng.index(3 * kDay));
      posts_of[u].push_back(tweets.size());
      tweets.push_back(std::move(t));
    }
  }

  std::size_t retweets = 0;
  std::vector<Tweet> rts;
  for (std::size_t u = 0; u < n_users; ++u) {
    for (std::size_t v = u + 1; v < n_users; ++v) {
      if (!rng.chance(side[u] == side[v] ? spec.p_in : spec.p_out)) continue;
      const bool u_retweets = rng.chance(0.5);
      const std::size_t retweeter = u_retweets ? u : v;
      const std::size_t author = u_retweets ? v : u;
      Tweet& original = tweets[posts_of[author][rng.index(posts_of[author].size())]];
      Tweet rt;
      char id[64];
      std::snprintf(id, sizeof id, "%s-r%06zu", prefix, retweets++);
      rt.id = id;
      rt.user_id = users[retweeter];
      rt.text = "RT @" + users[author] + ": " + original.text;
      rt.retweeted_user_id = users[author];
      rt.timestamp = original.timestamp + 60 + static_cast<std::int64_t>(rng.index(kDay));
      ++original.retweet_count;
      rts.push_back(std::move(rt));
    }
  }
  for (Tweet& rt : rts) tweets.push_back(std::move(rt));
  return {Corpus("abortion", std::move(tweets)), std::move(truth)};
}

void write_manifest(std::ostream& out, const SynthSpec& spec, const GroundTruth& truth) {
  nlohmann::ordered_json doc;
  doc["spec"] = {{"users_per_side", spec.users_per_side},
                 {"p_in", spec.p_in},
                 {"p_out", spec.p_out},
                 {"tweets_per_user", spec.tweets_per_user},
                 {"stance_hashtag_count", spec.stance_hashtag_count},
                 {"hashtag_use_rate", spec.hashtag_use_rate},
                 {"noise_hashtag_rate", spec.noise_hashtag_rate},
                 {"articulate_fraction", spec.articulate_fraction},
                 {"topical_word_rate", spec.topical_word_rate},
                 {"seed", spec.seed}};
  doc["hashtags"] = {{"A", truth.hashtags_a}, {"B", truth.hashtags_b}};
  doc["noise_hashtags"] = truth.noise_hashtags;
  out << doc.dump(2) << "\n";
}

GroundTruth read_ground_truth(std::istream& assignment, std::istream& manifest) {
  GroundTruth truth;
  truth.assignment = read_assignment(assignment);
  try {
    const auto doc = nlohmann::json::parse(manifest);
    truth.hashtags_a = doc.at("hashtags").at("A").get<std::set<std::string>>();
    truth.hashtags_b = doc.at("hashtags").at("B").get<std::set<std::string>>();
    truth.noise_hashtags = doc.at("noise_hashtags").get<std::set<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("planted manifest: ") + e.what());
  }
  return truth;
}

std::vector<LabeledTweet> generate_labeled_set(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  SynthSpec spec;
  std::vector<LabeledTweet> out;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    LabeledTweet item;
    item.articulate = i % 2 == 0;
    item.tweet.id = "labeled-" + std::to_string(i + 1);
    item.tweet.user_id = "annotator";
    item.tweet.text = compose(rng, spec, rng.chance(0.5) ? Label::kA : Label::kB, item.articulate);
    out.push_back(std::move(item));
  }
  return out;
}

void write_labeled(std::ostream& out, const std::vector<LabeledTweet>& labeled) {
  for (const LabeledTweet& item : labeled) {
    nlohmann::ordered_json rec;
    rec["text"] = item.tweet.text;
    rec["label"] = item.articulate ? 1 : 0;
    out << rec.dump() << "\n";
  }
}

Diagnostics diagnose(const Corpus& corpus, const GroundTruth& truth, const PipelineOutputs& outputs) {
  Diagnostics d;
  auto mapped = [](Label l, bool swap) { return swap ? opposite(l) : l; };
  std::optional<bool> swap;

  if (outputs.assignment) {
    std::size_t direct = 0, swapped = 0;
    for (const auto& [user, label] : outputs.assignment->labels) {
      if (!corpus.user_index().count(user)) {
        throw MismatchError("assignment user '" + user + "' does not occur in the corpus");
      }
      const auto planted = truth.assignment.label_of(user);
      if (!planted) continue;
      (label == *planted ? direct : swapped) += 1;
    }
    const double n = static_cast<double>(truth.assignment.labels.size());
    swap = swapped > direct;
    d.partition_accuracy = n > 0 ? static_cast<double>(std::max(direct, swapped)) / n : 0.0;
  }

  if (outputs.table) {
    for (const HashtagStats& row : outputs.table->ranked()) {
      if (!corpus.hashtag_index().count(row.hashtag)) {
        throw MismatchError("hashtag '" + row.hashtag + "' does not occur in the corpus");
      }
    }
    const double planted = static_cast<double>(truth.hashtags_a.size() + truth.hashtags_b.size());
    auto recovery = [&](bool s) {
      std::size_t hit = 0;
      for (Label side : {Label::kA, Label::kB}) {
        for (const std::string& h : truth.hashtags(side)) {
          if (outputs.table->hashtags(mapped(side, s)).count(h)) ++hit;
        }
      }
      return planted > 0 ? static_cast<double>(hit) / planted : 0.0;
    };
    d.hashtag_recovery = swap ? recovery(*swap) : std::max(recovery(false), recovery(true));
  }

  if (outputs.summary) {
    d.gamma_a = outputs.summary->gamma_a.size();
    d.gamma_b = outputs.summary->gamma_b.size();
    std::vector<std::pair<Label, Label>> pairs;  // (summary side, planted side)
    for (const ScoredTweet* s : outputs.summary->all()) {
      const Tweet* t = corpus.find(s->tweet.id);
      if (!t) throw MismatchError("summary tweet '" + s->tweet.id + "' does not occur in the corpus");
      if (!s->stance) continue;
      const auto planted = truth.stance_of(*t);
      // Content without a planted side can never match.
      pairs.emplace_back(*s->stance, planted ? *planted : opposite(*s->stance));
    }
    if (!pairs.empty()) {
      auto purity = [&](bool s) {
        std::size_t hit = 0;
        for (const auto& [got, want] : pairs) hit += mapped(want, s) == got ? 1 : 0;
        return static_cast<double>(hit) / static_cast<double>(pairs.size());
      };
      d.summary_purity = swap ? purity(*swap) : std::max(purity(false), purity(true));
    }
  }
  d.labels_swapped = swap.value_or(false);
  return d;
}

std::string diagnostics_json(const Diagnostics& d) {
  nlohmann::ordered_json doc;
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  doc["partition_accuracy"] = opt(d.partition_accuracy);
  doc["hashtag_recovery"] = opt(d.hashtag_recovery);
  doc["summary_purity"] = opt(d.summary_purity);
  doc["stance_balance"] = {{"A", d.gamma_a}, {"B", d.gamma_b}};
  doc["labels_swapped"] = d.labels_swapped;
  return doc.dump(2) + "\n";
}

}  // namespace stancesum
