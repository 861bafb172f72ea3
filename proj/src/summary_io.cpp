#include "stancesum/summary_io.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "stancesum/error.hpp"

namespace stancesum {

using nlohmann::ordered_json;

namespace {

ordered_json entry_json(const ScoredTweet& s, std::size_t rank, bool with_scores) {
  ordered_json e;
  e["stance"] = s.stance ? std::string(label_name(*s.stance)) : std::string();
  e["rank"] = rank;
  e["id"] = s.tweet.id;
  e["user_id"] = s.tweet.user_id;
  e["text"] = s.tweet.text;
  e["timestamp"] = s.tweet.timestamp;
  e["retweet_count"] = s.tweet.retweet_count;
  if (with_scores) {
    e["scores"] = {{"raw_stance", s.raw_stance},
                   {"raw_articulation", s.raw_articulation},
                   {"raw_relevance", s.raw_relevance},
                   {"stance", s.stance_norm},
                   {"articulation", s.articulation},
                   {"relevance", s.relevance},
                   {"aggregate", s.aggregate}};
  }
  e["anchor_hashtag"] = s.anchor_hashtag;
  return e;
}

template <typename T>
T field(const ordered_json& obj, const char* name) {
  if (!obj.contains(name)) throw FormatError(std::string("summary: missing field ") + name);
  try {
    return obj.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("summary: bad field ") + name);
  }
}

}  // namespace

void write_summary(std::ostream& out, const Summary& summary) {
  ordered_json doc;
  doc["topic"] = summary.topic;
  doc["method"] = summary.method;
  doc["k"] = summary.k;
  doc["community_only"] = summary.community_only;
  doc["stance_balanced"] = summary.stance_balanced;
  doc["shortfall"] = {{"A", summary.shortfall_a}, {"B", summary.shortfall_b}};
  ordered_json tweets = ordered_json::array();
  for (const auto* list : {&summary.gamma_a, &summary.gamma_b, &summary.unlabeled}) {
    std::size_t rank = 1;
    for (const ScoredTweet& s : *list) tweets.push_back(entry_json(s, rank++, summary.stance_balanced));
  }
  doc["tweets"] = std::move(tweets);
  out << doc.dump(2) << "\n";
}

Summary read_summary(std::istream& in) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("summary: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("summary: document is not an object");
  Summary s;
  s.topic = field<std::string>(doc, "topic");
  s.method = field<std::string>(doc, "method");
  s.k = field<std::size_t>(doc, "k");
  s.community_only = field<bool>(doc, "community_only");
  s.stance_balanced = field<bool>(doc, "stance_balanced");
  const ordered_json shortfall = field<ordered_json>(doc, "shortfall");
  s.shortfall_a = field<std::size_t>(shortfall, "A");
  s.shortfall_b = field<std::size_t>(shortfall, "B");
  const ordered_json tweets = field<ordered_json>(doc, "tweets");
  if (!tweets.is_array()) throw FormatError("summary: tweets is not a list");
  for (const ordered_json& e : tweets) {
    ScoredTweet st;
    st.tweet.id = field<std::string>(e, "id");
    st.tweet.user_id = field<std::string>(e, "user_id");
    st.tweet.text = field<std::string>(e, "text");
    st.tweet.timestamp = field<std::int64_t>(e, "timestamp");
    st.tweet.retweet_count = field<std::int64_t>(e, "retweet_count");
    st.tweet.is_retweet = detect_retweet(st.tweet);
    st.anchor_hashtag = field<std::string>(e, "anchor_hashtag");
    const std::string stance = field<std::string>(e, "stance");
    if (!stance.empty()) st.stance = parse_label(stance);
    if (e.contains("scores")) {
      const ordered_json sc = e["scores"];
      st.raw_stance = field<double>(sc, "raw_stance");
      st.raw_articulation = field<double>(sc, "raw_articulation");
      st.raw_relevance = field<double>(sc, "raw_relevance");
      st.stance_norm = field<double>(sc, "stance");
      st.articulation = field<double>(sc, "articulation");
      st.relevance = field<double>(sc, "relevance");
      st.aggregate = field<double>(sc, "aggregate");
    }
    if (!st.stance) {
      s.unlabeled.push_back(std::move(st));
    } else if (*st.stance == Label::kA) {
      s.gamma_a.push_back(std::move(st));
    } else {
      s.gamma_b.push_back(std::move(st));
    }
  }
  return s;
}

}  // namespace stancesum
