#include "stancesum/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "stancesum/error.hpp"

namespace stancesum {

bool detect_retweet(const Tweet& tweet) {
  if (tweet.retweeted_user_id.has_value()) return true;
  const TokenStream tokens = tokenize(tweet.text);
  return !tokens.empty() && tokens.front().kind == TokenKind::kRetweetMarker;
}

std::set<std::string> hashtags_of_text(std::string_view text) {
  std::set<std::string> tags;
  for (const Token& t : tokenize(text)) {
    if (t.kind == TokenKind::kHashtag) tags.insert(t.norm.substr(1));
  }
  return tags;
}

std::set<std::string> hashtags_of(const Tweet& tweet) { return hashtags_of_text(tweet.text); }

std::string dedup_key(std::string_view text) {
  std::string key;
  bool leading = true;
  for (const Token& t : tokenize(text)) {
    if (t.kind == TokenKind::kRetweetMarker || t.kind == TokenKind::kMention) continue;
    if (leading && t.kind == TokenKind::kPunctuation) continue;
    leading = false;
    if (!key.empty()) key.push_back(' ');
    key += utf8_lower(t.norm);
  }
  return key;
}

Corpus::Corpus(std::string topic, std::vector<Tweet> tweets)
    : topic_(std::move(topic)), tweets_(std::move(tweets)) {
  by_id_.reserve(tweets_.size());
  for (std::size_t i = 0; i < tweets_.size(); ++i) {
    Tweet& t = tweets_[i];
    if (t.id.empty()) throw DomainError("tweet with empty id");
    if (t.retweet_count < 0) throw DomainError("negative retweet_count for tweet " + t.id);
    if (utf8_length(t.text) > kMaxTweetLength) throw DomainError("text too long for tweet " + t.id);
    if (!by_id_.emplace(t.id, i).second) throw DomainError("duplicate tweet id " + t.id);
    t.is_retweet = detect_retweet(t);
    user_index_[t.user_id].insert(t.id);
    for (const std::string& h : hashtags_of(t)) hashtag_index_[h].insert(t.id);
  }
}

const Tweet* Corpus::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &tweets_[it->second];
}

namespace {

// Returns an error message, or empty when the record is valid.
std::string parse_record(const std::string& line, Tweet& out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    return "not a JSON object";
  }
  if (!j.is_object()) return "not a JSON object";

  auto get_string = [&](const char* key, std::string& dst) -> bool {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    dst = it->get<std::string>();
    return true;
  };
  if (!get_string("id", out.id) || out.id.empty()) return "missing or invalid id";
  if (!get_string("user_id", out.user_id) || out.user_id.empty()) {
    return "missing or invalid user_id";
  }
  if (!get_string("text", out.text)) return "missing or invalid text";

  const auto ts = j.find("timestamp");
  if (ts == j.end() || !ts->is_number_integer()) return "missing or invalid timestamp";
  out.timestamp = ts->get<std::int64_t>();

  out.retweeted_user_id.reset();
  if (const auto rt = j.find("retweeted_user_id"); rt != j.end() && !rt->is_null()) {
    if (!rt->is_string()) return "invalid retweeted_user_id";
    std::string v = rt->get<std::string>();
    if (!v.empty()) out.retweeted_user_id = std::move(v);
  }

  out.retweet_count = 0;
  if (const auto rc = j.find("retweet_count"); rc != j.end()) {
    if (!rc->is_number_integer()) return "invalid retweet_count";
    out.retweet_count = rc->get<std::int64_t>();
    if (out.retweet_count < 0) return "negative retweet_count";
  }
  if (utf8_length(out.text) > kMaxTweetLength) return "text longer than 1000 characters";
  return {};
}

}  // namespace

IngestResult ingest(std::istream& in, std::string topic) {
  std::vector<Tweet> tweets;
  std::set<std::string> seen;
  std::size_t skipped = 0;
  std::vector<std::string> problems;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Tweet t;
    std::string err = parse_record(line, t);
    if (err.empty() && !seen.insert(t.id).second) err = "duplicate id " + t.id;
    if (!err.empty()) {
      ++skipped;
      problems.push_back("line " + std::to_string(line_no) + ": " + err);
      continue;
    }
    tweets.push_back(std::move(t));
  }
  if (in.bad()) throw IoError("read failure");
  if (tweets.empty()) throw EmptyCorpusError("no valid records");
  return IngestResult{Corpus(std::move(topic), std::move(tweets)), skipped, std::move(problems)};
}

IngestResult ingest(const std::filesystem::path& path, std::string topic) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ingest(in, std::move(topic));
}

std::string to_record_line(const Tweet& t) {
  nlohmann::ordered_json j;
  j["id"] = t.id;
  j["user_id"] = t.user_id;
  j["text"] = t.text;
  j["timestamp"] = t.timestamp;
  if (t.retweeted_user_id) {
    j["retweeted_user_id"] = *t.retweeted_user_id;
  } else {
    j["retweeted_user_id"] = nullptr;
  }
  j["retweet_count"] = t.retweet_count;
  return j.dump();
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const Tweet& t : corpus.tweets()) out << to_record_line(t) << '\n';
}

std::vector<Tweet> unique_candidates(const Corpus& corpus) {
  struct Group {
    std::size_t representative;
    std::int64_t max_count;
  };
  std::unordered_map<std::string, Group> groups;
  std::vector<std::string> keys;
  keys.reserve(corpus.size());
  const auto& tweets = corpus.tweets();
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const Tweet& t = tweets[i];
    std::string key = dedup_key(t.text);
    auto [it, inserted] = groups.try_emplace(key, Group{i, t.retweet_count});
    if (!inserted) {
      Group& g = it->second;
      const Tweet& rep = tweets[g.representative];
      if (std::tie(t.timestamp, t.id) < std::tie(rep.timestamp, rep.id)) g.representative = i;
      g.max_count = std::max(g.max_count, t.retweet_count);
    }
    keys.push_back(std::move(key));
  }
  std::vector<Tweet> out;
  out.reserve(groups.size());
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const Group& g = groups.at(keys[i]);
    if (g.representative != i) continue;
    Tweet t = tweets[i];
    t.retweet_count = g.max_count;
    out.push_back(std::move(t));
  }
  return out;
}

Corpus select_by_terms(const Corpus& corpus, const std::vector<std::string>& terms) {
  if (terms.empty()) return corpus;
  std::set<std::string> wanted;
  for (const auto& term : terms) {
    std::string t = utf8_lower(term);
    if (!t.empty() && t.front() == '#') t.erase(0, 1);
    if (!t.empty()) wanted.insert(t);
  }
  std::vector<Tweet> kept;
  for (const Tweet& tweet : corpus.tweets()) {
    for (const Token& tok : tokenize(tweet.text)) {
      std::string_view n = tok.norm;
      if (tok.kind == TokenKind::kHashtag) n.remove_prefix(1);
      else if (tok.kind != TokenKind::kWord) continue;
      if (wanted.count(std::string(n))) {
        kept.push_back(tweet);
        break;
      }
    }
  }
  return Corpus(corpus.topic(), std::move(kept));
}

}  // namespace stancesum
