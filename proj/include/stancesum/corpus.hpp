#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "stancesum/text.hpp"

namespace stancesum {

inline constexpr std::size_t kMaxTweetLength = 1000;  // code points

struct Tweet {
  std::string id;
  std::string user_id;
  std::string text;
  std::int64_t timestamp = 0;  // UTC seconds
  std::optional<std::string> retweeted_user_id;
  std::int64_t retweet_count = 0;
  bool is_retweet = false;

  bool operator==(const Tweet&) const = default;
};

// True iff retweeted_user_id is set or the text opens with a retweet marker.
bool detect_retweet(const Tweet& tweet);

// Lowercase, '#'-stripped, deduplicated hashtags of the tweet text.
std::set<std::string> hashtags_of(const Tweet& tweet);
std::set<std::string> hashtags_of_text(std::string_view text);

// Text used to group duplicates: lowercase token norms with the retweet
// marker, mentions and any leading punctuation removed, single-spaced.
std::string dedup_key(std::string_view text);

// Immutable, indexed tweet collection for one topic.
class Corpus {
 public:
  // Throws DomainError on duplicate ids, negative retweet counts
  // or over-long text. is_retweet is recomputed for every tweet.
  Corpus(std::string topic, std::vector<Tweet> tweets);

  const std::string& topic() const { return topic_; }
  const std::vector<Tweet>& tweets() const { return tweets_; }
  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }

  const Tweet* find(const std::string& id) const;

  // hashtag (lowercase, no '#') -> ids of tweets carrying it.
  const std::map<std::string, std::set<std::string>>& hashtag_index() const {
    return hashtag_index_;
  }
  const std::map<std::string, std::set<std::string>>& user_index() const {
    return user_index_;
  }

 private:
  std::string topic_;
  std::vector<Tweet> tweets_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::map<std::string, std::set<std::string>> hashtag_index_;
  std::map<std::string, std::set<std::string>> user_index_;
};

struct IngestResult {
  Corpus corpus;
  std::size_t skipped = 0;
  // One human-readable line per skipped record ("line 7: missing text").
  std::vector<std::string> problems;
};

// Reads line-delimited JSON records. Malformed lines and duplicate ids are
// skipped and counted. Throws IoError if unreadable and EmptyCorpusError
// when no record survives.
IngestResult ingest(const std::filesystem::path& path, std::string topic);
IngestResult ingest(std::istream& in, std::string topic);

// Writes tweets in the ingest record format, one per line, in corpus order.
void write_corpus(std::ostream& out, const Corpus& corpus);
std::string to_record_line(const Tweet& tweet);

// One representative per dedup_key class: earliest timestamp, then the
// smallest id. Its retweet_count becomes the class maximum. Output keeps
// the corpus order of the representatives.
std::vector<Tweet> unique_candidates(const Corpus& corpus);

// Tweets whose text contains any of the given terms (case-insensitive token
// match; "#x" and "x" both match the term "x"). Empty terms keep everything.
Corpus select_by_terms(const Corpus& corpus, const std::vector<std::string>& terms);

}  // namespace stancesum
