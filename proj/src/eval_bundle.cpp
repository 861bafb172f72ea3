#include "stancesum/eval_bundle.hpp"

#include <random>

#include <json.hpp>

#include "stancesum/error.hpp"

namespace stancesum {

namespace {

nlohmann::ordered_json blinded(const Summary& s) {
  nlohmann::ordered_json side = nlohmann::ordered_json::array();
  for (const ScoredTweet* t : s.all()) side.push_back({{"id", t->tweet.id}, {"text", t->tweet.text}});
  return side;
}

}  // namespace

EvalBundle make_eval_bundle(const Summary& first, const Summary& second, std::uint64_t seed) {
  if (first.topic != second.topic) {
    throw MismatchError("summaries cover different topics: '" + first.topic + "' vs '" +
                        second.topic + "'");
  }
  std::mt19937_64 rng(seed);
  EvalBundle out;
  out.swapped = (rng() >> 63) != 0;
  const Summary& x = out.swapped ? second : first;
  const Summary& y = out.swapped ? first : second;

  nlohmann::ordered_json bundle;
  bundle["topic"] = first.topic;
  bundle["question"] = "Which summary better explains the controversy about this topic?";
  bundle["choices"] = {"X", "Y"};
  bundle["X"] = blinded(x);
  bundle["Y"] = blinded(y);
  out.bundle_json = bundle.dump(2) + "\n";

  nlohmann::ordered_json mapping;
  mapping["topic"] = first.topic;
  mapping["seed"] = seed;
  mapping["X"] = x.method;
  mapping["Y"] = y.method;
  out.mapping_json = mapping.dump(2) + "\n";
  return out;
}

}  // namespace stancesum
