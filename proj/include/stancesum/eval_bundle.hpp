#pragma once

#include <cstdint>
#include <string>

#include "stancesum/summarizer.hpp"

namespace stancesum {

struct EvalBundle {
  std::string bundle_json;   // what annotators see: summaries as X and Y, no method names
  std::string mapping_json;  // X/Y -> method, kept apart from the bundle
  bool swapped = false;      // true when the second summary is shown as X
};

// Pairwise preference item for two summaries of the same topic. The
// presentation order is drawn from the seed. Throws MismatchError when
// the topics differ.
EvalBundle make_eval_bundle(const Summary& first, const Summary& second, std::uint64_t seed);

}  // namespace stancesum
