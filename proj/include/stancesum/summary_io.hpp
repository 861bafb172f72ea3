#pragma once

#include <iosfwd>

#include "stancesum/summarizer.hpp"

namespace stancesum {

// JSON document: topic, method, k, community_only, stance_balanced,
// shortfall {A, B} and a single "tweets" list in presentation order where
// each entry carries its stance ("A", "B" or "" for baselines), rank,
// tweet fields, component scores and anchor hashtag.
void write_summary(std::ostream& out, const Summary& summary);
Summary read_summary(std::istream& in);

}  // namespace stancesum
