#pragma once

#include <functional>
#include <span>

#include "dynforest/forest.hpp"

namespace dynforest {

struct Update {
  int32_t node;
  int32_t letter;

  bool operator==(const Update&) const = default;
};

// Update scripts: one "relabel <node-id> <letter>" per line, # comments.
std::vector<Update> parse_updates(std::string_view text,
                                  const Alphabet& alphabet);
std::string write_updates(std::span<const Update> updates,
                          const Alphabet& alphabet);

// Deterministic generators (same seed, same output on every platform).
// Kinds: random (random recursive attachment), chain, star, binary, comb.
Forest random_forest(std::string_view kind, int32_t n, uint64_t seed,
                     const Alphabet& alphabet);
std::vector<Update> random_updates(const Forest& f, int32_t count,
                                   uint64_t seed);

// Visits every forest over the alphabet with at most max_nodes nodes.
// Returns the number of forests visited.
uint64_t for_each_forest(const Alphabet& alphabet, int32_t max_nodes,
                         const std::function<void(const Forest&)>& fn);

}  // namespace dynforest
