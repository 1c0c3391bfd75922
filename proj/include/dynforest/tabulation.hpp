#pragma once

#include <unordered_map>

#include "dynforest/algebra.hpp"

namespace dynforest {

// Memo table for evaluated small labeled forests (at most max_nodes nodes).
// Entries are keyed by shape (balanced-parentheses bits) plus the label
// vector; each entry caches its algebra value. relabel() follows a cached
// edge from one entry to another, so repeated single-label changes on the
// same small forest cost one hash lookup after the first time.
//
// Labels follow the mixed convention of eval_vh_forest: internal nodes carry
// V elements, leaves carry H elements, and at most one leaf may carry a V
// element (a pending hole; the cluster layers use the neutral context there).
class SmallForestIndex {
 public:
  using Handle = int32_t;

  struct Stats {
    uint64_t interned = 0;  // distinct entries
    uint64_t hits = 0;      // relabel edge cache hits
    uint64_t misses = 0;    // relabel edge cache misses
    uint64_t ops = 0;       // intern + relabel calls
  };

  // max_nodes is clamped to [3, 25] so shape bits fit in 50 bits. With
  // prefill, every shape of at most max_nodes nodes is interned with every
  // labeling the cluster layers can produce: internal nodes range over V,
  // leaves over H, and at most one leaf carries the neutral pending context.
  // All kind-preserving single-label relabel edges between those entries are
  // cached too (the pending label itself never changes). The projected entry
  // count must stay within max_entries.
  SmallForestIndex(const ForestAlgebra* algebra, int32_t max_nodes,
                   bool prefill = false, uint64_t max_entries = 4'000'000);

  Handle intern(const ForestShape& shape, std::span<const VHLabel> labels);
  // New entry with position `pos` relabeled. The replacement must keep the
  // node's kind (V stays V, H stays H).
  Handle relabel(Handle h, int32_t pos, VHLabel label);
  VHLabel value(Handle h) const { return entries_[h].value; }
  const ForestShape& shape_of(Handle h) const;
  std::span<const VHLabel> labels_of(Handle h) const;

  int32_t max_nodes() const { return max_nodes_; }
  const Stats& stats() const { return stats_; }

 private:
  struct Key {
    uint64_t shape_bits;
    std::vector<int32_t> labels;  // elt * 2 + is_v per position

    bool operator==(const Key& other) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const;
  };
  struct Entry {
    int32_t shape_id;
    std::vector<VHLabel> labels;
    VHLabel value;
    int32_t pending_pos;  // position of the V-labeled leaf, or kNone
  };

  int32_t intern_shape(const ForestShape& shape, uint64_t bits);
  void prefill_all();

  const ForestAlgebra* algebra_;
  int32_t max_nodes_;
  uint64_t max_entries_;
  std::vector<ForestShape> shapes_;
  std::unordered_map<uint64_t, int32_t> shape_ids_;  // (bits << 6) | size
  std::vector<Entry> entries_;
  std::unordered_map<Key, int32_t, KeyHash> entry_ids_;
  std::unordered_map<uint64_t, int32_t> relabel_edges_;
  Stats stats_;
};

// Balanced-parentheses encoding of a shape: 1 opens a node, 0 closes it,
// subtrees inline, trees in document order. At most 32 nodes.
uint64_t shape_bits(const ForestShape& shape);

}  // namespace dynforest
