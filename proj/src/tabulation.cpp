#include "dynforest/tabulation.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynforest {

uint64_t shape_bits(const ForestShape& shape) {
  if (shape.size() > 32)
    throw std::invalid_argument("shape too large for bit encoding");
  uint64_t bits = 0;
  int32_t u = shape.first_root();
  while (u != kNone) {
    bits = (bits << 1) | 1;
    if (shape.first_child[u] != kNone) {
      u = shape.first_child[u];
      continue;
    }
    bits <<= 1;
    while (u != kNone && shape.next_sibling[u] == kNone) {
      u = shape.parent[u];
      if (u != kNone) bits <<= 1;
    }
    if (u != kNone) u = shape.next_sibling[u];
  }
  return bits;
}

size_t SmallForestIndex::KeyHash::operator()(const Key& k) const {
  uint64_t h = 1469598103934665603ull ^ k.shape_bits;
  for (int32_t x : k.labels) {
    h ^= static_cast<uint64_t>(static_cast<uint32_t>(x));
    h *= 1099511628211ull;
  }
  return static_cast<size_t>(h);
}

SmallForestIndex::SmallForestIndex(const ForestAlgebra* algebra,
                                   int32_t max_nodes, bool prefill,
                                   uint64_t max_entries)
    : algebra_(algebra),
      max_nodes_(std::clamp(max_nodes, 3, 25)),
      max_entries_(max_entries) {
  if (!algebra_) throw std::invalid_argument("null algebra");
  if (prefill) prefill_all();
}

int32_t SmallForestIndex::intern_shape(const ForestShape& shape,
                                       uint64_t bits) {
  uint64_t key = (bits << 6) | static_cast<uint64_t>(shape.size());
  auto it = shape_ids_.find(key);
  if (it != shape_ids_.end()) return it->second;
  int32_t id = static_cast<int32_t>(shapes_.size());
  shapes_.push_back(shape);
  shape_ids_.emplace(key, id);
  return id;
}

SmallForestIndex::Handle SmallForestIndex::intern(
    const ForestShape& shape, std::span<const VHLabel> labels) {
  ++stats_.ops;
  if (shape.size() > max_nodes_)
    throw std::invalid_argument("forest exceeds the index node bound");
  if (static_cast<int32_t>(labels.size()) != shape.size())
    throw std::invalid_argument("label count does not match the shape");
  uint64_t bits = shape_bits(shape);
  Key key{bits, {}};
  key.labels.reserve(labels.size());
  for (const VHLabel& l : labels)
    key.labels.push_back(l.elt * 2 + (l.is_v ? 1 : 0));
  auto it = entry_ids_.find(key);
  if (it != entry_ids_.end()) return it->second;

  if (entries_.size() >= max_entries_)
    throw CapError("tabulation size exceeds cap " +
                   std::to_string(max_entries_));
  Entry e;
  e.shape_id = intern_shape(shape, bits);
  e.labels.assign(labels.begin(), labels.end());
  e.value = eval_vh_forest(*algebra_, shape, labels);
  e.pending_pos = kNone;
  for (int32_t u = 0; u < shape.size(); ++u)
    if (labels[u].is_v && shape.first_child[u] == kNone) e.pending_pos = u;
  int32_t id = static_cast<int32_t>(entries_.size());
  entries_.push_back(std::move(e));
  entry_ids_.emplace(std::move(key), id);
  stats_.interned = entries_.size();
  return id;
}

SmallForestIndex::Handle SmallForestIndex::relabel(Handle h, int32_t pos,
                                                   VHLabel label) {
  ++stats_.ops;
  if (h < 0 || static_cast<size_t>(h) >= entries_.size())
    throw std::invalid_argument("unknown handle");
  const Entry& e = entries_[h];
  if (pos < 0 || static_cast<size_t>(pos) >= e.labels.size())
    throw std::invalid_argument("relabel position outside the forest");
  if (e.labels[pos].is_v != label.is_v)
    throw std::invalid_argument("relabel must keep the node kind");
  uint64_t packed =
      static_cast<uint64_t>(label.elt) * 2 + (label.is_v ? 1 : 0);
  if (packed >= (1ull << 26))
    throw std::invalid_argument("label too large for the edge cache");
  uint64_t edge = (static_cast<uint64_t>(static_cast<uint32_t>(h)) << 32) |
                  (static_cast<uint64_t>(pos) << 26) | packed;
  auto it = relabel_edges_.find(edge);
  if (it != relabel_edges_.end()) {
    ++stats_.hits;
    return it->second;
  }
  ++stats_.misses;
  std::vector<VHLabel> labels = e.labels;
  labels[pos] = label;
  --stats_.ops;  // the nested intern is part of this relabel
  Handle target = intern(shapes_[e.shape_id], labels);
  relabel_edges_.emplace(edge, target);
  return target;
}

const ForestShape& SmallForestIndex::shape_of(Handle h) const {
  return shapes_[entries_[h].shape_id];
}

std::span<const VHLabel> SmallForestIndex::labels_of(Handle h) const {
  return entries_[h].labels;
}

void SmallForestIndex::prefill_all() {
  uint64_t nv = algebra_->v.size;
  uint64_t nh = algebra_->h.size;
  // Projected entry count (slight overcount: labelings with two pending
  // leaves are rejected during enumeration).
  uint64_t total = 1;  // the empty forest
  for (int32_t m = 1; m <= max_nodes_ && total <= max_entries_; ++m) {
    for (const ForestShape& shape : enumerate_shapes(m)) {
      uint64_t per = 1;
      for (int32_t u = 0; u < m; ++u) {
        per *= shape.first_child[u] == kNone ? nh + 1 : nv;
        if (per > max_entries_) break;
      }
      total += per;
      if (total > max_entries_) break;
    }
  }
  if (total > max_entries_)
    throw CapError("tabulation prefill exceeds cap " +
                   std::to_string(max_entries_));

  intern(ForestShape{}, std::span<const VHLabel>{});
  for (int32_t m = 1; m <= max_nodes_; ++m) {
    for (const ForestShape& shape : enumerate_shapes(m)) {
      // Odometer over positions: internal nodes range over V, leaves over
      // H plus one extra slot for the pending hole label (V, 1).
      std::vector<uint64_t> radix(m), digit(m, 0);
      for (int32_t u = 0; u < m; ++u)
        radix[u] = shape.first_child[u] == kNone ? nh + 1 : nv;
      std::vector<VHLabel> labels(m);
      for (;;) {
        int32_t pending = 0;
        for (int32_t u = 0; u < m; ++u) {
          if (shape.first_child[u] != kNone) {
            labels[u] = {true, static_cast<int32_t>(digit[u])};
          } else if (digit[u] < nh) {
            labels[u] = {false, static_cast<int32_t>(digit[u])};
          } else {
            labels[u] = {true, algebra_->v.one};
            ++pending;
          }
        }
        if (pending <= 1) intern(shape, labels);
        int32_t u = 0;
        while (u < m && ++digit[u] == radix[u]) digit[u++] = 0;
        if (u == m) break;
      }
    }
  }
  // Prefill the relabel edges among the enumerated entries (kind-preserving
  // changes never leave the set, so no new entries appear).
  size_t count = entries_.size();
  for (size_t id = 0; id < count; ++id) {
    const Entry& e = entries_[id];
    const ForestShape& shape = shapes_[e.shape_id];
    for (int32_t u = 0; u < shape.size(); ++u) {
      if (e.labels[u].is_v) {
        if (shape.first_child[u] == kNone) continue;  // hole label is fixed
        for (int32_t x = 0; x < static_cast<int32_t>(nv); ++x)
          relabel(static_cast<Handle>(id), u, {true, x});
      } else {
        for (int32_t x = 0; x < static_cast<int32_t>(nh); ++x)
          relabel(static_cast<Handle>(id), u, {false, x});
      }
    }
  }
}

}  // namespace dynforest
