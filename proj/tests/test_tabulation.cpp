#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "dynforest/tabulation.hpp"
#include "dynforest/workload.hpp"
#include "util.hpp"

using namespace dynforest;
using testutil::corpus;
using testutil::read_file;

namespace {

Recognizer syntactic(const std::string& name) {
  return minimize_to_syntactic(
      transition_algebra(parse_automaton(read_file(corpus(name)))));
}

// All well-formed labelings of a shape: V at internal nodes, H at leaves,
// plus variants with one leaf carrying a pending V element. With
// neutral_pending the pending leaf only takes the unit context, mirroring
// what prefill enumerates.
std::vector<std::vector<VHLabel>> all_labelings(const ForestAlgebra& alg,
                                                const ForestShape& s,
                                                bool neutral_pending = false) {
  std::vector<std::vector<VHLabel>> out;
  int32_t n = s.size();
  std::vector<std::vector<VHLabel>> choices(n);
  for (int32_t u = 0; u < n; ++u) {
    if (s.is_leaf(u)) {
      for (int32_t h = 0; h < alg.h.size; ++h)
        choices[u].push_back({false, h});
    } else {
      for (int32_t v = 0; v < alg.v.size; ++v) choices[u].push_back({true, v});
    }
  }
  std::vector<int32_t> pick(n, 0);
  auto emit = [&](int32_t pending) {
    std::vector<VHLabel> labels(n);
    for (int32_t u = 0; u < n; ++u) labels[u] = choices[u][pick[u]];
    if (pending == kNone) {
      out.push_back(labels);
    } else if (neutral_pending) {
      labels[pending] = {true, alg.v.one};
      out.push_back(labels);
    } else {
      for (int32_t v = 0; v < alg.v.size; ++v) {
        labels[pending] = {true, v};
        out.push_back(labels);
      }
    }
  };
  auto odometer = [&](auto&& self, int32_t u) -> void {
    if (u == n) {
      emit(kNone);
      for (int32_t p = 0; p < n; ++p)
        if (s.is_leaf(p)) emit(p);
      return;
    }
    for (pick[u] = 0; pick[u] < static_cast<int32_t>(choices[u].size());
         ++pick[u])
      self(self, u + 1);
  };
  odometer(odometer, 0);
  return out;
}

}  // namespace

TEST_CASE("balanced-parenthesis shape bits") {
  Alphabet ab({"a", "b", "c"});
  auto bits = [&](const char* text) {
    return shape_bits(parse_forest(text, ab).shape);
  };
  CHECK(bits("") == 0b0);
  CHECK(bits("a") == 0b10);
  CHECK(bits("a,b") == 0b1010);
  CHECK(bits("a(b)") == 0b1100);
  CHECK(bits("a(b),c") == 0b110010);
  CHECK(bits("a(b,c)") == 0b110100);
  CHECK(bits("a(b(c))") == 0b111000);
  // distinct shapes of equal size get distinct codes
  for (int32_t n = 0; n <= 7; ++n) {
    std::set<uint64_t> seen;
    for (const ForestShape& s : enumerate_shapes(n))
      CHECK(seen.insert(shape_bits(s)).second);
  }
  std::vector<int32_t> big(40, kNone);
  CHECK_THROWS_AS(shape_bits(shape_from_parents(big)), std::invalid_argument);
}

TEST_CASE("interned values match direct evaluation") {
  Recognizer rec = syntactic("l2_antichain.fa");
  SmallForestIndex idx(&rec.algebra, 6);
  CHECK(idx.max_nodes() == 6);
  for (int32_t n = 0; n <= 4; ++n) {
    for (const ForestShape& s : enumerate_shapes(n)) {
      for (const auto& labels : all_labelings(rec.algebra, s)) {
        auto h = idx.intern(s, labels);
        CHECK(idx.value(h) == eval_vh_forest(rec.algebra, s, labels));
        CHECK(shape_bits(idx.shape_of(h)) == shape_bits(s));
        auto again = idx.labels_of(h);
        CHECK(std::vector<VHLabel>(again.begin(), again.end()) == labels);
        // interning twice lands on the same entry
        CHECK(idx.intern(s, labels) == h);
      }
    }
  }
}

TEST_CASE("relabel walks cached edges") {
  Recognizer rec = syntactic("l1_parity.fa");
  const ForestAlgebra& alg = rec.algebra;
  SmallForestIndex idx(&alg, 5);
  Alphabet ab = rec.alphabet;
  ForestShape s = parse_forest("a(a,a),a", ab).shape;
  std::vector<VHLabel> labels = {
      {true, 0}, {false, 0}, {false, 1}, {false, 0}};
  auto h = idx.intern(s, labels);

  std::mt19937_64 rng(41);
  for (int32_t step = 0; step < 200; ++step) {
    int32_t pos = static_cast<int32_t>(rng() % 4);
    VHLabel next = pos == 0
                       ? VHLabel{true, static_cast<int32_t>(rng() % alg.v.size)}
                       : VHLabel{false, static_cast<int32_t>(rng() % alg.h.size)};
    labels[pos] = next;
    h = idx.relabel(h, pos, next);
    CHECK(idx.value(h) == eval_vh_forest(alg, s, labels));
  }
  // a revisited edge is a cache hit: walk the same two states repeatedly
  SmallForestIndex idx2(&alg, 5);
  auto h0 = idx2.intern(s, labels);
  VHLabel flip = {false, labels[1].elt == 0 ? 1 : 0};
  VHLabel orig = labels[1];
  auto before = idx2.stats();
  auto h1 = idx2.relabel(h0, 1, flip);
  auto h2 = idx2.relabel(h1, 1, orig);
  CHECK(h2 == h0);
  auto mid = idx2.stats();
  CHECK(mid.misses == before.misses + 2);
  auto h3 = idx2.relabel(h0, 1, flip);
  CHECK(h3 == h1);
  auto after = idx2.stats();
  CHECK(after.hits == mid.hits + 1);
  CHECK(after.misses == mid.misses);
}

TEST_CASE("relabel keeps node kinds and validates input") {
  Recognizer rec = syntactic("l1_parity.fa");
  SmallForestIndex idx(&rec.algebra, 4);
  ForestShape s = parse_forest("a(a)", rec.alphabet).shape;
  std::vector<VHLabel> labels = {{true, 1}, {false, 1}};
  auto h = idx.intern(s, labels);
  CHECK_THROWS_AS(idx.relabel(h, 0, {false, 0}), std::invalid_argument);
  CHECK_THROWS_AS(idx.relabel(h, 1, {true, 0}), std::invalid_argument);
  CHECK_THROWS_AS(idx.relabel(h, 7, {false, 0}), std::invalid_argument);
  CHECK_THROWS_AS(idx.relabel(h + 100, 0, {true, 0}), std::invalid_argument);
  // a pending V leaf may move between V elements
  std::vector<VHLabel> pend = {{true, 1}, {true, 0}};
  auto hp = idx.intern(s, pend);
  CHECK(idx.value(hp).is_v);
  auto hp2 = idx.relabel(hp, 1, {true, 1});
  CHECK(idx.value(hp2).is_v);

  // shapes beyond the bound are rejected
  std::vector<int32_t> parents(10, kNone);
  ForestShape wide = shape_from_parents(parents);
  std::vector<VHLabel> ws(10, VHLabel{false, 0});
  CHECK_THROWS_AS(idx.intern(wide, ws), std::invalid_argument);
  CHECK_THROWS_AS(idx.intern(s, std::span<const VHLabel>{}),
                  std::invalid_argument);
}

TEST_CASE("prefill covers every small entry") {
  Recognizer rec = syntactic("l1_parity.fa");
  const ForestAlgebra& alg = rec.algebra;
  SmallForestIndex idx(&alg, 3, /*prefill=*/true);
  uint64_t expected = 0;
  for (int32_t n = 0; n <= 3; ++n)
    for (const ForestShape& s : enumerate_shapes(n)) {
      std::set<std::vector<int32_t>> distinct;
      for (const auto& labels : all_labelings(alg, s, /*neutral_pending=*/true)) {
        std::vector<int32_t> packed;
        for (const VHLabel& l : labels) packed.push_back(l.elt * 2 + l.is_v);
        distinct.insert(packed);
      }
      expected += distinct.size();
    }
  CHECK(idx.stats().interned == expected);

  // nothing new is created afterwards, and every relabel away from the
  // pending leaf is a cache hit
  std::mt19937_64 rng(43);
  auto interned = idx.stats().interned;
  for (int32_t n = 1; n <= 3; ++n) {
    for (const ForestShape& s : enumerate_shapes(n)) {
      for (const auto& labels : all_labelings(alg, s, true)) {
        auto h = idx.intern(s, labels);
        CHECK(idx.value(h) == eval_vh_forest(alg, s, labels));
        std::vector<int32_t> movable;
        for (int32_t pos = 0; pos < s.size(); ++pos)
          if (!(labels[pos].is_v && s.is_leaf(pos))) movable.push_back(pos);
        if (movable.empty()) continue;
        int32_t pos = movable[rng() % movable.size()];
        bool is_v = labels[pos].is_v;
        int32_t range = is_v ? alg.v.size : alg.h.size;
        auto before = idx.stats();
        idx.relabel(h, pos, {is_v, static_cast<int32_t>(rng() % range)});
        CHECK(idx.stats().hits == before.hits + 1);
      }
    }
  }
  CHECK(idx.stats().interned == interned);
}

TEST_CASE("prefill respects the entry budget") {
  Recognizer rec = syntactic("l1_leafword.fa");
  CHECK_THROWS_AS(
      SmallForestIndex(&rec.algebra, 10, /*prefill=*/true, /*max_entries=*/500),
      CapError);
  CHECK_THROWS_AS(SmallForestIndex(nullptr, 4), std::invalid_argument);
}
