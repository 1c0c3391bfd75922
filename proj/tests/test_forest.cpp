#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "dynforest/forest.hpp"
#include "dynforest/workload.hpp"
#include "util.hpp"

using namespace dynforest;
using testutil::shape_problem;

namespace {

Alphabet ab2() { return Alphabet({"a", "b"}); }
Alphabet ab3() { return Alphabet({"a", "b", "c"}); }

// Serialization of the projection computed straight from the recursive
// definition: a dropped node is replaced by its (projected) child list.
std::string project_oracle(const Forest& f, int32_t first,
                           const std::vector<bool>& keep) {
  std::string out;
  for (int32_t c = first; c != kNone; c = f.shape.next_sibling[c]) {
    std::string inner = project_oracle(f, f.shape.first_child[c], keep);
    std::string piece;
    if (keep[f.labels[c]]) {
      piece = f.alphabet.name(f.labels[c]);
      if (!inner.empty()) piece += "(" + inner + ")";
    } else {
      piece = inner;
    }
    if (!piece.empty()) {
      if (!out.empty()) out += ",";
      out += piece;
    }
  }
  return out;
}

bool ancestor_by_chain(const ForestShape& s, int32_t u, int32_t v) {
  for (int32_t x = v; x != kNone; x = s.parent[x])
    if (x == u) return true;
  return false;
}

}  // namespace

TEST_CASE("alphabet lookups") {
  Alphabet a = ab3();
  CHECK(a.size() == 3);
  CHECK(a.id("b") == 1);
  CHECK(a.name(2) == "c");
  CHECK(!a.find("d").has_value());
  CHECK_THROWS_AS(a.id("d"), std::out_of_range);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet({"a", "_"}), std::invalid_argument);
}

TEST_CASE("parse and serialize round trip") {
  Alphabet a = ab3();
  for (const char* s : {"", "a", "a,b", "a(b)", "a(b,c)", "a(b(c),a),c",
                        "c(c(c(c)))", "a,a,a,a"}) {
    Forest f = parse_forest(s, a);
    CHECK(serialize_forest(f) == s);
    CHECK(shape_problem(f.shape) == "");
    CHECK(count_holes(f) == 0);
  }
  CHECK(serialize_forest(parse_forest("  a ( b , c ) ,\n b ", a)) ==
        "a(b,c),b");
  // an explicitly empty child list parses and serializes without parens
  CHECK(serialize_forest(parse_forest("a()", a)) == "a");
}

TEST_CASE("parse errors carry offsets") {
  Alphabet a = ab2();
  auto offset_of = [&](const char* text) {
    try {
      parse_forest(text, a);
    } catch (const ParseError& e) {
      return e.position;
    }
    return static_cast<std::size_t>(-1);
  };
  CHECK(offset_of("a,z") == 2);        // unknown letter
  CHECK(offset_of("a(") == 2);         // unterminated paren
  CHECK(offset_of("(a)") == 0);        // tree must start with a label
  CHECK(offset_of("a,,b") == 2);       // empty tree
  CHECK(offset_of("a)b") == 1);        // unmatched close
  CHECK(offset_of("a b") == 2);        // two trees need a comma
  CHECK(offset_of("a,b,") == 4);       // dangling comma
  CHECK(offset_of("_") == 0);          // hole outside a context
}

TEST_CASE("contexts demand exactly one hole") {
  Alphabet a = ab2();
  Forest c = parse_context("a(_,b)", a);
  CHECK(count_holes(c) == 1);
  CHECK(hole_of(c) == 1);
  CHECK(serialize_forest(c) == "a(_,b)");
  CHECK_THROWS_AS(parse_context("a,b", a), ParseError);
  CHECK_THROWS_AS(parse_context("_,_", a), ParseError);
  CHECK_THROWS_AS(parse_context("_(a)", a), ParseError);  // hole is a leaf
  CHECK_THROWS_AS(parse_forest("a(_)", a), ParseError);
}

TEST_CASE("shape_from_parents renumbers into prefix order") {
  // parents listed out of document order: node 2 is a child of 0, node 1 a
  // separate root, node 3 a child of 1
  std::vector<int32_t> parents = {kNone, kNone, 0, 1};
  std::vector<int32_t> renum;
  ForestShape s = shape_from_parents(parents, &renum);
  CHECK(shape_problem(s) == "");
  CHECK(renum == std::vector<int32_t>{0, 2, 1, 3});
  CHECK(s.parent == std::vector<int32_t>{kNone, 0, kNone, 2});
  // children keep insertion order
  std::vector<int32_t> p2 = {kNone, 0, 0, 1, 1};
  ForestShape s2 = shape_from_parents(p2);
  CHECK(s2.first_child[0] == 1);
  CHECK(s2.next_sibling[1] != kNone);
  CHECK_THROWS_AS(shape_from_parents({0}), std::invalid_argument);
  CHECK_THROWS_AS(shape_from_parents({kNone, 5}), std::invalid_argument);
}

TEST_CASE("relabel changes one label") {
  Alphabet a = ab2();
  Forest f = parse_forest("a(b,a)", a);
  relabel(f, 1, "a");
  CHECK(serialize_forest(f) == "a(a,a)");
  relabel(f, 0, 1);
  CHECK(serialize_forest(f) == "b(a,a)");
  CHECK_THROWS_AS(relabel(f, 3, 0), std::out_of_range);
  CHECK_THROWS_AS(relabel(f, -1, 0), std::out_of_range);
  CHECK_THROWS_AS(relabel(f, 0, 2), std::out_of_range);
  CHECK_THROWS_AS(relabel(f, 0, "z"), std::out_of_range);
}

TEST_CASE("timestamps answer ancestor queries") {
  // exhaustively over every small shape
  for (int32_t n = 0; n <= 6; ++n) {
    for (const ForestShape& s : enumerate_shapes(n)) {
      TimestampIndex ts = compute_timestamps(s);
      std::set<int64_t> ticks;
      for (int32_t u = 0; u < n; ++u) {
        ticks.insert(ts.enter[u]);
        ticks.insert(ts.leave[u]);
      }
      CHECK(static_cast<int32_t>(ticks.size()) == 2 * n);
      if (n > 0) CHECK(*ticks.rbegin() == 2 * n - 1);
      for (int32_t u = 0; u < n; ++u)
        for (int32_t v = 0; v < n; ++v)
          CHECK(ts.is_ancestor(u, v) == ancestor_by_chain(s, u, v));
    }
  }
  // spot checks on larger generated forests
  Alphabet a = ab2();
  std::mt19937_64 rng(7);
  for (const char* kind : {"random", "chain", "star", "binary", "comb"}) {
    Forest f = random_forest(kind, 300, rng(), a);
    CHECK(shape_problem(f.shape) == "");
    TimestampIndex ts = compute_timestamps(f.shape);
    for (int32_t trial = 0; trial < 500; ++trial) {
      int32_t u = static_cast<int32_t>(rng() % f.size());
      int32_t v = static_cast<int32_t>(rng() % f.size());
      CHECK(ts.is_ancestor(u, v) == ancestor_by_chain(f.shape, u, v));
    }
  }
}

TEST_CASE("projection equals the recursive definition") {
  Alphabet a = ab3();
  Forest f = parse_forest("a(b(c,a),c),b(a),c", a);
  Forest onto_a = project(f, {true, false, false});
  CHECK(serialize_forest(onto_a) == "a(a),a");
  CHECK(shape_problem(onto_a.shape) == "");
  Forest onto_bc = project(f, std::vector<std::string>{"b", "c"});
  CHECK(serialize_forest(onto_bc) == "b(c),c,b,c");
  CHECK_THROWS_AS(project(f, std::vector<bool>{true}), std::invalid_argument);

  std::mt19937_64 rng(11);
  for (int32_t trial = 0; trial < 200; ++trial) {
    Forest g = random_forest("random", static_cast<int32_t>(rng() % 60), rng(),
                             a);
    std::vector<bool> keep(3);
    for (int32_t l = 0; l < 3; ++l) keep[l] = rng() % 2 == 0;
    Forest p = project(g, keep);
    CHECK(shape_problem(p.shape) == "");
    CHECK(serialize_forest(p) ==
          project_oracle(g, g.shape.first_root(), keep));
    ParikhVector before = parikh(g), after = parikh(p);
    for (int32_t l = 0; l < 3; ++l)
      CHECK(after.counts[l] == (keep[l] ? before.counts[l] : 0));
  }
}

TEST_CASE("parikh counts labels") {
  Alphabet a = ab3();
  Forest f = parse_forest("a(b(a),a),c", a);
  CHECK(parikh(f).counts == std::vector<int64_t>{3, 1, 1});
  CHECK(parikh(parse_forest("", a)).counts == std::vector<int64_t>{0, 0, 0});
  // holes do not count
  CHECK(parikh(parse_context("a(_)", a)).counts ==
        std::vector<int64_t>{1, 0, 0});
}

TEST_CASE("shape enumeration follows the Catalan numbers") {
  const int64_t catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};
  for (int32_t n = 0; n <= 8; ++n) {
    const auto& shapes = enumerate_shapes(n);
    CHECK(static_cast<int64_t>(shapes.size()) == catalan[n]);
    std::set<std::string> distinct;
    Alphabet a({"x"});
    for (const ForestShape& s : shapes) {
      CHECK(s.size() == n);
      CHECK(shape_problem(s) == "");
      Forest f{s, std::vector<int32_t>(n, 0), a};
      distinct.insert(serialize_forest(f));
    }
    CHECK(static_cast<int64_t>(distinct.size()) == catalan[n]);
  }
}
