#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>
#include <vector>

#include "doctest.h"
#include "dynforest/automaton.hpp"
#include "dynforest/workload.hpp"
#include "util.hpp"

using namespace dynforest;
using testutil::corpus;
using testutil::read_file;

namespace {

ForestAutomaton load(const std::string& name) {
  return parse_automaton(read_file(corpus(name)));
}

void check_cases(const ForestAutomaton& a,
                 const std::vector<std::pair<const char*, bool>>& cases) {
  for (auto [text, expect] : cases) {
    CAPTURE(text);
    CHECK(accepts(a, parse_forest(text, a.alphabet)) == expect);
  }
}

}  // namespace

TEST_CASE("even number of a-labeled nodes") {
  ForestAutomaton a = load("l1_parity.fa");
  check_cases(a, {{"", true},
                  {"a", false},
                  {"b", true},
                  {"a(a)", true},
                  {"a(b),a", true},
                  {"b(b(b))", true},
                  {"a,b,a,a", false},
                  {"a(a(a,b),a)", true}});
}

TEST_CASE("a-labeled nodes form an antichain") {
  ForestAutomaton a = load("l2_antichain.fa");
  check_cases(a, {{"", true},
                  {"a", true},
                  {"a,a", true},
                  {"a(a)", false},
                  {"a(b(a))", false},
                  {"b(a,a),a", true},
                  {"a(b),b(a)", true},
                  {"b(b(a(b(a))))", false}});
}

TEST_CASE("some a has a next sibling labeled b") {
  ForestAutomaton a = load("l0_next_sibling.fa");
  check_cases(a, {{"", false},
                  {"a", false},
                  {"a,b", true},
                  {"b,a", false},
                  {"a,c,b", false},
                  {"a,a,b", true},
                  {"c(a,b)", true},
                  {"a(b)", false},
                  {"c(c(a,b)),c", true}});
}

TEST_CASE("exactly one s and it sits below an m") {
  ForestAutomaton a = load("l3_marked_ancestor.fa");
  check_cases(a, {{"", false},
                  {"s", false},
                  {"m(s)", true},
                  {"e(s)", false},
                  {"m(e(s))", true},
                  {"m(s),s", false},
                  {"m(s,s)", false},
                  {"s(m(s))", false},
                  {"m,s", false},
                  {"m(m(s),e)", true}});
}

TEST_CASE("leaf word holds an s after evenly many 1s") {
  ForestAutomaton a = load("l1_leafword.fa");
  check_cases(a, {{"", false},
                  {"s", true},
                  {"1,s", false},
                  {"1,1,s", true},
                  {"0(1,1),s", true},
                  {"1(s)", true},
                  {"s(1)", false},
                  {"0,s,1,s", true},
                  {"1(0(1)),s", false}});

  // invariant: membership is the word condition on the leaf labels
  uint64_t seen = for_each_forest(a.alphabet, 6, [&](const Forest& f) {
    std::vector<int32_t> leaves;
    for (int32_t u = 0; u < f.size(); ++u)
      if (f.shape.is_leaf(u)) leaves.push_back(f.labels[u]);
    int32_t one = a.alphabet.id("1"), s = a.alphabet.id("s");
    bool expect = false;
    int64_t ones = 0;
    for (int32_t l : leaves) {
      if (l == s) {
        expect = ones % 2 == 0;
        break;
      }
      if (l == one) ++ones;
    }
    CAPTURE(serialize_forest(f));
    CHECK(accepts(a, f) == expect);
  });
  CHECK(seen > 100000);
}

TEST_CASE("run exposes per-node states") {
  ForestAutomaton a = load("l1_parity.fa");
  Forest f = parse_forest("a(a,b),a", a.alphabet);
  Run r = run(a, f);
  // subtree parities: a(a,b) has two a's -> q0; leaves a -> q1, b -> q0
  int32_t q0 = 0, q1 = 1;
  CHECK(r.state == std::vector<int32_t>{q0, q1, q0, q1});
  CHECK(r.chain_state[1] == a.horizontal.initial);  // leaf
  CHECK(r.root_chain_state == 1);                   // odd total
  CHECK(!r.accepted);
  CHECK(accepts(a, f) == r.accepted);
  CHECK_THROWS_AS(run(a, parse_context("a(_)", a.alphabet)),
                  std::invalid_argument);
}

TEST_CASE("automaton text round trip") {
  for (const char* name : {"l1_parity.fa", "l2_antichain.fa",
                           "l0_next_sibling.fa", "l3_marked_ancestor.fa",
                           "l1_leafword.fa"}) {
    ForestAutomaton a = load(name);
    ForestAutomaton b = parse_automaton(serialize_automaton(a));
    CHECK(a.alphabet == b.alphabet);
    CHECK(a.tree_state_names == b.tree_state_names);
    CHECK(a.word_state_names == b.word_state_names);
    CHECK(a.horizontal.initial == b.horizontal.initial);
    CHECK(a.horizontal.final_state == b.horizontal.final_state);
    CHECK(a.horizontal.delta == b.horizontal.delta);
    CHECK(a.vertical == b.vertical);
  }
}

TEST_CASE("automaton parser rejects broken input") {
  std::string good = read_file(corpus("l1_parity.fa"));
  CHECK_THROWS_AS(parse_automaton(""), ParseError);
  CHECK_THROWS_AS(parse_automaton("alphabet: a\n"), ParseError);
  // missing one word-delta line
  std::string partial;
  for (const auto& line : {std::string("alphabet: a"),
                           std::string("tree-states: q0"),
                           std::string("word-states: p0"),
                           std::string("word-initial: p0"),
                           std::string("word-final: p0"),
                           std::string("delta: p0 a -> q0")})
    partial += line + "\n";
  CHECK_THROWS_AS(parse_automaton(partial), ParseError);
  CHECK_NOTHROW(parse_automaton(partial + "word-delta: p0 q0 -> p0\n"));
  // duplicates and unknown names
  CHECK_THROWS_AS(
      parse_automaton(partial + "word-delta: p0 q0 -> p0\n" +
                      "word-delta: p0 q0 -> p0\n"),
      ParseError);
  CHECK_THROWS_AS(
      parse_automaton(partial + "word-delta: p0 q9 -> p0\n"), ParseError);
  CHECK_THROWS_AS(parse_automaton(good + "delta: p0 a -> q0\n"), ParseError);
  CHECK_THROWS_AS(parse_automaton("nonsense\n"), ParseError);
}
