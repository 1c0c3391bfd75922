#pragma once

#include <span>

#include "dynforest/automaton.hpp"

namespace dynforest {

class CapError : public std::runtime_error {
 public:
  explicit CapError(const std::string& msg) : std::runtime_error(msg) {}
};

// Finite monoid as a dense multiplication table.
struct MonoidTable {
  int32_t size = 0;
  int32_t one = 0;
  std::vector<int32_t> mul;  // size x size

  int32_t at(int32_t a, int32_t b) const { return mul[a * size + b]; }
};

// x^omega: the unique idempotent power of x.
int32_t idempotent_power(const MonoidTable& m, int32_t x);
// Least e >= 1 with x^e idempotent.
int32_t idempotent_exponent(const MonoidTable& m, int32_t x);
// lcm of the per-element minimal idempotent exponents, so y^m is idempotent
// for every y.
int64_t idempotent_exponent(const MonoidTable& m);

// Two-sorted forest algebra (V, H): H elements stand for forests, V elements
// for one-hole contexts. Five operations:
//   hh     horizontal concatenation        H x H -> H
//   vv     context composition             V x V -> V
//   act    substitution into the hole      V x H -> H
//   vh_sum context extended on the right   V x H -> V
//   hv_sum context extended on the left    H x V -> V
struct ForestAlgebra {
  MonoidTable v;  // v.one is the bare hole
  MonoidTable h;  // h.one is the empty forest
  std::vector<int32_t> act_;     // v.size x h.size -> H
  std::vector<int32_t> vh_sum_;  // v.size x h.size -> V
  std::vector<int32_t> hv_sum_;  // h.size x v.size -> V
  std::vector<std::string> v_names, h_names;  // filled by assign_names

  int32_t act(int32_t vv, int32_t hh) const { return act_[vv * h.size + hh]; }
  int32_t vh_sum(int32_t vv, int32_t hh) const {
    return vh_sum_[vv * h.size + hh];
  }
  int32_t hv_sum(int32_t hh, int32_t vv) const {
    return hv_sum_[hh * v.size + vv];
  }
};

struct AlgebraViolation {
  std::string axiom;
  std::vector<int32_t> witness;
};

// Exhaustively checks monoid laws, the action axioms, mixing and
// faithfulness. Empty result means the algebra is valid.
std::vector<AlgebraViolation> validate_algebra(const ForestAlgebra& alg);

// Recognizer: algebra + letter assignment + accepting subset of H.
struct Recognizer {
  ForestAlgebra algebra;
  Alphabet alphabet;
  std::vector<int32_t> assign;    // letter -> V
  std::vector<char> accepting;    // H -> accepted?

  bool member(int32_t h) const { return accepting[h] != 0; }
};

// Label of a node in a VH-forest: internal nodes carry V elements, leaves
// carry H elements or (for at most one distinguished leaf) a V element that
// stands for a pending hole.
struct VHLabel {
  bool is_v = false;
  int32_t elt = 0;

  bool operator==(const VHLabel&) const = default;
};

// Evaluates a VH-forest. Result is in V iff a distinguished leaf is present.
// Throws on an internal node labeled H or on two distinguished leaves.
VHLabel eval_vh_forest(const ForestAlgebra& alg, const ForestShape& shape,
                       std::span<const VHLabel> labels);

// Morphism evaluation of a plain forest / one-hole context.
int32_t eval_morphism(const Recognizer& rec, const Forest& f);
int32_t eval_context(const Recognizer& rec, const Forest& context);
// H image of a single letter viewed as a one-node forest.
int32_t letter_h(const Recognizer& rec, int32_t letter);

// Default cap for each of |V| and |H| during transition-algebra
// construction. Overridable via the DYNFOREST_CAP environment variable in the
// CLI.
constexpr int32_t kDefaultAlgebraCap = 20000;

// Transition algebra of a forest automaton: H is the monoid of word-state
// transformations realized by forests, V the monoid of functions H -> H
// realized by contexts. Recognizes the same language.
Recognizer transition_algebra(const ForestAutomaton& a,
                              int32_t cap = kDefaultAlgebraCap);

// Quotient by the syntactic congruence:
//   h1 ~ h2  iff  forall v:      acc(v.h1) = acc(v.h2)
//   v1 ~ v2  iff  forall w, h:   acc(w.(v1.h)) = acc(w.(v2.h))
// Partition refinement iterated to a fixpoint; congruence consistency is
// verified on the induced tables.
Recognizer minimize_to_syntactic(const Recognizer& rec);

// Witnesses used by the minimality tests: a context class separating two
// distinct H classes, and a (context, forest) pair separating two V classes.
int32_t distinguishing_context(const Recognizer& rec, int32_t h1, int32_t h2);
std::pair<int32_t, int32_t> distinguishing_pair(const Recognizer& rec,
                                                int32_t v1, int32_t v2);

// Names every class by its shortest representative term (fewest nodes, then
// shortest text, then lexicographic). H terms are forests ("" displayed as
// the empty-forest sign), V terms are contexts containing the hole "_".
void assign_names(Recognizer& rec);

// Five operation tables plus assignment and accepting set, in a fixed
// text layout used by the golden files.
std::string dump_algebra(const Recognizer& rec);

}  // namespace dynforest
