#pragma once

#include <memory>
#include <variant>

#include "dynforest/automaton.hpp"
#include "dynforest/forest.hpp"

namespace dynforest {

// Membership depends only on per-letter occurrence counts, each taken
// through the quotient  count -> count            (count < threshold)
//                       count -> threshold + (count - threshold) % modulus
// and compared against a set of accepted coordinate tuples.
struct CommutativeComponent {
  std::vector<int32_t> letters;  // letter ids, in declaration order
  std::vector<int32_t> thresholds;
  std::vector<int32_t> moduli;
  std::vector<std::vector<int32_t>> accept;  // coordinate tuples

  int32_t coord(size_t i, int64_t count) const {
    if (count < thresholds[i]) return static_cast<int32_t>(count);
    return thresholds[i] +
           static_cast<int32_t>((count - thresholds[i]) % moduli[i]);
  }
};

// Membership: the projection to the subalphabet equals one fixed forest.
struct SingletonComponent {
  std::vector<int32_t> subalphabet;  // letter ids kept by the projection
  Forest target;
};

using Component = std::variant<CommutativeComponent, SingletonComponent>;

struct BoolExpr {
  enum Kind { kVar, kNot, kAnd, kOr };
  Kind kind = kVar;
  int32_t var = -1;  // component index for kVar
  std::unique_ptr<BoolExpr> lhs, rhs;
};

// Language description combining named components with a boolean formula.
// Text format (line oriented, # starts a comment):
//
//   alphabet: a b m
//   component even commutative
//     letter a threshold 0 modulus 2
//     accept: 0
//   end
//   component mark singleton
//     subalphabet: m
//     target: m(m)
//   end
//   formula: even & !mark
//
// Formula grammar: ! binds tighter than &, which binds tighter than |;
// parentheses allowed. Accept tuples list one coordinate per declared
// letter, each in [0, threshold + modulus).
struct BooleanSpec {
  Alphabet alphabet;
  std::vector<std::string> names;
  std::vector<Component> components;
  std::unique_ptr<BoolExpr> formula;
};

BooleanSpec parse_boolean_spec(std::string_view text);

bool eval_bool_expr(const BoolExpr& e, const std::vector<char>& vars);

// Reference evaluator, recomputing everything from scratch.
bool spec_accepts(const BooleanSpec& spec, const Forest& f);

// Compares the spec against an automaton on every forest with at most
// max_nodes nodes. Returns a description of the first mismatch, if any.
std::optional<std::string> spec_automaton_mismatch(const BooleanSpec& spec,
                                                   const ForestAutomaton& a,
                                                   int32_t max_nodes);

}  // namespace dynforest
