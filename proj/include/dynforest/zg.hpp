#pragma once

#include <optional>

#include "dynforest/algebra.hpp"

namespace dynforest {

struct IdentityResult {
  std::string name;
  bool holds = false;
  std::vector<int32_t> witness;  // quantified elements of a violation
};

// Result of checking v^{w+1} w = w v^{w+1} for all v, w in V, together with
// the derived identity suite (each checked exhaustively on its own
// quantifier domain).
struct ZGReport {
  bool zg = false;
  std::optional<std::pair<int32_t, int32_t>> witness;  // violating (v, w)
  std::vector<IdentityResult> identities;

  const IdentityResult& identity(std::string_view name) const;
};

ZGReport zg_report(const ForestAlgebra& alg);
bool is_zg(const ForestAlgebra& alg);

struct AlmostCommutative {
  bool value = false;
  Recognizer syntactic;
  ZGReport report;
};

// A language is almost commutative iff its syntactic forest algebra is ZG.
AlmostCommutative is_almost_commutative(const ForestAutomaton& a,
                                        int32_t cap = kDefaultAlgebraCap);

// Line-tree normal form: a chain of m nodes per occurring letter, letters in
// first-occurrence (document) order.
Forest xi_normal_form(const Forest& f, int64_t m);

// Rare/frequent normal form: letters with fewer than rare_threshold
// occurrences keep their projected part; every frequent letter a is replaced
// by a chain of m + (count_a mod m) nodes. Frequent chains come first, in
// first-occurrence order.
Forest phi_normal_form(const Forest& f, int64_t rare_threshold, int64_t m);

// F = outer(factor(inner)) with factor a nonempty context whose image is
// idempotent in V.
struct Decomposition {
  Forest outer;   // context
  Forest factor;  // context
  Forest inner;   // forest
};

// Searches a sibling set wider than the threshold (elementary sibling
// contexts, pigeonhole on the horizontal monoid), then a root-leaf path
// longer than the threshold (path contexts, pigeonhole on the vertical
// monoid). Threshold defaults to max(|V|, |H|).
std::optional<Decomposition> find_idempotent_factor(
    const Forest& f, const Recognizer& rec,
    std::optional<int32_t> threshold = std::nullopt);

// Substitutes the hole of `context` by `g` (a forest, or a context when
// composing). Node ids of the result are fresh prefix ids.
Forest apply_context(const Forest& context, const Forest& g);

// Consecutive block (i, j] of w whose product is idempotent. A cheap
// pigeonhole pass over prefix products runs first, then an exhaustive scan
// of all blocks.
std::optional<std::pair<int32_t, int32_t>> find_idempotent_block(
    const MonoidTable& m, const std::vector<int32_t>& w);

// H image of every node's subtree under the recognizer.
std::vector<int32_t> subtree_values(const Recognizer& rec, const Forest& f);

}  // namespace dynforest
