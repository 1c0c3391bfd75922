#include "dynforest/maintain.hpp"

#include <algorithm>
#include <cmath>

namespace dynforest {

namespace {

void check_update(const Forest& f, int32_t node, int32_t letter) {
  if (node < 0 || node >= f.size())
    throw std::invalid_argument("relabel of node " + std::to_string(node) +
                                " outside the forest");
  if (letter < 0 || letter >= f.alphabet.size())
    throw std::invalid_argument("relabel with unknown letter id " +
                                std::to_string(letter));
}

}  // namespace

NaiveMaintainer::NaiveMaintainer(Forest f, ForestAutomaton a)
    : forest_(std::move(f)), automaton_(std::move(a)) {
  bit_ = accepts(automaton_, forest_);
}

bool NaiveMaintainer::relabel(int32_t node, int32_t letter) {
  check_update(forest_, node, letter);
  forest_.labels[node] = letter;
  bit_ = accepts(automaton_, forest_);
  last_ = {static_cast<uint64_t>(forest_.size()), 1};
  return bit_;
}

int32_t GeneralMaintainer::pick_k(int64_t n, const ForestAlgebra& alg) {
  double desc = 4.0 * (alg.v.size + alg.h.size);
  int32_t c = static_cast<int32_t>(std::ceil(std::log2(desc)));
  c = std::max(c, 1);
  double bits = std::log2(static_cast<double>(std::max<int64_t>(n, 2)));
  return std::clamp(static_cast<int32_t>(bits) / c, 2, 24);
}

GeneralMaintainer::GeneralMaintainer(Forest f, const ForestAutomaton& a,
                                     std::optional<int32_t> k_override,
                                     int32_t cap, bool prefill)
    : forest_(std::move(f)) {
  rec_ = minimize_to_syntactic(transition_algebra(a, cap));
  k_ = k_override ? std::clamp(*k_override, 2, 24)
                  : pick_k(forest_.size(), rec_.algebra);
  index_ =
      std::make_unique<SmallForestIndex>(&rec_.algebra, k_ + 1, prefill);
  build();
}

void GeneralMaintainer::build() {
  levels_.clear();
  build_steps_ = 0;
  int32_t n = forest_.size();

  Level base;
  base.shape = forest_.shape;
  base.labels.resize(n);
  for (int32_t u = 0; u < n; ++u) {
    int32_t letter = forest_.labels[u];
    if (base.shape.is_leaf(u))
      base.labels[u] = {false, letter_h(rec_, letter)};
    else
      base.labels[u] = {true, rec_.assign[letter]};
  }
  build_steps_ += n;
  levels_.push_back(std::move(base));

  while (levels_.back().shape.size() > 1) {
    Level& cur = levels_.back();
    cur.clustering = saturate(cur.shape, k_);
    cur.cf = build_cluster_forest(cur.shape, cur.clustering);
    int32_t nc = cur.cf.shape.size();
    cur.handles.resize(nc);

    Level next;
    next.shape = cur.cf.shape;
    next.labels.resize(nc);
    std::vector<VHLabel> labels;
    for (int32_t c = 0; c < nc; ++c) {
      const InducedForest& ind = cur.cf.induced[c];
      labels.clear();
      for (int32_t m : ind.members)
        labels.push_back(m == kNone ? VHLabel{true, rec_.algebra.v.one}
                                    : cur.labels[m]);
      cur.handles[c] = index_->intern(ind.shape, labels);
      next.labels[cur.cf.cluster_to_node[c]] = index_->value(cur.handles[c]);
      build_steps_ += ind.shape.size();
    }
    build_steps_ += cur.clustering.work;
    levels_.push_back(std::move(next));
  }
  read_top_bit();
}

void GeneralMaintainer::read_top_bit() {
  const Level& top = levels_.back();
  if (top.shape.size() == 0) {
    bit_ = rec_.member(rec_.algebra.h.one);
    return;
  }
  VHLabel l = top.labels[0];
  if (l.is_v) throw std::logic_error("topmost label is a context");
  bit_ = rec_.member(l.elt);
}

bool GeneralMaintainer::relabel(int32_t node, int32_t letter) {
  check_update(forest_, node, letter);
  forest_.labels[node] = letter;
  last_ = {};

  VHLabel vh = forest_.shape.is_leaf(node)
                   ? VHLabel{false, letter_h(rec_, letter)}
                   : VHLabel{true, rec_.assign[letter]};
  int32_t u = node;
  for (size_t l = 0; l < levels_.size(); ++l) {
    Level& lev = levels_[l];
    lev.labels[u] = vh;
    ++last_.touched_levels;
    ++last_.steps;
    if (l + 1 == levels_.size()) break;
    int32_t c = lev.cf.cluster_of[u];
    lev.handles[c] = index_->relabel(lev.handles[c], lev.cf.pos_in_cluster[u], vh);
    vh = index_->value(lev.handles[c]);
    u = lev.cf.cluster_to_node[c];
    ++last_.steps;
  }
  read_top_bit();
  return bit_;
}

CommutativeCounter::CommutativeCounter(const CommutativeComponent& comp,
                                       const Forest& f)
    : comp_(comp) {
  size_t m = comp_.letters.size();
  position_.assign(f.alphabet.size(), kNone);
  for (size_t i = 0; i < m; ++i) position_[comp_.letters[i]] = static_cast<int32_t>(i);

  strides_.resize(m);
  int64_t total = 1;
  for (size_t i = 0; i < m; ++i) {
    strides_[i] = total;
    total *= comp_.thresholds[i] + comp_.moduli[i];
    if (total > 10'000'000)
      throw CapError("commutative accept table exceeds cap 10000000");
  }
  table_.assign(total, 0);
  for (const auto& tuple : comp_.accept) {
    int64_t idx = 0;
    for (size_t i = 0; i < m; ++i) idx += tuple[i] * strides_[i];
    table_[idx] = 1;
  }

  ParikhVector pv = parikh(f);
  counts_.resize(m);
  coords_.resize(m);
  for (size_t i = 0; i < m; ++i) {
    counts_[i] = pv.counts[comp_.letters[i]];
    coords_[i] = comp_.coord(i, counts_[i]);
    index_ += static_cast<int64_t>(coords_[i]) * strides_[i];
  }
  bit_ = table_[index_] != 0;
}

void CommutativeCounter::apply(int32_t old_letter, int32_t new_letter) {
  steps_ = 1;
  for (auto [letter, delta] : {std::pair{old_letter, int64_t{-1}},
                               std::pair{new_letter, int64_t{1}}}) {
    int32_t i = position_[letter];
    if (i == kNone) continue;
    counts_[i] += delta;
    int32_t c = comp_.coord(i, counts_[i]);
    index_ += static_cast<int64_t>(c - coords_[i]) * strides_[i];
    coords_[i] = c;
    ++steps_;
  }
  bit_ = table_[index_] != 0;
}

SingletonTracker::SingletonTracker(const SingletonComponent& comp,
                                   const Forest& f)
    : comp_(comp), forest_(f) {
  ts_ = compute_timestamps(f.shape);
  in_sub_.assign(f.alphabet.size(), 0);
  for (int32_t l : comp_.subalphabet) in_sub_[l] = 1;

  head_.assign(f.alphabet.size(), kNone);
  next_.assign(f.size(), kNone);
  prev_.assign(f.size(), kNone);
  need_.assign(f.alphabet.size(), 0);
  have_.assign(f.alphabet.size(), 0);
  for (int32_t l : comp_.target.labels) ++need_[l];

  // Build the lists back to front so each holds ascending node ids (the
  // order is irrelevant for correctness; it only helps debugging).
  for (int32_t u = f.size() - 1; u >= 0; --u) {
    int32_t l = f.labels[u];
    if (!in_sub_[l]) continue;
    next_[u] = head_[l];
    if (head_[l] != kNone) prev_[head_[l]] = u;
    head_[l] = u;
    ++have_[l];
  }
  for (int32_t l : comp_.subalphabet)
    if (have_[l] != need_[l]) ++bad_letters_;
  full_check();
}

void SingletonTracker::full_check() {
  if (bad_letters_ != 0) {
    bit_ = false;
    return;
  }
  // All counts match, so the lists hold exactly |target| nodes. Check that
  // in document order they reproduce the target's labels and its
  // nearest-kept-ancestor structure.
  std::vector<int32_t> kept;
  for (int32_t l : comp_.subalphabet)
    for (int32_t u = head_[l]; u != kNone; u = next_[u]) kept.push_back(u);
  std::sort(kept.begin(), kept.end());
  steps_ += kept.size() + 1;
  const Forest& t = comp_.target;
  std::vector<int32_t> stack;  // positions into kept
  for (size_t i = 0; i < kept.size(); ++i) {
    if (forest_.labels[kept[i]] != t.labels[i]) {
      bit_ = false;
      return;
    }
    while (!stack.empty() &&
           !ts_.is_ancestor(kept[stack.back()], kept[i]))
      stack.pop_back();
    int32_t parent = stack.empty() ? kNone : stack.back();
    if (t.shape.parent[i] != parent) {
      bit_ = false;
      return;
    }
    stack.push_back(static_cast<int32_t>(i));
  }
  bit_ = true;
}

void SingletonTracker::apply(int32_t node, int32_t old_letter,
                             int32_t new_letter) {
  steps_ = 1;
  if (old_letter == new_letter) return;
  if (in_sub_[old_letter]) {
    if (prev_[node] != kNone)
      next_[prev_[node]] = next_[node];
    else
      head_[old_letter] = next_[node];
    if (next_[node] != kNone) prev_[next_[node]] = prev_[node];
    prev_[node] = next_[node] = kNone;
    if (have_[old_letter] == need_[old_letter]) ++bad_letters_;
    --have_[old_letter];
    if (have_[old_letter] == need_[old_letter]) --bad_letters_;
    ++steps_;
  }
  if (in_sub_[new_letter]) {
    next_[node] = head_[new_letter];
    if (head_[new_letter] != kNone) prev_[head_[new_letter]] = node;
    prev_[node] = kNone;
    head_[new_letter] = node;
    if (have_[new_letter] == need_[new_letter]) ++bad_letters_;
    ++have_[new_letter];
    if (have_[new_letter] == need_[new_letter]) --bad_letters_;
    ++steps_;
  }
  full_check();
}

BooleanMaintainer::BooleanMaintainer(Forest f, BooleanSpec spec)
    : forest_(std::move(f)), spec_(std::move(spec)) {
  if (!(forest_.alphabet == spec_.alphabet))
    throw std::invalid_argument("forest alphabet does not match the spec");
  for (const Component& comp : spec_.components) {
    if (const auto* c = std::get_if<CommutativeComponent>(&comp)) {
      slots_.push_back({false, static_cast<int32_t>(counters_.size())});
      counters_.push_back(std::make_unique<CommutativeCounter>(*c, forest_));
    } else {
      const auto& s = std::get<SingletonComponent>(comp);
      slots_.push_back({true, static_cast<int32_t>(trackers_.size())});
      trackers_.push_back(std::make_unique<SingletonTracker>(s, forest_));
    }
  }
  refresh_bit();
}

void BooleanMaintainer::refresh_bit() {
  std::vector<char> vars;
  for (auto [is_singleton, i] : slots_)
    vars.push_back((is_singleton ? trackers_[i]->bit() : counters_[i]->bit())
                       ? 1
                       : 0);
  bit_ = eval_bool_expr(*spec_.formula, vars);
}

bool BooleanMaintainer::relabel(int32_t node, int32_t letter) {
  check_update(forest_, node, letter);
  int32_t old = forest_.labels[node];
  forest_.labels[node] = letter;
  last_ = {1, 1};
  for (auto [is_singleton, i] : slots_) {
    if (is_singleton) {
      trackers_[i]->apply(node, old, letter);
      last_.steps += trackers_[i]->steps();
    } else {
      counters_[i]->apply(old, letter);
      last_.steps += counters_[i]->steps();
    }
  }
  refresh_bit();
  return bit_;
}

}  // namespace dynforest
