#pragma once

#include <memory>
#include <optional>

#include "dynforest/algebra.hpp"
#include "dynforest/automaton.hpp"
#include "dynforest/cluster.hpp"
#include "dynforest/langspec.hpp"
#include "dynforest/tabulation.hpp"

namespace dynforest {

struct UpdateStats {
  uint64_t steps = 0;          // elementary operations spent on the update
  int32_t touched_levels = 0;  // forests whose labels were rewritten
};

// Keeps a membership bit current under node relabelings. The shape of the
// forest never changes.
class Maintainer {
 public:
  virtual ~Maintainer() = default;
  virtual std::string strategy() const = 0;
  virtual bool current() const = 0;
  // Applies the relabeling and returns the new membership bit.
  virtual bool relabel(int32_t node, int32_t letter) = 0;
  const UpdateStats& last_update() const { return last_; }
  virtual uint64_t build_steps() const { return 0; }

 protected:
  UpdateStats last_;
};

// Reruns the automaton over the whole forest after each update.
class NaiveMaintainer : public Maintainer {
 public:
  NaiveMaintainer(Forest f, ForestAutomaton a);
  std::string strategy() const override { return "naive"; }
  bool current() const override { return bit_; }
  bool relabel(int32_t node, int32_t letter) override;

 private:
  Forest forest_;
  ForestAutomaton automaton_;
  bool bit_;
};

// Hierarchy of saturated clusterings over the syntactic algebra of the
// automaton. Each level stores one (V,H)-labeled forest; a cluster's label
// at the next level is the value of its member forest, with the neutral
// context at the hole leaf. An update rewrites one label per level, walking
// the cached relabel edges of a shared small-forest index.
class GeneralMaintainer : public Maintainer {
 public:
  struct Level {
    ForestShape shape;
    std::vector<VHLabel> labels;
    // Clustering data; absent at the topmost level.
    Clustering clustering;
    ClusterForest cf;
    std::vector<SmallForestIndex::Handle> handles;  // per cluster
  };

  GeneralMaintainer(Forest f, const ForestAutomaton& a,
                    std::optional<int32_t> k_override = std::nullopt,
                    int32_t cap = kDefaultAlgebraCap, bool prefill = false);

  std::string strategy() const override { return "general"; }
  bool current() const override { return bit_; }
  bool relabel(int32_t node, int32_t letter) override;
  uint64_t build_steps() const override { return build_steps_; }

  // Cluster size bound: log2(n) divided by the description size of the
  // algebra, kept within [2, 24].
  static int32_t pick_k(int64_t n, const ForestAlgebra& alg);

  int32_t k() const { return k_; }
  // Number of clustering rounds until a single node remains.
  int32_t num_levels() const {
    return static_cast<int32_t>(levels_.size()) - 1;
  }
  const std::vector<Level>& levels() const { return levels_; }
  const Recognizer& recognizer() const { return rec_; }
  const SmallForestIndex& index() const { return *index_; }
  const Forest& forest() const { return forest_; }

 private:
  void build();
  void read_top_bit();

  Forest forest_;
  Recognizer rec_;
  int32_t k_;
  std::unique_ptr<SmallForestIndex> index_;
  std::vector<Level> levels_;
  uint64_t build_steps_ = 0;
  bool bit_ = false;
};

// Letter counts folded through the threshold/modulus quotient of one
// commutative component, with a dense accept table. Updates cost O(1).
class CommutativeCounter {
 public:
  CommutativeCounter(const CommutativeComponent& comp, const Forest& f);
  void apply(int32_t old_letter, int32_t new_letter);
  bool bit() const { return bit_; }
  uint64_t steps() const { return steps_; }

 private:
  const CommutativeComponent& comp_;
  std::vector<int32_t> position_;  // alphabet letter -> index, or kNone
  std::vector<int64_t> counts_;
  std::vector<int32_t> coords_;
  std::vector<int64_t> strides_;
  std::vector<uint8_t> table_;
  int64_t index_ = 0;
  bool bit_ = false;
  uint64_t steps_ = 0;
};

// Tracks the nodes carrying subalphabet letters in per-letter lists. Letter
// counts gate a full comparison against the target, which touches at most
// |target| nodes, a constant of the language.
class SingletonTracker {
 public:
  SingletonTracker(const SingletonComponent& comp, const Forest& f);
  void apply(int32_t node, int32_t old_letter, int32_t new_letter);
  bool bit() const { return bit_; }
  uint64_t steps() const { return steps_; }

 private:
  void full_check();

  const SingletonComponent& comp_;
  const Forest& forest_;
  TimestampIndex ts_;
  std::vector<char> in_sub_;
  std::vector<int32_t> head_;  // per letter
  std::vector<int32_t> next_, prev_;
  std::vector<int64_t> need_, have_;
  int32_t bad_letters_ = 0;
  bool bit_ = false;
  uint64_t steps_ = 0;
};

// Components of a boolean spec maintained side by side; the formula is
// re-evaluated after each update. Update cost depends only on the spec.
class BooleanMaintainer : public Maintainer {
 public:
  BooleanMaintainer(Forest f, BooleanSpec spec);
  std::string strategy() const override { return "o1"; }
  bool current() const override { return bit_; }
  bool relabel(int32_t node, int32_t letter) override;

 private:
  void refresh_bit();

  Forest forest_;
  BooleanSpec spec_;
  std::vector<std::unique_ptr<CommutativeCounter>> counters_;
  std::vector<std::unique_ptr<SingletonTracker>> trackers_;
  // component index -> (is_singleton, index into the matching vector)
  std::vector<std::pair<bool, int32_t>> slots_;
  bool bit_ = false;
};

}  // namespace dynforest
