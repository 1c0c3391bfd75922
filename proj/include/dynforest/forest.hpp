#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dynforest {

constexpr int32_t kNone = -1;
// Reserved label of the context hole. Never a member of any alphabet.
constexpr int32_t kHole = -2;
inline constexpr std::string_view kHoleName = "_";

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

// Finite ordered alphabet with dense letter ids. Names are only used at I/O
// boundaries; all inner loops work on ids.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  int32_t size() const { return static_cast<int32_t>(names_.size()); }
  const std::string& name(int32_t id) const { return names_.at(id); }
  std::optional<int32_t> find(std::string_view name) const;
  // Throws std::out_of_range when the letter is unknown.
  int32_t id(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }
  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int32_t> ids_;
};

// Shape of an ordered unranked forest in first-child/next-sibling form.
// Node ids are assigned in prefix (document) order and never change.
struct ForestShape {
  std::vector<int32_t> parent;
  std::vector<int32_t> first_child;
  std::vector<int32_t> next_sibling;
  std::vector<int32_t> prev_sibling;

  int32_t size() const { return static_cast<int32_t>(parent.size()); }
  bool is_leaf(int32_t u) const { return first_child[u] == kNone; }
  bool is_root(int32_t u) const { return parent[u] == kNone; }
  // First root, kNone for the empty forest. Roots form a sibling chain.
  int32_t first_root() const {
    return parent.empty() ? kNone : 0;
  }

  void push_node(int32_t parent_id);  // append as last child, prefix order only
};

// Builds a shape from an arbitrary parent vector (parent[i] < i or -1),
// renumbering nodes into prefix order. Children keep their insertion order.
// When `renumbering` is given it receives the input-id -> prefix-id map.
ForestShape shape_from_parents(const std::vector<int32_t>& parents,
                               std::vector<int32_t>* renumbering = nullptr);

// Labeled forest. `labels[u]` is a letter id of `alphabet`, or kHole for the
// single hole leaf of a context.
struct Forest {
  ForestShape shape;
  std::vector<int32_t> labels;
  Alphabet alphabet;

  int32_t size() const { return shape.size(); }
};

// Term grammar:  forest := tree ("," tree)* | ε
//                tree   := LABEL ("(" forest ")")?
// LABEL matches [A-Za-z0-9_#]+; the standalone label "_" is reserved for the
// context hole. Whitespace is insignificant.
Forest parse_forest(std::string_view text, const Alphabet& alphabet);
// Like parse_forest, but permits exactly one "_" leaf (the hole).
Forest parse_context(std::string_view text, const Alphabet& alphabet);
std::string serialize_forest(const Forest& f);

// Number of holes, and the hole node id if there is exactly one.
int32_t count_holes(const Forest& f);
int32_t hole_of(const Forest& f);

void relabel(Forest& f, int32_t node, int32_t letter);
void relabel(Forest& f, int32_t node, std::string_view letter);

// Enter/leave timestamps drawn from one clock (each event consumes a tick),
// so intervals nest strictly: u is an ancestor of v iff
// enter[u] <= enter[v] and leave[v] <= leave[u]. Ancestor is reflexive.
struct TimestampIndex {
  std::vector<int64_t> enter;
  std::vector<int64_t> leave;

  bool is_ancestor(int32_t u, int32_t v) const {
    return enter[u] <= enter[v] && leave[v] <= leave[u];
  }
};

TimestampIndex compute_timestamps(const ForestShape& shape);

// Projection to a subalphabet: dropped nodes are replaced by their child
// sequence, preserving document order.
Forest project(const Forest& f, const std::vector<bool>& keep_letter);
Forest project(const Forest& f, const std::vector<std::string>& keep_letters);

struct ParikhVector {
  std::vector<int64_t> counts;  // indexed by letter id

  bool operator==(const ParikhVector& other) const = default;
};

ParikhVector parikh(const Forest& f);

// Every forest shape with exactly `nodes` nodes, in a fixed deterministic
// order (results are memoized; count grows like the Catalan numbers, so keep
// `nodes` small).
const std::vector<ForestShape>& enumerate_shapes(int32_t nodes);

}  // namespace dynforest
