#include "dynforest/forest.hpp"

#include <algorithm>
#include <cctype>

namespace dynforest {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (int32_t i = 0; i < size(); ++i) {
    if (names_[i] == kHoleName)
      throw std::invalid_argument("alphabet may not contain the hole label _");
    auto [it, fresh] = ids_.emplace(names_[i], i);
    if (!fresh) throw std::invalid_argument("duplicate letter " + names_[i]);
  }
}

std::optional<int32_t> Alphabet::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int32_t Alphabet::id(std::string_view name) const {
  auto found = find(name);
  if (!found) throw std::out_of_range("unknown letter " + std::string(name));
  return *found;
}

void ForestShape::push_node(int32_t parent_id) {
  int32_t u = size();
  parent.push_back(parent_id);
  first_child.push_back(kNone);
  next_sibling.push_back(kNone);
  prev_sibling.push_back(kNone);
  // Locate the previous sibling: the last child of parent_id so far. Callers
  // append in prefix order, so that child is the most recently closed subtree.
  // We track it through first_child chains lazily: walk from first_child.
  if (parent_id == kNone) {
    if (u > 0) {
      // previous root = the root of the preceding tree
      int32_t r = 0;
      while (next_sibling[r] != kNone) r = next_sibling[r];
      if (r != u) {
        next_sibling[r] = u;
        prev_sibling[u] = r;
      }
    }
  } else {
    if (first_child[parent_id] == kNone) {
      first_child[parent_id] = u;
    } else {
      int32_t c = first_child[parent_id];
      while (next_sibling[c] != kNone) c = next_sibling[c];
      next_sibling[c] = u;
      prev_sibling[u] = c;
    }
  }
}

ForestShape shape_from_parents(const std::vector<int32_t>& parents,
                               std::vector<int32_t>* renumbering) {
  int32_t n = static_cast<int32_t>(parents.size());
  std::vector<std::vector<int32_t>> children(n);
  std::vector<int32_t> roots;
  for (int32_t i = 0; i < n; ++i) {
    if (parents[i] == kNone) {
      roots.push_back(i);
    } else {
      if (parents[i] < 0 || parents[i] >= i)
        throw std::invalid_argument("parents must precede children");
      children[parents[i]].push_back(i);
    }
  }
  // DFS in document order, assigning prefix ids.
  std::vector<int32_t> stack;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.push_back(*it);
  std::vector<int32_t> newid(n, kNone);
  int32_t next_id = 0;
  while (!stack.empty()) {
    int32_t u = stack.back();
    stack.pop_back();
    newid[u] = next_id++;
    for (auto it = children[u].rbegin(); it != children[u].rend(); ++it)
      stack.push_back(*it);
  }
  ForestShape shape;
  shape.parent.assign(n, kNone);
  shape.first_child.assign(n, kNone);
  shape.next_sibling.assign(n, kNone);
  shape.prev_sibling.assign(n, kNone);
  for (int32_t old_u = 0; old_u < n; ++old_u) {
    int32_t u = newid[old_u];
    shape.parent[u] = parents[old_u] == kNone ? kNone : newid[parents[old_u]];
  }
  auto link_chain = [&](const std::vector<int32_t>& chain, int32_t parent_new) {
    int32_t prev = kNone;
    for (int32_t old_c : chain) {
      int32_t c = newid[old_c];
      if (prev == kNone) {
        if (parent_new != kNone) shape.first_child[parent_new] = c;
      } else {
        shape.next_sibling[prev] = c;
        shape.prev_sibling[c] = prev;
      }
      prev = c;
    }
  };
  link_chain(roots, kNone);
  for (int32_t old_u = 0; old_u < n; ++old_u)
    link_chain(children[old_u], newid[old_u]);
  if (renumbering) *renumbering = std::move(newid);
  return shape;
}

namespace {

bool is_label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#';
}

Forest parse_impl(std::string_view text, const Alphabet& alphabet,
                  bool allow_hole) {
  Forest f;
  f.alphabet = alphabet;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  std::vector<int32_t> parents;  // stack of open nodes
  // After a tree has been closed at the current level we expect ',' or ')'.
  bool expect_tree = true;
  int32_t last_closed = kNone;
  int32_t holes = 0;
  skip_ws();
  bool any = false;
  while (i < text.size()) {
    skip_ws();
    if (i >= text.size()) break;
    char c = text[i];
    if (is_label_char(c)) {
      if (!expect_tree)
        throw ParseError("expected ',' or ')' before label", i);
      std::size_t start = i;
      while (i < text.size() && is_label_char(text[i])) ++i;
      std::string_view label = text.substr(start, i - start);
      int32_t letter;
      if (label == kHoleName) {
        if (!allow_hole) throw ParseError("hole label _ not allowed here", start);
        letter = kHole;
        ++holes;
      } else {
        auto id = alphabet.find(label);
        if (!id) throw ParseError("unknown letter " + std::string(label), start);
        letter = *id;
      }
      int32_t parent = parents.empty() ? kNone : parents.back();
      int32_t u = f.shape.size();
      f.shape.push_node(parent);
      f.labels.push_back(letter);
      any = true;
      skip_ws();
      if (i < text.size() && text[i] == '(') {
        if (letter == kHole)
          throw ParseError("hole must be a leaf", start);
        ++i;
        parents.push_back(u);
        expect_tree = true;
        // allow an immediately closing ')': empty child forest
        skip_ws();
        if (i < text.size() && text[i] == ')') {
          ++i;
          parents.pop_back();
          last_closed = u;
          expect_tree = false;
        }
      } else {
        last_closed = u;
        expect_tree = false;
      }
    } else if (c == ',') {
      if (expect_tree) throw ParseError("expected a tree before ','", i);
      ++i;
      expect_tree = true;
    } else if (c == ')') {
      if (expect_tree) throw ParseError("expected a tree before ')'", i);
      if (parents.empty()) throw ParseError("unmatched ')'", i);
      last_closed = parents.back();
      parents.pop_back();
      ++i;
      expect_tree = false;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  if (!parents.empty())
    throw ParseError("unterminated '(' for node", text.size());
  if (any && expect_tree)
    throw ParseError("dangling ',' at end of input", text.size());
  if (allow_hole && holes != 1)
    throw ParseError("context must contain exactly one hole, found " +
                         std::to_string(holes),
                     text.size());
  (void)last_closed;
  return f;
}

}  // namespace

Forest parse_forest(std::string_view text, const Alphabet& alphabet) {
  return parse_impl(text, alphabet, /*allow_hole=*/false);
}

Forest parse_context(std::string_view text, const Alphabet& alphabet) {
  return parse_impl(text, alphabet, /*allow_hole=*/true);
}

std::string serialize_forest(const Forest& f) {
  std::string out;
  int32_t cur = f.shape.first_root();
  std::vector<int32_t> path;
  while (cur != kNone || !path.empty()) {
    if (cur != kNone) {
      if (f.shape.prev_sibling[cur] != kNone) out.push_back(',');
      if (f.labels[cur] == kHole)
        out += kHoleName;
      else
        out += f.alphabet.name(f.labels[cur]);
      if (f.shape.first_child[cur] != kNone) {
        out.push_back('(');
        path.push_back(cur);
        cur = f.shape.first_child[cur];
      } else {
        cur = f.shape.next_sibling[cur];
      }
    } else {
      out.push_back(')');
      cur = f.shape.next_sibling[path.back()];
      path.pop_back();
    }
  }
  return out;
}

int32_t count_holes(const Forest& f) {
  int32_t holes = 0;
  for (int32_t l : f.labels) holes += (l == kHole);
  return holes;
}

int32_t hole_of(const Forest& f) {
  for (int32_t u = 0; u < f.size(); ++u)
    if (f.labels[u] == kHole) return u;
  return kNone;
}

void relabel(Forest& f, int32_t node, int32_t letter) {
  if (node < 0 || node >= f.size())
    throw std::out_of_range("node id " + std::to_string(node) +
                            " out of range");
  if (letter < 0 || letter >= f.alphabet.size())
    throw std::out_of_range("letter id out of range");
  f.labels[node] = letter;
}

void relabel(Forest& f, int32_t node, std::string_view letter) {
  relabel(f, node, f.alphabet.id(letter));
}

TimestampIndex compute_timestamps(const ForestShape& shape) {
  TimestampIndex ts;
  int32_t n = shape.size();
  ts.enter.assign(n, 0);
  ts.leave.assign(n, 0);
  int64_t clock = 0;
  int32_t cur = shape.first_root();
  std::vector<int32_t> path;
  while (cur != kNone || !path.empty()) {
    while (cur != kNone) {
      ts.enter[cur] = clock++;
      path.push_back(cur);
      cur = shape.first_child[cur];
    }
    int32_t u = path.back();
    path.pop_back();
    ts.leave[u] = clock++;
    cur = shape.next_sibling[u];
    while (cur == kNone && !path.empty()) {
      u = path.back();
      path.pop_back();
      ts.leave[u] = clock++;
      cur = shape.next_sibling[u];
    }
  }
  return ts;
}

Forest project(const Forest& f, const std::vector<bool>& keep_letter) {
  if (static_cast<int32_t>(keep_letter.size()) != f.alphabet.size())
    throw std::invalid_argument("keep mask size mismatch");
  int32_t n = f.size();
  std::vector<int32_t> newid(n, kNone);
  std::vector<int32_t> nearest_kept(n, kNone);  // nearest kept strict ancestor
  std::vector<int32_t> new_parents;
  // Document order of kept nodes equals document order of the projection.
  for (int32_t u = 0; u < n; ++u) {
    int32_t p = f.shape.parent[u];
    int32_t up = p == kNone ? kNone : (newid[p] != kNone ? newid[p] : nearest_kept[p]);
    nearest_kept[u] = up;
    bool kept = f.labels[u] != kHole && keep_letter[f.labels[u]];
    if (kept) {
      newid[u] = static_cast<int32_t>(new_parents.size());
      new_parents.push_back(up);
    }
  }
  Forest out;
  out.alphabet = f.alphabet;
  out.shape.parent = new_parents;
  int32_t m = static_cast<int32_t>(new_parents.size());
  out.shape.first_child.assign(m, kNone);
  out.shape.next_sibling.assign(m, kNone);
  out.shape.prev_sibling.assign(m, kNone);
  std::vector<int32_t> last_child(m, kNone);
  int32_t last_root = kNone;
  for (int32_t v = 0; v < m; ++v) {
    int32_t p = new_parents[v];
    int32_t& prev = p == kNone ? last_root : last_child[p];
    if (prev == kNone) {
      if (p != kNone) out.shape.first_child[p] = v;
    } else {
      out.shape.next_sibling[prev] = v;
      out.shape.prev_sibling[v] = prev;
    }
    prev = v;
  }
  out.labels.reserve(m);
  for (int32_t u = 0; u < n; ++u)
    if (newid[u] != kNone) out.labels.push_back(f.labels[u]);
  return out;
}

Forest project(const Forest& f, const std::vector<std::string>& keep_letters) {
  std::vector<bool> mask(f.alphabet.size(), false);
  for (const auto& name : keep_letters) {
    auto id = f.alphabet.find(name);
    if (id) mask[*id] = true;
  }
  return project(f, mask);
}

ParikhVector parikh(const Forest& f) {
  ParikhVector pv;
  pv.counts.assign(f.alphabet.size(), 0);
  for (int32_t l : f.labels)
    if (l != kHole) ++pv.counts[l];
  return pv;
}

namespace {

using ParentSet = std::vector<std::vector<int32_t>>;

// Parent vectors of all forests with m nodes, already in prefix order.
// forest = first tree + remaining forest; tree = root + child forest.
const ParentSet& forest_parent_sets(int32_t m) {
  static std::vector<ParentSet> memo = {{{}}};
  while (static_cast<int32_t>(memo.size()) <= m) {
    int32_t n = static_cast<int32_t>(memo.size());
    ParentSet out;
    for (int32_t t = 1; t <= n; ++t) {
      for (const auto& child : forest_parent_sets(t - 1)) {
        std::vector<int32_t> tree = {kNone};
        for (int32_t p : child) tree.push_back(p == kNone ? 0 : p + 1);
        for (const auto& rest : forest_parent_sets(n - t)) {
          std::vector<int32_t> whole = tree;
          for (int32_t p : rest) whole.push_back(p == kNone ? kNone : p + t);
          out.push_back(std::move(whole));
        }
      }
    }
    memo.push_back(std::move(out));
  }
  return memo[m];
}

}  // namespace

const std::vector<ForestShape>& enumerate_shapes(int32_t nodes) {
  static std::vector<std::vector<ForestShape>> memo;
  if (nodes < 0) throw std::invalid_argument("negative node count");
  while (static_cast<int32_t>(memo.size()) <= nodes) {
    int32_t n = static_cast<int32_t>(memo.size());
    std::vector<ForestShape> shapes;
    for (const auto& parents : forest_parent_sets(n))
      shapes.push_back(shape_from_parents(parents));
    memo.push_back(std::move(shapes));
  }
  return memo[nodes];
}

}  // namespace dynforest
