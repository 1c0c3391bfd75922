#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "dynforest/forest.hpp"

namespace dynforest::testutil {

// First structural inconsistency of a shape, empty string when sound.
inline std::string shape_problem(const ForestShape& s) {
  int32_t n = s.size();
  auto bad = [&](int32_t x) { return x != kNone && (x < 0 || x >= n); };
  if (static_cast<int32_t>(s.first_child.size()) != n ||
      static_cast<int32_t>(s.next_sibling.size()) != n ||
      static_cast<int32_t>(s.prev_sibling.size()) != n)
    return "array sizes differ";
  for (int32_t u = 0; u < n; ++u) {
    if (bad(s.parent[u]) || bad(s.first_child[u]) || bad(s.next_sibling[u]) ||
        bad(s.prev_sibling[u]))
      return "link out of range at node " + std::to_string(u);
    if (s.parent[u] != kNone && s.parent[u] >= u)
      return "parent does not precede node " + std::to_string(u);
    if (s.first_child[u] != kNone && s.first_child[u] != u + 1)
      return "first child of " + std::to_string(u) + " is not the next id";
    if (s.next_sibling[u] != kNone) {
      int32_t v = s.next_sibling[u];
      if (s.prev_sibling[v] != u || s.parent[v] != s.parent[u])
        return "sibling links broken between " + std::to_string(u) + " and " +
               std::to_string(v);
    }
    if (s.prev_sibling[u] != kNone && s.next_sibling[s.prev_sibling[u]] != u)
      return "prev sibling of " + std::to_string(u) + " does not point back";
    if (s.first_child[u] != kNone && s.prev_sibling[s.first_child[u]] != kNone)
      return "first child of " + std::to_string(u) + " has a previous sibling";
  }
  // In prefix order each subtree occupies a contiguous id range, so the next
  // sibling of u sits right after u's subtree.
  std::vector<int32_t> sub(n, 1);
  for (int32_t u = n - 1; u > 0; --u)
    if (s.parent[u] != kNone) sub[s.parent[u]] += sub[u];
  for (int32_t u = 0; u < n; ++u) {
    if (s.next_sibling[u] != kNone && s.next_sibling[u] != u + sub[u])
      return "next sibling of " + std::to_string(u) + " is not adjacent";
    if (s.next_sibling[u] == kNone && s.parent[u] == kNone && u + sub[u] != n &&
        u + sub[u] < n)
      return "trailing root chain broken at " + std::to_string(u);
  }
  if (n > 0 && s.parent[0] != kNone) return "node 0 is not a root";
  return "";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string& name) {
  return std::string(CORPUS_DIR) + "/" + name;
}

}  // namespace dynforest::testutil
