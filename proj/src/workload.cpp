#include "dynforest/workload.hpp"

#include <random>
#include <sstream>

namespace dynforest {

std::vector<Update> parse_updates(std::string_view text,
                                  const Alphabet& alphabet) {
  std::vector<Update> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    auto fail = [&](const std::string& msg) {
      throw ParseError("updates line " + std::to_string(lineno) + ": " + msg,
                       0);
    };
    if (word != "relabel") fail("expected 'relabel', got '" + word + "'");
    int64_t node;
    std::string letter;
    if (!(ls >> node >> letter)) fail("expected '<node-id> <letter>'");
    std::string extra;
    if (ls >> extra) fail("trailing input '" + extra + "'");
    auto id = alphabet.find(letter);
    if (!id) fail("unknown letter '" + letter + "'");
    if (node < 0) fail("negative node id");
    out.push_back({static_cast<int32_t>(node), *id});
  }
  return out;
}

std::string write_updates(std::span<const Update> updates,
                          const Alphabet& alphabet) {
  std::ostringstream out;
  for (const Update& u : updates)
    out << "relabel " << u.node << " " << alphabet.name(u.letter) << "\n";
  return out.str();
}

Forest random_forest(std::string_view kind, int32_t n, uint64_t seed,
                     const Alphabet& alphabet) {
  if (n < 0) throw std::invalid_argument("negative forest size");
  if (alphabet.size() == 0 && n > 0)
    throw std::invalid_argument("empty alphabet");
  std::mt19937_64 rng(seed);
  std::vector<int32_t> parents(n);
  if (kind == "random") {
    for (int32_t i = 0; i < n; ++i)
      parents[i] = static_cast<int32_t>(rng() % (i + 1)) - 1;
  } else if (kind == "chain") {
    for (int32_t i = 0; i < n; ++i) parents[i] = i - 1;
  } else if (kind == "star") {
    for (int32_t i = 0; i < n; ++i) parents[i] = i == 0 ? kNone : 0;
  } else if (kind == "binary") {
    for (int32_t i = 0; i < n; ++i) parents[i] = i == 0 ? kNone : (i - 1) / 2;
  } else if (kind == "comb") {
    // Spine node, then its leaf, then the next spine node below it.
    for (int32_t i = 0; i < n; ++i)
      parents[i] = i == 0 ? kNone : (i % 2 ? i - 1 : i - 2);
  } else {
    throw std::invalid_argument(
        "unknown forest kind '" + std::string(kind) +
        "' (expected random, chain, star, binary or comb)");
  }
  Forest f;
  f.shape = shape_from_parents(parents);
  f.alphabet = alphabet;
  f.labels.resize(n);
  for (int32_t u = 0; u < n; ++u)
    f.labels[u] = static_cast<int32_t>(rng() % alphabet.size());
  return f;
}

std::vector<Update> random_updates(const Forest& f, int32_t count,
                                   uint64_t seed) {
  if (f.size() == 0)
    throw std::invalid_argument("cannot draw updates for an empty forest");
  std::mt19937_64 rng(seed);
  std::vector<Update> out;
  out.reserve(count);
  for (int32_t i = 0; i < count; ++i) {
    int32_t node = static_cast<int32_t>(rng() % f.size());
    int32_t letter = static_cast<int32_t>(rng() % f.alphabet.size());
    out.push_back({node, letter});
  }
  return out;
}

uint64_t for_each_forest(const Alphabet& alphabet, int32_t max_nodes,
                         const std::function<void(const Forest&)>& fn) {
  uint64_t visited = 0;
  for (int32_t m = 0; m <= max_nodes; ++m) {
    for (const ForestShape& shape : enumerate_shapes(m)) {
      Forest f;
      f.shape = shape;
      f.alphabet = alphabet;
      f.labels.assign(m, 0);
      if (m > 0 && alphabet.size() == 0) continue;
      for (;;) {
        fn(f);
        ++visited;
        int32_t u = 0;
        while (u < m && ++f.labels[u] == alphabet.size()) f.labels[u++] = 0;
        if (u == m) break;
      }
    }
  }
  return visited;
}

}  // namespace dynforest
