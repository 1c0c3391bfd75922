#include "dynforest/zg.hpp"

#include <algorithm>
#include <unordered_map>

namespace dynforest {

const IdentityResult& ZGReport::identity(std::string_view name) const {
  for (const auto& r : identities)
    if (r.name == name) return r;
  throw std::out_of_range("no identity named " + std::string(name));
}

ZGReport zg_report(const ForestAlgebra& alg) {
  ZGReport rep;
  const MonoidTable& V = alg.v;
  const MonoidTable& H = alg.h;
  int32_t nv = V.size, nh = H.size;
  std::vector<int32_t> vp1(nv), vo(nv), hp1(nh), ho(nh);
  for (int32_t v = 0; v < nv; ++v) {
    vo[v] = idempotent_power(V, v);
    vp1[v] = V.at(vo[v], v);
  }
  for (int32_t h = 0; h < nh; ++h) {
    ho[h] = idempotent_power(H, h);
    hp1[h] = H.at(ho[h], h);
  }

  rep.zg = true;
  for (int32_t v = 0; v < nv && rep.zg; ++v)
    for (int32_t w = 0; w < nv; ++w)
      if (V.at(vp1[v], w) != V.at(w, vp1[v])) {
        rep.zg = false;
        rep.witness = {v, w};
        break;
      }

  auto add = [&](std::string name, bool holds, std::vector<int32_t> wit) {
    rep.identities.push_back({std::move(name), holds, std::move(wit)});
  };
  {
    bool ok = true;
    std::vector<int32_t> wit;
    for (int32_t h = 0; h < nh && ok; ++h)
      for (int32_t g = 0; g < nh; ++g)
        if (H.at(hp1[h], g) != H.at(g, hp1[h])) {
          ok = false;
          wit = {h, g};
          break;
        }
    add("ZGh", ok, wit);
  }
  {
    bool ok = true;
    std::vector<int32_t> wit;
    for (int32_t v = 0; v < nv && ok; ++v)
      for (int32_t w = 0; w < nv; ++w)
        if (idempotent_power(V, V.at(v, w)) != V.at(vo[v], vo[w])) {
          ok = false;
          wit = {v, w};
          break;
        }
    add("DISTv", ok, wit);
  }
  {
    bool ok = true;
    std::vector<int32_t> wit;
    for (int32_t h = 0; h < nh && ok; ++h)
      for (int32_t g = 0; g < nh; ++g)
        if (idempotent_power(H, H.at(h, g)) != H.at(ho[h], ho[g])) {
          ok = false;
          wit = {h, g};
          break;
        }
    add("DISTh", ok, wit);
  }
  {
    bool ok = true;
    std::vector<int32_t> wit;
    for (int32_t v = 0; v < nv && ok; ++v)
      for (int32_t h = 0; h < nh; ++h)
        if (alg.act(v, hp1[h]) != H.at(alg.act(v, H.one), hp1[h])) {
          ok = false;
          wit = {v, h};
          break;
        }
    add("OUTh", ok, wit);
  }
  {
    bool ok = true;
    std::vector<int32_t> wit;
    for (int32_t v = 0; v < nv && ok; ++v)
      for (int32_t h = 0; h < nh; ++h)
        if (alg.act(vp1[v], h) != H.at(alg.act(vp1[v], H.one), h)) {
          ok = false;
          wit = {v, h};
          break;
        }
    add("OUTv", ok, wit);
  }
  {
    bool ok = true;
    std::vector<int32_t> wit;
    for (int32_t v = 0; v < nv; ++v) {
      int32_t e = alg.act(vo[v], H.one);
      if (H.at(e, e) != e) {
        ok = false;
        wit = {v};
        break;
      }
    }
    add("IDv", ok, wit);
  }
  {
    bool ok = true;
    std::vector<int32_t> wit;
    for (int32_t v = 0; v < nv && ok; ++v)
      for (int32_t h = 0; h < nh; ++h)
        if (idempotent_power(H, alg.act(v, h)) !=
            H.at(alg.act(vo[v], H.one), ho[h])) {
          ok = false;
          wit = {v, h};
          break;
        }
    add("FLAT", ok, wit);
  }
  return rep;
}

bool is_zg(const ForestAlgebra& alg) { return zg_report(alg).zg; }

AlmostCommutative is_almost_commutative(const ForestAutomaton& a,
                                        int32_t cap) {
  AlmostCommutative out;
  out.syntactic = minimize_to_syntactic(transition_algebra(a, cap));
  out.report = zg_report(out.syntactic.algebra);
  out.value = out.report.zg;
  return out;
}

namespace {

// Assembles a forest from ordered children lists over virtual node ids.
struct Builder {
  std::vector<std::vector<int32_t>> children;
  std::vector<int32_t> labels;
  std::vector<int32_t> roots;

  int32_t add(int32_t label) {
    children.emplace_back();
    labels.push_back(label);
    return static_cast<int32_t>(labels.size()) - 1;
  }

  Forest build(const Alphabet& alphabet) const {
    Forest f;
    f.alphabet = alphabet;
    int32_t n = static_cast<int32_t>(labels.size());
    f.shape.parent.reserve(n);
    f.labels.reserve(n);
    // DFS over (virtual id, parent new id)
    std::vector<std::pair<int32_t, int32_t>> stack;
    for (auto it = roots.rbegin(); it != roots.rend(); ++it)
      stack.push_back({*it, kNone});
    std::vector<int32_t> parents;
    std::vector<int32_t> new_labels;
    while (!stack.empty()) {
      auto [u, p] = stack.back();
      stack.pop_back();
      int32_t id = static_cast<int32_t>(parents.size());
      parents.push_back(p);
      new_labels.push_back(labels[u]);
      for (auto it = children[u].rbegin(); it != children[u].rend(); ++it)
        stack.push_back({*it, id});
    }
    f.shape = shape_from_parents(parents);
    f.labels = std::move(new_labels);
    return f;
  }
};

}  // namespace

Forest xi_normal_form(const Forest& f, int64_t m) {
  if (m < 1) throw std::invalid_argument("exponent must be positive");
  std::vector<int32_t> letters;
  std::vector<char> seen(f.alphabet.size(), 0);
  for (int32_t l : f.labels)
    if (l != kHole && !seen[l]) {
      seen[l] = 1;
      letters.push_back(l);
    }
  if (static_cast<int64_t>(letters.size()) * m > 10'000'000)
    throw CapError("normal form would be too large");
  Builder b;
  for (int32_t l : letters) {
    int32_t prev = kNone;
    for (int64_t i = 0; i < m; ++i) {
      int32_t u = b.add(l);
      if (prev == kNone)
        b.roots.push_back(u);
      else
        b.children[prev].push_back(u);
      prev = u;
    }
  }
  return b.build(f.alphabet);
}

Forest phi_normal_form(const Forest& f, int64_t rare_threshold, int64_t m) {
  if (m < 1) throw std::invalid_argument("exponent must be positive");
  ParikhVector pv = parikh(f);
  std::vector<int32_t> frequent;
  std::vector<char> seen(f.alphabet.size(), 0);
  for (int32_t l : f.labels)
    if (l != kHole && !seen[l] && pv.counts[l] >= rare_threshold) {
      seen[l] = 1;
      frequent.push_back(l);
    }
  Builder b;
  for (int32_t l : frequent) {
    int64_t len = m + pv.counts[l] % m;
    if (len > 10'000'000) throw CapError("normal form would be too large");
    int32_t prev = kNone;
    for (int64_t i = 0; i < len; ++i) {
      int32_t u = b.add(l);
      if (prev == kNone)
        b.roots.push_back(u);
      else
        b.children[prev].push_back(u);
      prev = u;
    }
  }
  std::vector<bool> rare(f.alphabet.size());
  for (int32_t l = 0; l < f.alphabet.size(); ++l)
    rare[l] = pv.counts[l] < rare_threshold;
  Forest rest = project(f, rare);
  // splice the projected rare part after the chains
  int32_t base = static_cast<int32_t>(b.labels.size());
  for (int32_t u = 0; u < rest.size(); ++u) {
    b.add(rest.labels[u]);
    if (rest.shape.parent[u] == kNone)
      b.roots.push_back(base + u);
    else
      b.children[base + rest.shape.parent[u]].push_back(base + u);
  }
  return b.build(f.alphabet);
}

Forest apply_context(const Forest& context, const Forest& g) {
  int32_t hole = hole_of(context);
  if (hole == kNone) throw std::invalid_argument("context has no hole");
  if (context.shape.first_child[hole] != kNone)
    throw std::invalid_argument("hole must be a leaf");
  Builder b;
  int32_t nc = context.size();
  for (int32_t u = 0; u < nc; ++u) b.add(context.labels[u]);
  for (int32_t u = 0; u < g.size(); ++u) b.add(g.labels[u]);
  auto add_chain = [&](int32_t first, int32_t base, const Forest& f,
                       std::vector<int32_t>& out) {
    for (int32_t c = first; c != kNone; c = f.shape.next_sibling[c]) {
      if (&f == &context && c == hole) {
        for (int32_t r = g.shape.first_root(); r != kNone;
             r = g.shape.next_sibling[r])
          out.push_back(nc + r);
      } else {
        out.push_back(base + c);
      }
    }
  };
  add_chain(context.shape.first_root(), 0, context, b.roots);
  for (int32_t u = 0; u < nc; ++u)
    if (u != hole)
      add_chain(context.shape.first_child[u], 0, context, b.children[u]);
  for (int32_t u = 0; u < g.size(); ++u)
    add_chain(g.shape.first_child[u], nc, g, b.children[nc + u]);
  return b.build(context.alphabet);
}

std::vector<int32_t> subtree_values(const Recognizer& rec, const Forest& f) {
  const ForestAlgebra& alg = rec.algebra;
  int32_t n = f.size();
  std::vector<int32_t> val(n, alg.h.one), acc(n, alg.h.one);
  int32_t cur = f.shape.first_root();
  std::vector<int32_t> path;
  while (cur != kNone || !path.empty()) {
    while (cur != kNone) {
      path.push_back(cur);
      cur = f.shape.first_child[cur];
    }
    int32_t u = path.back();
    path.pop_back();
    if (f.labels[u] == kHole)
      throw std::invalid_argument("unexpected hole");
    val[u] = alg.act(rec.assign[f.labels[u]], acc[u]);
    if (!path.empty()) {
      int32_t p = path.back();
      acc[p] = alg.h.at(acc[p], val[u]);
    }
    cur = f.shape.next_sibling[u];
  }
  return val;
}

std::optional<std::pair<int32_t, int32_t>> find_idempotent_block(
    const MonoidTable& m, const std::vector<int32_t>& w) {
  int32_t q = static_cast<int32_t>(w.size());
  auto product = [&](int32_t i, int32_t j) {
    int32_t p = m.one;
    for (int32_t t = i; t < j; ++t) p = m.at(p, w[t]);
    return p;
  };
  // pigeonhole pass on prefix products
  std::unordered_map<int32_t, int32_t> first_at;
  int32_t prefix = m.one;
  first_at[prefix] = 0;
  for (int32_t i = 1; i <= q; ++i) {
    prefix = m.at(prefix, w[i - 1]);
    auto [it, fresh] = first_at.emplace(prefix, i);
    if (!fresh) {
      int32_t x = product(it->second, i);
      if (m.at(x, x) == x) return std::make_pair(it->second, i);
    }
  }
  // exhaustive fallback
  for (int32_t i = 0; i < q; ++i) {
    int32_t p = m.one;
    for (int32_t j = i + 1; j <= q; ++j) {
      p = m.at(p, w[j - 1]);
      if (m.at(p, p) == p) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

namespace {

// Copy of f in which the child forest of `cut` is replaced by a single hole
// leaf; when top != kNone only the child forest of `top` is kept (with the
// same cut applied). top == cut is not used.
Forest slice_context(const Forest& f, int32_t top, int32_t cut) {
  Builder b;
  std::vector<int32_t> map(f.size(), kNone);
  // collect kept nodes: descendants of top (or all), excluding strict
  // descendants of cut
  std::vector<int32_t> stack;
  auto push_chain = [&](int32_t first) {
    std::vector<int32_t> tmp;
    for (int32_t c = first; c != kNone; c = f.shape.next_sibling[c])
      tmp.push_back(c);
    for (auto it = tmp.rbegin(); it != tmp.rend(); ++it) stack.push_back(*it);
  };
  push_chain(top == kNone ? f.shape.first_root() : f.shape.first_child[top]);
  std::vector<int32_t> order;
  while (!stack.empty()) {
    int32_t u = stack.back();
    stack.pop_back();
    order.push_back(u);
    if (u != cut) push_chain(f.shape.first_child[u]);
  }
  for (int32_t u : order) map[u] = b.add(f.labels[u]);
  for (int32_t u : order) {
    int32_t p = f.shape.parent[u];
    if ((top == kNone && p == kNone) || (top != kNone && p == top))
      b.roots.push_back(map[u]);
    else
      b.children[map[p]].push_back(map[u]);
  }
  int32_t hole = b.add(kHole);
  b.children[map[cut]].push_back(hole);
  return b.build(f.alphabet);
}

Forest child_forest(const Forest& f, int32_t node) {
  Builder b;
  std::vector<int32_t> map(f.size(), kNone);
  std::vector<int32_t> stack;
  auto push_chain = [&](int32_t first) {
    std::vector<int32_t> tmp;
    for (int32_t c = first; c != kNone; c = f.shape.next_sibling[c])
      tmp.push_back(c);
    for (auto it = tmp.rbegin(); it != tmp.rend(); ++it) stack.push_back(*it);
  };
  push_chain(f.shape.first_child[node]);
  std::vector<int32_t> order;
  while (!stack.empty()) {
    int32_t u = stack.back();
    stack.pop_back();
    order.push_back(u);
    push_chain(f.shape.first_child[u]);
  }
  for (int32_t u : order) map[u] = b.add(f.labels[u]);
  for (int32_t u : order) {
    int32_t p = f.shape.parent[u];
    if (p == node)
      b.roots.push_back(map[u]);
    else
      b.children[map[p]].push_back(map[u]);
  }
  return b.build(f.alphabet);
}

Forest hole_only_context(const Alphabet& alphabet) {
  Builder b;
  b.roots.push_back(b.add(kHole));
  return b.build(alphabet);
}

}  // namespace

std::optional<Decomposition> find_idempotent_factor(
    const Forest& f, const Recognizer& rec,
    std::optional<int32_t> threshold) {
  const ForestAlgebra& alg = rec.algebra;
  int32_t t = threshold.value_or(std::max(alg.v.size, alg.h.size));
  if (f.size() == 0) return std::nullopt;
  std::vector<int32_t> val = subtree_values(rec, f);

  // wide case: first sibling set (document order) with more than t members
  auto chain_members = [&](int32_t first) {
    std::vector<int32_t> out;
    for (int32_t c = first; c != kNone; c = f.shape.next_sibling[c])
      out.push_back(c);
    return out;
  };
  std::optional<int32_t> wide_parent;  // kNone encoded as -2 for the roots
  std::vector<int32_t> siblings;
  {
    auto roots = chain_members(f.shape.first_root());
    if (static_cast<int32_t>(roots.size()) > t) {
      wide_parent = kNone;
      siblings = std::move(roots);
    } else {
      for (int32_t u = 0; u < f.size(); ++u) {
        auto ch = chain_members(f.shape.first_child[u]);
        if (static_cast<int32_t>(ch.size()) > t) {
          wide_parent = u;
          siblings = std::move(ch);
          break;
        }
      }
    }
  }
  if (wide_parent) {
    std::vector<int32_t> w(siblings.size());
    for (std::size_t i = 0; i < siblings.size(); ++i) w[i] = val[siblings[i]];
    if (auto block = find_idempotent_block(alg.h, w)) {
      auto [i, j] = *block;
      // factor: subtrees i..j-1 of the chain plus a trailing hole
      Builder fb;
      std::vector<int32_t> map(f.size(), kNone);
      for (int32_t s = i; s < j; ++s) {
        std::vector<int32_t> stack{siblings[s]};
        std::vector<int32_t> order;
        while (!stack.empty()) {
          int32_t u = stack.back();
          stack.pop_back();
          order.push_back(u);
          std::vector<int32_t> tmp;
          for (int32_t c = f.shape.first_child[u]; c != kNone;
               c = f.shape.next_sibling[c])
            tmp.push_back(c);
          for (auto it = tmp.rbegin(); it != tmp.rend(); ++it)
            stack.push_back(*it);
        }
        for (int32_t u : order) map[u] = fb.add(f.labels[u]);
        for (int32_t u : order) {
          if (u == siblings[s])
            fb.roots.push_back(map[u]);
          else
            fb.children[map[f.shape.parent[u]]].push_back(map[u]);
        }
      }
      fb.roots.push_back(fb.add(kHole));
      // outer: f with those subtrees replaced by one hole leaf
      Builder ob;
      std::vector<char> drop(f.size(), 0);
      for (int32_t s = i; s < j; ++s) drop[siblings[s]] = 1;
      std::vector<int32_t> omap(f.size(), kNone);
      std::vector<int32_t> order;
      std::vector<int32_t> stack;
      auto push_chain = [&](int32_t first) {
        std::vector<int32_t> tmp;
        for (int32_t c = first; c != kNone; c = f.shape.next_sibling[c])
          tmp.push_back(c);
        for (auto it = tmp.rbegin(); it != tmp.rend(); ++it)
          stack.push_back(*it);
      };
      push_chain(f.shape.first_root());
      while (!stack.empty()) {
        int32_t u = stack.back();
        stack.pop_back();
        if (drop[u]) continue;
        order.push_back(u);
        push_chain(f.shape.first_child[u]);
      }
      for (int32_t u : order) omap[u] = ob.add(f.labels[u]);
      int32_t hole = ob.add(kHole);
      auto emit_chain = [&](int32_t first, std::vector<int32_t>& out) {
        bool hole_emitted = false;
        for (int32_t c = first; c != kNone; c = f.shape.next_sibling[c]) {
          if (drop[c]) {
            if (!hole_emitted) {
              out.push_back(hole);
              hole_emitted = true;
            }
          } else {
            out.push_back(omap[c]);
          }
        }
      };
      emit_chain(f.shape.first_root(), ob.roots);
      for (int32_t u : order)
        emit_chain(f.shape.first_child[u], ob.children[omap[u]]);
      Decomposition d;
      d.outer = ob.build(f.alphabet);
      d.factor = fb.build(f.alphabet);
      d.inner.alphabet = f.alphabet;
      return d;
    }
  }

  // deep case: longest root-to-leaf path, smallest leaf id on ties
  std::vector<int32_t> depth(f.size(), 0);
  int32_t deepest = 0;
  for (int32_t u = 0; u < f.size(); ++u) {
    int32_t p = f.shape.parent[u];
    depth[u] = p == kNone ? 1 : depth[p] + 1;
    if (depth[u] > depth[deepest]) deepest = u;
  }
  if (depth[deepest] > t) {
    std::vector<int32_t> path_nodes;
    for (int32_t u = deepest; u != kNone; u = f.shape.parent[u])
      path_nodes.push_back(u);
    std::reverse(path_nodes.begin(), path_nodes.end());
    int32_t q = static_cast<int32_t>(path_nodes.size());
    std::vector<int32_t> w(q);
    for (int32_t i = 0; i < q; ++i) {
      int32_t u = path_nodes[i];
      int32_t left = alg.h.one, right = alg.h.one;
      for (int32_t c = f.shape.prev_sibling[u]; c != kNone;
           c = f.shape.prev_sibling[c])
        left = alg.h.at(val[c], left);
      for (int32_t c = f.shape.next_sibling[u]; c != kNone;
           c = f.shape.next_sibling[c])
        right = alg.h.at(right, val[c]);
      w[i] = alg.vh_sum(alg.hv_sum(left, rec.assign[f.labels[u]]), right);
    }
    if (auto block = find_idempotent_block(alg.v, w)) {
      auto [i, j] = *block;
      Decomposition d;
      d.outer = i == 0 ? hole_only_context(f.alphabet)
                       : slice_context(f, kNone, path_nodes[i - 1]);
      d.factor = slice_context(f, i == 0 ? kNone : path_nodes[i - 1],
                               path_nodes[j - 1]);
      d.inner = child_forest(f, path_nodes[j - 1]);
      return d;
    }
  }
  return std::nullopt;
}

}  // namespace dynforest
