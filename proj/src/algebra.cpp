#include "dynforest/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace dynforest {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int32_t>& v) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int32_t x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

using TableMap = std::unordered_map<std::vector<int32_t>, int32_t, VecHash>;

}  // namespace

int32_t idempotent_exponent(const MonoidTable& m, int32_t x) {
  int32_t p = x;
  for (int32_t e = 1; e <= 2 * m.size + 1; ++e) {
    if (m.at(p, p) == p) return e;
    p = m.at(p, x);
  }
  throw std::logic_error("no idempotent power found; table is not a monoid");
}

int32_t idempotent_power(const MonoidTable& m, int32_t x) {
  int32_t e = idempotent_exponent(m, x);
  int32_t p = x;
  for (int32_t i = 1; i < e; ++i) p = m.at(p, x);
  return p;
}

int64_t idempotent_exponent(const MonoidTable& m) {
  int64_t l = 1;
  for (int32_t x = 0; x < m.size; ++x) {
    int64_t e = idempotent_exponent(m, x);
    int64_t g = std::gcd(l, e);
    if (l / g > (int64_t{1} << 50) / e)
      throw CapError("idempotent exponent overflows");
    l = l / g * e;
  }
  return l;
}

std::vector<AlgebraViolation> validate_algebra(const ForestAlgebra& alg) {
  std::vector<AlgebraViolation> out;
  int32_t nv = alg.v.size, nh = alg.h.size;
  auto check_monoid = [&](const MonoidTable& m, const char* tag) {
    for (int32_t x = 0; x < m.size; ++x) {
      if (m.at(m.one, x) != x || m.at(x, m.one) != x)
        out.push_back({std::string(tag) + " neutral", {x}});
    }
    for (int32_t x = 0; x < m.size && out.size() < 32; ++x)
      for (int32_t y = 0; y < m.size; ++y)
        for (int32_t z = 0; z < m.size; ++z)
          if (m.at(m.at(x, y), z) != m.at(x, m.at(y, z))) {
            out.push_back({std::string(tag) + " associativity", {x, y, z}});
            break;
          }
  };
  check_monoid(alg.h, "H");
  check_monoid(alg.v, "V");
  for (int32_t v = 0; v < nv && out.size() < 32; ++v)
    for (int32_t w = 0; w < nv; ++w)
      for (int32_t h = 0; h < nh; ++h)
        if (alg.act(alg.v.at(v, w), h) != alg.act(v, alg.act(w, h))) {
          out.push_back({"action composition", {v, w, h}});
          break;
        }
  for (int32_t h = 0; h < nh; ++h)
    if (alg.act(alg.v.one, h) != h) out.push_back({"action neutral", {h}});
  for (int32_t v = 0; v < nv && out.size() < 32; ++v)
    for (int32_t h = 0; h < nh; ++h)
      for (int32_t g = 0; g < nh; ++g) {
        if (alg.act(alg.vh_sum(v, h), g) != alg.h.at(alg.act(v, g), h)) {
          out.push_back({"mixing right", {v, h, g}});
          break;
        }
        if (alg.act(alg.hv_sum(h, v), g) != alg.h.at(h, alg.act(v, g))) {
          out.push_back({"mixing left", {v, h, g}});
          break;
        }
      }
  for (int32_t v1 = 0; v1 < nv; ++v1)
    for (int32_t v2 = v1 + 1; v2 < nv; ++v2) {
      bool differ = false;
      for (int32_t h = 0; h < nh; ++h)
        if (alg.act(v1, h) != alg.act(v2, h)) {
          differ = true;
          break;
        }
      if (!differ) out.push_back({"faithfulness", {v1, v2}});
    }
  return out;
}

VHLabel eval_vh_forest(const ForestAlgebra& alg, const ForestShape& shape,
                       std::span<const VHLabel> labels) {
  int32_t n = shape.size();
  if (static_cast<int32_t>(labels.size()) != n)
    throw std::invalid_argument("label vector size mismatch");
  VHLabel root_acc{false, alg.h.one};
  if (n == 0) return root_acc;
  std::vector<VHLabel> acc(n, VHLabel{false, alg.h.one});
  auto combine = [&](VHLabel l, VHLabel r) -> VHLabel {
    if (!l.is_v && !r.is_v) return {false, alg.h.at(l.elt, r.elt)};
    if (!l.is_v) return {true, alg.hv_sum(l.elt, r.elt)};
    if (!r.is_v) return {true, alg.vh_sum(l.elt, r.elt)};
    throw std::invalid_argument("two distinguished leaves");
  };
  int32_t cur = shape.first_root();
  std::vector<int32_t> path;
  while (cur != kNone || !path.empty()) {
    while (cur != kNone) {
      path.push_back(cur);
      cur = shape.first_child[cur];
    }
    int32_t u = path.back();
    path.pop_back();
    VHLabel val;
    if (shape.is_leaf(u)) {
      val = labels[u];
    } else {
      if (!labels[u].is_v)
        throw std::invalid_argument("internal node labeled by an H element");
      VHLabel c = acc[u];
      val = c.is_v ? VHLabel{true, alg.v.at(labels[u].elt, c.elt)}
                   : VHLabel{false, alg.act(labels[u].elt, c.elt)};
    }
    VHLabel& target = path.empty() ? root_acc : acc[path.back()];
    target = combine(target, val);
    cur = shape.next_sibling[u];
  }
  return root_acc;
}

int32_t letter_h(const Recognizer& rec, int32_t letter) {
  return rec.algebra.act(rec.assign[letter], rec.algebra.h.one);
}

namespace {

VHLabel eval_letter_forest(const Recognizer& rec, const Forest& f) {
  std::vector<VHLabel> labels(f.size());
  for (int32_t u = 0; u < f.size(); ++u) {
    int32_t l = f.labels[u];
    if (l == kHole) {
      if (!f.shape.is_leaf(u))
        throw std::invalid_argument("hole at an internal node");
      labels[u] = {true, rec.algebra.v.one};
    } else if (f.shape.is_leaf(u)) {
      labels[u] = {false, letter_h(rec, l)};
    } else {
      labels[u] = {true, rec.assign[l]};
    }
  }
  return eval_vh_forest(rec.algebra, f.shape, labels);
}

}  // namespace

int32_t eval_morphism(const Recognizer& rec, const Forest& f) {
  VHLabel r = eval_letter_forest(rec, f);
  if (r.is_v) throw std::invalid_argument("forest contains a hole");
  return r.elt;
}

int32_t eval_context(const Recognizer& rec, const Forest& context) {
  VHLabel r = eval_letter_forest(rec, context);
  if (!r.is_v) throw std::invalid_argument("context contains no hole");
  return r.elt;
}

namespace {

// Interning pool with a cap, shared by the two monoid constructions.
struct Pool {
  std::vector<std::vector<int32_t>> tabs;
  TableMap ids;
  int32_t cap;
  const char* what;

  explicit Pool(int32_t cap_, const char* what_) : cap(cap_), what(what_) {}

  std::pair<int32_t, bool> intern(std::vector<int32_t> t) {
    auto it = ids.find(t);
    if (it != ids.end()) return {it->second, false};
    if (static_cast<int32_t>(tabs.size()) >= cap)
      throw CapError(std::string(what) + " size exceeds cap " +
                     std::to_string(cap));
    int32_t id = static_cast<int32_t>(tabs.size());
    ids.emplace(t, id);
    tabs.push_back(std::move(t));
    return {id, true};
  }

  int32_t find(const std::vector<int32_t>& t) const {
    auto it = ids.find(t);
    if (it == ids.end())
      throw std::logic_error(std::string(what) + " not closed under product");
    return it->second;
  }

  int32_t size() const { return static_cast<int32_t>(tabs.size()); }
};

}  // namespace

Recognizer transition_algebra(const ForestAutomaton& a, int32_t cap) {
  int32_t np = a.num_word_states();
  int32_t nq = a.num_tree_states();
  int32_t q0 = a.horizontal.initial;

  // Horizontal monoid: word-state transformations realized by forests,
  // generated by the transformations of single trees. The set of reachable
  // tree states and the monoid grow in a mutual fixpoint.
  Pool hp(cap, "horizontal monoid");
  std::vector<int32_t> identity(np);
  std::iota(identity.begin(), identity.end(), 0);
  hp.intern(identity);
  std::vector<int32_t> gen_of_q(nq, kNone);  // h id of the one-tree forest
  std::vector<int32_t> hgens;
  std::vector<int32_t> done;  // per element: generators already applied
  int32_t scanned = 0;
  done.push_back(0);
  for (;;) {
    bool progress = false;
    while (scanned < hp.size()) {
      int32_t x = scanned++;
      int32_t p = hp.tabs[x][q0];
      for (int32_t letter = 0; letter < a.alphabet.size(); ++letter) {
        int32_t q = a.tree_state(p, letter);
        if (gen_of_q[q] != kNone) continue;
        std::vector<int32_t> t(np);
        for (int32_t s = 0; s < np; ++s) t[s] = a.horizontal.next(s, q);
        auto [id, fresh] = hp.intern(std::move(t));
        gen_of_q[q] = id;
        while (static_cast<int32_t>(done.size()) < hp.size()) done.push_back(0);
        hgens.push_back(id);
        progress = true;
      }
    }
    for (int32_t x = 0; x < hp.size(); ++x) {
      while (done[x] < static_cast<int32_t>(hgens.size())) {
        const std::vector<int32_t>& g = hp.tabs[hgens[done[x]++]];
        std::vector<int32_t> t(np);
        const std::vector<int32_t>& f = hp.tabs[x];
        for (int32_t s = 0; s < np; ++s) t[s] = g[f[s]];
        auto [id, fresh] = hp.intern(std::move(t));
        if (fresh) {
          done.push_back(0);
          progress = true;
        }
      }
    }
    if (!progress && scanned == hp.size()) break;
  }
  int32_t nh = hp.size();

  if (static_cast<double>(nh) * nh > 2e8)
    throw CapError("horizontal monoid too large to tabulate");
  // Dense H multiplication on ids.
  MonoidTable hm;
  hm.size = nh;
  hm.one = 0;
  hm.mul.assign(static_cast<std::size_t>(nh) * nh, 0);
  {
    std::vector<int32_t> t(np);
    for (int32_t i = 0; i < nh; ++i)
      for (int32_t j = 0; j < nh; ++j) {
        const auto& f = hp.tabs[i];
        const auto& g = hp.tabs[j];
        for (int32_t s = 0; s < np; ++s) t[s] = g[f[s]];
        hm.mul[i * nh + j] = hp.find(t);
      }
  }

  // Vertical monoid: functions H -> H realized by contexts. Generated by
  // left/right multiplication with one-tree forests and by wrapping the hole
  // in a labeled node; arbitrary sibling extensions arise by composition.
  Pool vp(cap, "vertical monoid");
  std::vector<int32_t> vid(nh);
  std::iota(vid.begin(), vid.end(), 0);
  vp.intern(vid);
  std::vector<std::vector<int32_t>> vgens;
  for (int32_t q = 0; q < nq; ++q) {
    if (gen_of_q[q] == kNone) continue;
    int32_t g = gen_of_q[q];
    std::vector<int32_t> lm(nh), rm(nh);
    for (int32_t x = 0; x < nh; ++x) {
      lm[x] = hm.at(g, x);
      rm[x] = hm.at(x, g);
    }
    vgens.push_back(std::move(lm));
    vgens.push_back(std::move(rm));
  }
  for (int32_t letter = 0; letter < a.alphabet.size(); ++letter) {
    std::vector<int32_t> w(nh);
    for (int32_t x = 0; x < nh; ++x)
      w[x] = gen_of_q[a.tree_state(hp.tabs[x][q0], letter)];
    vgens.push_back(std::move(w));
  }
  for (std::size_t head = 0; head < static_cast<std::size_t>(vp.size());
       ++head) {
    std::vector<int32_t> f = vp.tabs[head];  // copy: tabs may reallocate
    for (const auto& g : vgens) {
      std::vector<int32_t> t(nh);
      for (int32_t x = 0; x < nh; ++x) t[x] = f[g[x]];
      vp.intern(std::move(t));
    }
  }
  int32_t nv = vp.size();
  if (static_cast<double>(nv) * nv + 3.0 * nv * nh > 2e8)
    throw CapError("vertical monoid too large to tabulate");

  Recognizer rec;
  rec.alphabet = a.alphabet;
  ForestAlgebra& alg = rec.algebra;
  alg.h = hm;
  alg.v.size = nv;
  alg.v.one = 0;
  alg.v.mul.assign(static_cast<std::size_t>(nv) * nv, 0);
  {
    std::vector<int32_t> t(nh);
    for (int32_t i = 0; i < nv; ++i)
      for (int32_t j = 0; j < nv; ++j) {
        const auto& f = vp.tabs[i];
        const auto& g = vp.tabs[j];
        for (int32_t x = 0; x < nh; ++x) t[x] = f[g[x]];
        alg.v.mul[i * nv + j] = vp.find(t);
      }
  }
  alg.act_.assign(static_cast<std::size_t>(nv) * nh, 0);
  alg.vh_sum_.assign(static_cast<std::size_t>(nv) * nh, 0);
  alg.hv_sum_.assign(static_cast<std::size_t>(nh) * nv, 0);
  {
    std::vector<int32_t> t(nh);
    for (int32_t i = 0; i < nv; ++i) {
      const auto& f = vp.tabs[i];
      for (int32_t x = 0; x < nh; ++x) alg.act_[i * nh + x] = f[x];
      for (int32_t h = 0; h < nh; ++h) {
        for (int32_t x = 0; x < nh; ++x) t[x] = hm.at(f[x], h);
        alg.vh_sum_[i * nh + h] = vp.find(t);
        for (int32_t x = 0; x < nh; ++x) t[x] = hm.at(h, f[x]);
        alg.hv_sum_[h * nv + i] = vp.find(t);
      }
    }
  }
  rec.assign.resize(a.alphabet.size());
  for (int32_t letter = 0; letter < a.alphabet.size(); ++letter) {
    std::vector<int32_t> w(nh);
    for (int32_t x = 0; x < nh; ++x)
      w[x] = gen_of_q[a.tree_state(hp.tabs[x][q0], letter)];
    rec.assign[letter] = vp.find(w);
  }
  rec.accepting.resize(nh);
  for (int32_t x = 0; x < nh; ++x)
    rec.accepting[x] = a.horizontal.is_final(hp.tabs[x][q0]) ? 1 : 0;
  return rec;
}

namespace {

// Groups rows by signature; class ids follow first occurrence in id order.
template <class Sig>
std::pair<std::vector<int32_t>, int32_t> group_by(
    const std::vector<Sig>& sigs) {
  std::map<Sig, int32_t> seen;
  std::vector<int32_t> cls(sigs.size());
  int32_t next = 0;
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    auto [it, fresh] = seen.emplace(sigs[i], next);
    if (fresh) ++next;
    cls[i] = it->second;
  }
  return {cls, next};
}

}  // namespace

Recognizer minimize_to_syntactic(const Recognizer& rec) {
  const ForestAlgebra& alg = rec.algebra;
  int32_t nv = alg.v.size, nh = alg.h.size;
  if (static_cast<double>(nv) * nh > 4e8)
    throw CapError("algebra too large to minimize");

  std::vector<std::vector<char>> hsig(nh, std::vector<char>(nv));
  for (int32_t h = 0; h < nh; ++h)
    for (int32_t v = 0; v < nv; ++v)
      hsig[h][v] = rec.accepting[alg.act(v, h)];
  auto [clsH, nH] = group_by(hsig);

  std::vector<std::vector<int32_t>> vsig(nv, std::vector<int32_t>(nh));
  for (int32_t v = 0; v < nv; ++v)
    for (int32_t h = 0; h < nh; ++h) vsig[v][h] = clsH[alg.act(v, h)];
  auto [clsV, nV] = group_by(vsig);

  std::vector<int32_t> repH(nH, kNone), repV(nV, kNone);
  for (int32_t h = 0; h < nh; ++h)
    if (repH[clsH[h]] == kNone) repH[clsH[h]] = h;
  for (int32_t v = 0; v < nv; ++v)
    if (repV[clsV[v]] == kNone) repV[clsV[v]] = v;

  // Fixpoint check: refining once more with class representatives must not
  // split any class.
  {
    std::vector<std::vector<char>> hsig2(nh, std::vector<char>(nV));
    for (int32_t h = 0; h < nh; ++h)
      for (int32_t c = 0; c < nV; ++c)
        hsig2[h][c] = rec.accepting[alg.act(repV[c], h)];
    auto [clsH2, nH2] = group_by(hsig2);
    if (nH2 != nH || clsH2 != clsH)
      throw std::logic_error("syntactic refinement did not reach a fixpoint");
  }

  Recognizer out;
  out.alphabet = rec.alphabet;
  ForestAlgebra& q = out.algebra;
  q.h.size = nH;
  q.h.one = clsH[alg.h.one];
  q.v.size = nV;
  q.v.one = clsV[alg.v.one];
  q.h.mul.assign(static_cast<std::size_t>(nH) * nH, 0);
  q.v.mul.assign(static_cast<std::size_t>(nV) * nV, 0);
  q.act_.assign(static_cast<std::size_t>(nV) * nH, 0);
  q.vh_sum_.assign(static_cast<std::size_t>(nV) * nH, 0);
  q.hv_sum_.assign(static_cast<std::size_t>(nH) * nV, 0);
  for (int32_t i = 0; i < nH; ++i)
    for (int32_t j = 0; j < nH; ++j)
      q.h.mul[i * nH + j] = clsH[alg.h.at(repH[i], repH[j])];
  for (int32_t i = 0; i < nV; ++i)
    for (int32_t j = 0; j < nV; ++j)
      q.v.mul[i * nV + j] = clsV[alg.v.at(repV[i], repV[j])];
  for (int32_t i = 0; i < nV; ++i)
    for (int32_t j = 0; j < nH; ++j) {
      q.act_[i * nH + j] = clsH[alg.act(repV[i], repH[j])];
      q.vh_sum_[i * nH + j] = clsV[alg.vh_sum(repV[i], repH[j])];
      q.hv_sum_[j * nV + i] = clsV[alg.hv_sum(repH[j], repV[i])];
    }
  // Congruence consistency over all pairs, not only representatives.
  for (int32_t i = 0; i < nh; ++i)
    for (int32_t j = 0; j < nh; ++j)
      if (clsH[alg.h.at(i, j)] != q.h.at(clsH[i], clsH[j]))
        throw std::logic_error("syntactic relation is not a congruence (hh)");
  for (int32_t i = 0; i < nv; ++i)
    for (int32_t j = 0; j < nv; ++j)
      if (clsV[alg.v.at(i, j)] != q.v.at(clsV[i], clsV[j]))
        throw std::logic_error("syntactic relation is not a congruence (vv)");
  for (int32_t i = 0; i < nv; ++i)
    for (int32_t j = 0; j < nh; ++j) {
      if (clsH[alg.act(i, j)] != q.act(clsV[i], clsH[j]))
        throw std::logic_error("syntactic relation is not a congruence (act)");
      if (clsV[alg.vh_sum(i, j)] != q.vh_sum(clsV[i], clsH[j]))
        throw std::logic_error(
            "syntactic relation is not a congruence (vh_sum)");
      if (clsV[alg.hv_sum(j, i)] != q.hv_sum(clsH[j], clsV[i]))
        throw std::logic_error(
            "syntactic relation is not a congruence (hv_sum)");
    }
  out.accepting.assign(nH, 0);
  for (int32_t h = 0; h < nh; ++h) {
    if (rec.accepting[h]) out.accepting[clsH[h]] = 1;
  }
  for (int32_t h = 0; h < nh; ++h)
    if ((rec.accepting[h] != 0) != (out.accepting[clsH[h]] != 0))
      throw std::logic_error("accepting set not saturated by the congruence");
  out.assign.resize(rec.assign.size());
  for (std::size_t a = 0; a < rec.assign.size(); ++a)
    out.assign[a] = clsV[rec.assign[a]];
  return out;
}

int32_t distinguishing_context(const Recognizer& rec, int32_t h1, int32_t h2) {
  const auto& alg = rec.algebra;
  for (int32_t v = 0; v < alg.v.size; ++v)
    if (rec.accepting[alg.act(v, h1)] != rec.accepting[alg.act(v, h2)])
      return v;
  throw std::logic_error("H elements are syntactically equivalent");
}

std::pair<int32_t, int32_t> distinguishing_pair(const Recognizer& rec,
                                                int32_t v1, int32_t v2) {
  const auto& alg = rec.algebra;
  for (int32_t w = 0; w < alg.v.size; ++w)
    for (int32_t h = 0; h < alg.h.size; ++h)
      if (rec.accepting[alg.act(w, alg.act(v1, h))] !=
          rec.accepting[alg.act(w, alg.act(v2, h))])
        return {w, h};
  throw std::logic_error("V elements are syntactically equivalent");
}

namespace {

struct NameCand {
  int64_t nodes;
  std::string text;
  bool is_v;
  int32_t elt;

  bool operator>(const NameCand& o) const {
    if (nodes != o.nodes) return nodes > o.nodes;
    if (text.size() != o.text.size()) return text.size() > o.text.size();
    if (text != o.text) return text > o.text;
    if (is_v != o.is_v) return is_v > o.is_v;
    return elt > o.elt;
  }
};

}  // namespace

void assign_names(Recognizer& rec) {
  ForestAlgebra& alg = rec.algebra;
  if (alg.v.size + alg.h.size > 4000)
    throw CapError("element naming supported up to 4000 elements");
  alg.v_names.assign(alg.v.size, "");
  alg.h_names.assign(alg.h.size, "");
  std::vector<char> v_done(alg.v.size, 0), h_done(alg.h.size, 0);
  struct Named {
    int32_t elt;
    std::string text;
    int64_t nodes;
  };
  std::vector<Named> hf, vf;  // finalized, in finalization order
  std::priority_queue<NameCand, std::vector<NameCand>, std::greater<>> pq;
  pq.push({0, "", false, alg.h.one});
  pq.push({1, "_", true, alg.v.one});
  while (!pq.empty()) {
    NameCand c = pq.top();
    pq.pop();
    auto& done = c.is_v ? v_done : h_done;
    if (done[c.elt]) continue;
    done[c.elt] = 1;
    (c.is_v ? alg.v_names : alg.h_names)[c.elt] =
        c.text.empty() ? std::string("ε") : c.text;
    // wrap in a labeled node
    for (int32_t a = 0; a < rec.alphabet.size(); ++a) {
      std::string t = rec.alphabet.name(a);
      if (!c.text.empty()) t += "(" + c.text + ")";
      int32_t e = c.is_v ? alg.v.at(rec.assign[a], c.elt)
                         : alg.act(rec.assign[a], c.elt);
      pq.push({c.nodes + 1, std::move(t), c.is_v, e});
    }
    // concatenate with previously finalized terms (the empty forest adds
    // nothing new and is skipped)
    if (c.is_v) {
      for (const auto& f : hf) {
        if (f.text.empty()) continue;
        pq.push({c.nodes + f.nodes, f.text + "," + c.text, true,
                 alg.hv_sum(f.elt, c.elt)});
        pq.push({c.nodes + f.nodes, c.text + "," + f.text, true,
                 alg.vh_sum(c.elt, f.elt)});
      }
      vf.push_back({c.elt, c.text, c.nodes});
    } else {
      if (!c.text.empty()) {
        for (const auto& f : hf) {
          if (f.text.empty()) continue;
          pq.push({c.nodes + f.nodes, c.text + "," + f.text, false,
                   alg.h.at(c.elt, f.elt)});
          pq.push({c.nodes + f.nodes, f.text + "," + c.text, false,
                   alg.h.at(f.elt, c.elt)});
        }
        for (const auto& f : vf) {
          pq.push({c.nodes + f.nodes, c.text + "," + f.text, true,
                   alg.hv_sum(c.elt, f.elt)});
          pq.push({c.nodes + f.nodes, f.text + "," + c.text, true,
                   alg.vh_sum(f.elt, c.elt)});
        }
      }
      hf.push_back({c.elt, c.text, c.nodes});
    }
  }
  for (char d : v_done)
    if (!d) throw std::logic_error("unreachable V element; cannot name");
  for (char d : h_done)
    if (!d) throw std::logic_error("unreachable H element; cannot name");
}

namespace {

int64_t label_run_count(const std::string& s) {
  auto is_label = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#';
  };
  int64_t runs = 0;
  bool in_run = false;
  for (char c : s) {
    if (is_label(c)) {
      if (!in_run) ++runs;
      in_run = true;
    } else {
      in_run = false;
    }
  }
  return runs;
}

std::vector<int32_t> name_order(const std::vector<std::string>& names) {
  std::vector<int32_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    auto key = [&](int32_t i) {
      return std::make_tuple(label_run_count(names[i]), names[i].size(),
                             std::cref(names[i]));
    };
    return key(a) < key(b);
  });
  return order;
}

}  // namespace

std::string dump_algebra(const Recognizer& rec) {
  Recognizer local;
  const Recognizer* r = &rec;
  if (rec.algebra.v_names.empty() || rec.algebra.h_names.empty()) {
    local = rec;
    assign_names(local);
    r = &local;
  }
  const ForestAlgebra& alg = r->algebra;
  auto vorder = name_order(alg.v_names);
  auto horder = name_order(alg.h_names);
  std::ostringstream out;
  auto list = [&](const std::vector<int32_t>& order,
                  const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i) s += " | ";
      s += names[order[i]];
    }
    return s;
  };
  out << "V (" << alg.v.size << "): " << list(vorder, alg.v_names) << '\n';
  out << "H (" << alg.h.size << "): " << list(horder, alg.h_names) << '\n';
  out << "accepting:";
  bool first = true;
  for (int32_t h : horder)
    if (r->accepting[h]) {
      out << (first ? " " : " | ") << alg.h_names[h];
      first = false;
    }
  out << '\n';
  for (int32_t a = 0; a < r->alphabet.size(); ++a)
    out << "assign: " << r->alphabet.name(a) << " -> "
        << alg.v_names[r->assign[a]] << '\n';
  auto table = [&](const char* title, const std::vector<int32_t>& rows,
                   const std::vector<std::string>& row_names,
                   const std::vector<int32_t>& cols, auto cell,
                   const std::vector<std::string>& res_names) {
    out << "table " << title << ":\n";
    for (int32_t i : rows) {
      out << row_names[i] << " :";
      bool f = true;
      for (int32_t j : cols) {
        out << (f ? " " : " | ") << res_names[cell(i, j)];
        f = false;
      }
      out << '\n';
    }
  };
  table("HH", horder, alg.h_names, horder,
        [&](int32_t i, int32_t j) { return alg.h.at(i, j); }, alg.h_names);
  table("VV", vorder, alg.v_names, vorder,
        [&](int32_t i, int32_t j) { return alg.v.at(i, j); }, alg.v_names);
  table("VH_act", vorder, alg.v_names, horder,
        [&](int32_t i, int32_t j) { return alg.act(i, j); }, alg.h_names);
  table("VH_sum", vorder, alg.v_names, horder,
        [&](int32_t i, int32_t j) { return alg.vh_sum(i, j); }, alg.v_names);
  table("HV_sum", horder, alg.h_names, vorder,
        [&](int32_t i, int32_t j) { return alg.hv_sum(i, j); }, alg.v_names);
  return out.str();
}

}  // namespace dynforest
