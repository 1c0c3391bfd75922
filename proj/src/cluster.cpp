#include "dynforest/cluster.hpp"

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dynforest {

namespace {

// A node is a representative unless a merge bit on its incoming first-child
// or previous-sibling edge absorbed it into an earlier node's cluster.
bool is_repr(const ForestShape& shape, const Clustering& cl, int32_t u) {
  int32_t ps = shape.prev_sibling[u];
  if (ps != kNone) return !cl.merged_with_next_sibling[ps];
  int32_t p = shape.parent[u];
  if (p != kNone) return !cl.merged_with_first_child[p];
  return true;
}

// cluster_of[u] for every node; cluster ids follow representative document
// order. Both absorption edges point to smaller ids, so one forward pass
// suffices.
std::vector<int32_t> assign_clusters(const ForestShape& shape,
                                     const Clustering& cl,
                                     std::vector<int32_t>* reprs_out) {
  int32_t n = shape.size();
  std::vector<int32_t> cluster_of(n, kNone);
  std::vector<int32_t> reprs;
  for (int32_t u = 0; u < n; ++u) {
    if (is_repr(shape, cl, u)) {
      cluster_of[u] = static_cast<int32_t>(reprs.size());
      reprs.push_back(u);
    } else {
      int32_t ps = shape.prev_sibling[u];
      cluster_of[u] = cluster_of[ps != kNone ? ps : shape.parent[u]];
    }
  }
  if (reprs_out) *reprs_out = std::move(reprs);
  return cluster_of;
}

}  // namespace

Clustering trivial_clustering(const ForestShape& shape, int32_t k) {
  if (k < 1) throw std::invalid_argument("cluster size bound must be positive");
  int32_t n = shape.size();
  Clustering cl;
  cl.k = k;
  cl.merged_with_next_sibling.assign(n, 0);
  cl.merged_with_first_child.assign(n, 0);
  cl.csize.assign(n, 1);
  cl.has_border_node.assign(n, 0);
  cl.missing_sibling.assign(n, 0);
  for (int32_t u = 0; u < n; ++u) {
    cl.has_border_node[u] = shape.first_child[u] != kNone;
    cl.missing_sibling[u] = shape.next_sibling[u] != kNone;
  }
  return cl;
}

bool mergeable(const ForestShape& shape, const Clustering& cl, int32_t r1,
               int32_t r2) {
  if (r1 < 0 || r1 >= shape.size() || r2 < 0 || r2 >= shape.size())
    throw std::invalid_argument("merge test on nodes outside the forest");
  if (!is_repr(shape, cl, r1) || !is_repr(shape, cl, r2))
    throw std::invalid_argument("merge test requires cluster representatives");
  if (shape.first_child[r1] == r2) {
    // Upper cluster must be the singleton {r1}; the union gains r1 as a
    // border node exactly when the lower cluster's roots do not exhaust
    // r1's children.
    if (cl.csize[r1] != 1)
      throw std::invalid_argument(
          "first-child merge requires a singleton upper cluster");
    if (1 + cl.csize[r2] > cl.k) return false;
    return !(cl.has_border_node[r2] && cl.missing_sibling[r2]);
  }
  if (shape.next_sibling[r1] == r2) {
    // Sibling merge neither creates nor removes border nodes.
    if (cl.csize[r1] + cl.csize[r2] > cl.k) return false;
    return !(cl.has_border_node[r1] && cl.has_border_node[r2]);
  }
  throw std::invalid_argument("unsupported merge shape");
}

Clustering saturate(const ForestShape& shape, int32_t k) {
  Clustering cl = trivial_clustering(shape, k);
  int32_t n = shape.size();
  // Reverse document order is bottom-up: every descendant and every later
  // sibling of u is processed before u, so when u is reached its cluster is
  // still the singleton {u} and both merge partners are representatives.
  for (int32_t u = n - 1; u >= 0; --u) {
    ++cl.work;
    int32_t fc = shape.first_child[u];
    if (fc != kNone) {
      ++cl.work;
      if (mergeable(shape, cl, u, fc)) {
        cl.merged_with_first_child[u] = 1;
        cl.csize[u] = 1 + cl.csize[fc];
        cl.has_border_node[u] =
            cl.has_border_node[fc] | cl.missing_sibling[fc];
      }
    }
    int32_t ns = shape.next_sibling[u];
    if (ns != kNone) {
      ++cl.work;
      if (mergeable(shape, cl, u, ns)) {
        cl.merged_with_next_sibling[u] = 1;
        cl.csize[u] += cl.csize[ns];
        cl.has_border_node[u] |= cl.has_border_node[ns];
        cl.missing_sibling[u] = cl.missing_sibling[ns];
      }
    }
  }
  return cl;
}

namespace {

struct ClusterFacts {
  std::vector<std::vector<int32_t>> members;  // by cluster id, document order
  std::vector<std::set<int32_t>> borders;     // distinct border nodes
  std::vector<int32_t> cluster_of;
  std::vector<int32_t> reprs;
};

ClusterFacts gather_facts(const ForestShape& shape, const Clustering& cl) {
  ClusterFacts facts;
  facts.cluster_of = assign_clusters(shape, cl, &facts.reprs);
  facts.members.resize(facts.reprs.size());
  facts.borders.resize(facts.reprs.size());
  for (int32_t u = 0; u < shape.size(); ++u) {
    facts.members[facts.cluster_of[u]].push_back(u);
    int32_t p = shape.parent[u];
    if (p != kNone && facts.cluster_of[p] != facts.cluster_of[u])
      facts.borders[facts.cluster_of[p]].insert(p);
  }
  return facts;
}

bool fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

bool validate_clustering(const ForestShape& shape, const Clustering& cl,
                         std::string* why) {
  size_t n = static_cast<size_t>(shape.size());
  if (cl.k < 1) return fail(why, "cluster size bound must be positive");
  if (cl.merged_with_next_sibling.size() != n ||
      cl.merged_with_first_child.size() != n || cl.csize.size() != n ||
      cl.has_border_node.size() != n || cl.missing_sibling.size() != n)
    return fail(why, "clustering arrays do not match the forest size");
  ClusterFacts facts = gather_facts(shape, cl);
  for (size_t c = 0; c < facts.reprs.size(); ++c) {
    int32_t r = facts.reprs[c];
    std::string at = " (cluster of node " + std::to_string(r) + ")";
    if (static_cast<int32_t>(facts.members[c].size()) > cl.k)
      return fail(why, "cluster larger than k" + at);
    if (facts.borders[c].size() > 1)
      return fail(why, "cluster with two border nodes" + at);
    if (cl.csize[r] != static_cast<int32_t>(facts.members[c].size()))
      return fail(why, "stale size at representative" + at);
    if (cl.has_border_node[r] != (facts.borders[c].empty() ? 0 : 1))
      return fail(why, "stale border flag at representative" + at);
    // The cluster's roots are consecutive siblings; only the last of them
    // can have a sibling outside the cluster.
    uint8_t missing = 0;
    for (int32_t u : facts.members[c]) {
      int32_t p = shape.parent[u];
      bool root = p == kNone || facts.cluster_of[p] != static_cast<int32_t>(c);
      if (root && shape.next_sibling[u] != kNone &&
          facts.cluster_of[shape.next_sibling[u]] != static_cast<int32_t>(c))
        missing = 1;
    }
    if (cl.missing_sibling[r] != missing)
      return fail(why, "stale sibling flag at representative" + at);
  }
  return true;
}

bool is_saturated(const ForestShape& shape, const Clustering& cl,
                  std::string* why) {
  if (!validate_clustering(shape, cl, why)) return false;
  ClusterFacts facts = gather_facts(shape, cl);
  // Two clusters can only merge when some first-child or next-sibling edge
  // joins them. For each such edge, test the union by brute force.
  auto union_valid = [&](int32_t c1, int32_t c2) {
    if (static_cast<int32_t>(facts.members[c1].size() +
                             facts.members[c2].size()) > cl.k)
      return false;
    std::set<int32_t> inside(facts.members[c1].begin(),
                             facts.members[c1].end());
    inside.insert(facts.members[c2].begin(), facts.members[c2].end());
    std::set<int32_t> borders;
    for (int32_t u : inside) {
      for (int32_t c = shape.first_child[u]; c != kNone;
           c = shape.next_sibling[c])
        if (!inside.count(c)) borders.insert(u);
    }
    return borders.size() <= 1;
  };
  for (int32_t u = 0; u < shape.size(); ++u) {
    for (int32_t v : {shape.first_child[u], shape.next_sibling[u]}) {
      if (v == kNone || facts.cluster_of[u] == facts.cluster_of[v]) continue;
      if (union_valid(facts.cluster_of[u], facts.cluster_of[v]))
        return fail(why, "clusters of nodes " + std::to_string(u) + " and " +
                             std::to_string(v) + " are mergeable");
    }
  }
  return true;
}

int32_t cluster_count(const ForestShape& shape, const Clustering& cl) {
  int32_t count = 0;
  for (int32_t u = 0; u < shape.size(); ++u)
    if (is_repr(shape, cl, u)) ++count;
  return count;
}

std::string dump_clustering(const ForestShape& shape, const Clustering& cl) {
  ClusterFacts facts = gather_facts(shape, cl);
  std::ostringstream out;
  for (size_t c = 0; c < facts.reprs.size(); ++c) {
    out << "repr=" << facts.reprs[c] << " size=" << facts.members[c].size()
        << " border=" << (facts.borders[c].empty() ? 0 : 1) << " nodes=";
    for (size_t i = 0; i < facts.members[c].size(); ++i) {
      if (i) out << ",";
      out << facts.members[c][i];
    }
    out << "\n";
  }
  return out.str();
}

ClusterForest build_cluster_forest(const ForestShape& shape,
                                   const Clustering& cl) {
  ClusterForest cf;
  std::vector<int32_t> reprs;
  cf.cluster_of = assign_clusters(shape, cl, &reprs);
  int32_t nc = static_cast<int32_t>(reprs.size());
  cf.pos_in_cluster.assign(shape.size(), kNone);
  cf.induced.resize(nc);

  std::vector<std::vector<int32_t>> members(nc);
  std::vector<int32_t> border(nc, kNone);
  for (int32_t u = 0; u < shape.size(); ++u) {
    members[cf.cluster_of[u]].push_back(u);
    int32_t p = shape.parent[u];
    if (p != kNone && cf.cluster_of[p] != cf.cluster_of[u]) {
      int32_t c = cf.cluster_of[p];
      if (border[c] != kNone && border[c] != p)
        throw std::logic_error("cluster has two border nodes");
      border[c] = p;
    }
  }

  // The representative of a cluster is its first root, so the enclosing
  // cluster is the one containing that root's parent. Representative order
  // makes parent ids smaller than child ids and sorts siblings correctly.
  std::vector<int32_t> cparent(nc, kNone);
  for (int32_t c = 0; c < nc; ++c) {
    int32_t p = shape.parent[reprs[c]];
    if (p != kNone) cparent[c] = cf.cluster_of[p];
  }
  std::vector<int32_t> renum;
  cf.shape = shape_from_parents(cparent, &renum);
  cf.cluster_to_node = renum;
  cf.node_to_cluster.assign(nc, kNone);
  for (int32_t c = 0; c < nc; ++c) cf.node_to_cluster[renum[c]] = c;

  for (int32_t c = 0; c < nc; ++c) {
    InducedForest& ind = cf.induced[c];
    ind.border = border[c];
    int32_t s = static_cast<int32_t>(members[c].size());
    std::map<int32_t, int32_t> local;
    for (int32_t i = 0; i < s; ++i) local[members[c][i]] = i;
    std::vector<int32_t> lparent(s, kNone);
    for (int32_t i = 0; i < s; ++i) {
      int32_t p = shape.parent[members[c][i]];
      if (p != kNone && cf.cluster_of[p] == c) lparent[i] = local[p];
    }
    if (border[c] != kNone) lparent.push_back(local[border[c]]);
    std::vector<int32_t> lrenum;
    ind.shape = shape_from_parents(lparent, &lrenum);
    ind.members.assign(lparent.size(), kNone);
    for (int32_t i = 0; i < s; ++i) {
      ind.members[lrenum[i]] = members[c][i];
      cf.pos_in_cluster[members[c][i]] = lrenum[i];
    }
    if (border[c] != kNone) ind.hole_pos = lrenum[s];
  }
  return cf;
}

}  // namespace dynforest
