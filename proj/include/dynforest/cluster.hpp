#pragma once

#include "dynforest/forest.hpp"

namespace dynforest {

// Partition of a forest into clusters of at most k nodes, each connected in
// the first-child/next-sibling graph and containing at most one border node
// (a node with a child outside the cluster). Encoded as merge bits on the
// first-child and next-sibling edges; a cluster is a connected component of
// the marked edges. The representative of a cluster is its first node in
// document order. csize / has_border_node / missing_sibling are maintained
// only at representatives.
struct Clustering {
  int32_t k = 2;
  std::vector<uint8_t> merged_with_next_sibling;
  std::vector<uint8_t> merged_with_first_child;
  std::vector<int32_t> csize;
  std::vector<uint8_t> has_border_node;
  std::vector<uint8_t> missing_sibling;  // a cluster root has a sibling outside
  uint64_t work = 0;                     // nodes visited + merge attempts
};

Clustering trivial_clustering(const ForestShape& shape, int32_t k);

// Constant-time merge test for the two shapes saturation uses:
//  - r2 is the first child of r1 and r1 is a singleton cluster, or
//  - r2 is the next sibling of r1 and both are representatives.
// Other call shapes are rejected.
bool mergeable(const ForestShape& shape, const Clustering& cl, int32_t r1,
               int32_t r2);

// Bottom-up pass that greedily merges each node with its first child's
// cluster, then with its next sibling's cluster. The result is saturated: no
// two clusters can be merged without breaking validity.
Clustering saturate(const ForestShape& shape, int32_t k);

// Brute-force validity check (sizes, border counts, scratch consistency).
bool validate_clustering(const ForestShape& shape, const Clustering& cl,
                         std::string* why = nullptr);
// validate_clustering plus absence of any mergeable adjacent pair.
bool is_saturated(const ForestShape& shape, const Clustering& cl,
                  std::string* why = nullptr);

int32_t cluster_count(const ForestShape& shape, const Clustering& cl);

// One line per cluster: "repr=<id> size=<s> border=<0|1> nodes=<ids>".
std::string dump_clustering(const ForestShape& shape, const Clustering& cl);

// Shape of one cluster, with a hole leaf appended as last child of the
// border node when the cluster has one. members maps positions to original
// node ids (kNone at the hole position).
struct InducedForest {
  ForestShape shape;
  std::vector<int32_t> members;
  int32_t hole_pos = kNone;
  int32_t border = kNone;  // original id of the border node
};

// Forest whose nodes are the clusters: the clusters hanging below the border
// node of C become children of C, ordered like their roots.
struct ClusterForest {
  ForestShape shape;
  std::vector<int32_t> cluster_of;       // original node -> cluster id
  std::vector<int32_t> pos_in_cluster;   // original node -> induced position
  std::vector<int32_t> cluster_to_node;  // cluster id -> node of shape
  std::vector<int32_t> node_to_cluster;  // node of shape -> cluster id
  std::vector<InducedForest> induced;    // indexed by cluster id
};

ClusterForest build_cluster_forest(const ForestShape& shape,
                                   const Clustering& cl);

}  // namespace dynforest
