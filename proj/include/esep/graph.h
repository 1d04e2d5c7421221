// Copyright 2026 The esep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Directed mixed graphs as immutable values, plus the structural queries the
// separation criteria are built from.

#ifndef ESEP_GRAPH_H_
#define ESEP_GRAPH_H_

#include <array>
#include <compare>
#include <span>
#include <vector>

#include "esep/node_set.h"

namespace esep {

struct DirectedEdge {
  int from = 0;
  int to = 0;
  friend constexpr auto operator<=>(const DirectedEdge&,
                                    const DirectedEdge&) = default;
};

// Unordered pair, normalized so that a <= b.
struct BidirectedEdge {
  int a = 0;
  int b = 0;
  friend constexpr auto operator<=>(const BidirectedEdge&,
                                    const BidirectedEdge&) = default;
};

// A directed mixed graph on nodes {0, ..., d-1}, d <= kMaxNodes.
//
// Edge sets are stored as one bit row per node, so the directed edge i -> j
// is bit j of row i. Directed self-loops are allowed. A bidirected self-loop
// [v,v] is representable because latent projection can produce one; the
// enumeration universe never contains them.
//
// Dmg is an immutable value: every with_/without_ call returns a new graph.
class Dmg {
 public:
  Dmg() = default;
  explicit Dmg(int node_count);

  static Dmg from_edges(int node_count, std::span<const DirectedEdge> directed,
                        std::span<const BidirectedEdge> bidirected = {});

  int node_count() const { return d_; }
  NodeSet nodes() const { return NodeSet::range(d_); }

  bool has_directed(int from, int to) const;
  bool has_bidirected(int a, int b) const;
  bool has_self_loop(int v) const { return has_directed(v, v); }

  [[nodiscard]] Dmg with_directed(int from, int to) const;
  [[nodiscard]] Dmg without_directed(int from, int to) const;
  [[nodiscard]] Dmg with_bidirected(int a, int b) const;
  [[nodiscard]] Dmg without_bidirected(int a, int b) const;

  NodeSet children(int v) const;
  NodeSet parents(int v) const;
  NodeSet siblings(int v) const;

  // Canonical order: lexicographic on (from, to) and on (a, b).
  std::vector<DirectedEdge> directed_edges() const;
  std::vector<BidirectedEdge> bidirected_edges() const;
  int directed_count() const;
  int bidirected_count() const;

  bool is_dg() const { return bidirected_count() == 0; }

  friend bool operator==(const Dmg&, const Dmg&) = default;

 private:
  void check_node(int v) const;

  int d_ = 0;
  std::array<NodeSet, kMaxNodes> out_{};
  std::array<NodeSet, kMaxNodes> in_{};
  std::array<NodeSet, kMaxNodes> bi_{};
};

// Union over members of s. Intra-set edges make members parents of each other.
NodeSet parents(const Dmg& g, NodeSet s);
NodeSet children(const Dmg& g, NodeSet s);
// Reflexive-transitive closures along directed edges, so s is always included.
NodeSet ancestors(const Dmg& g, NodeSet s);
NodeSet descendants(const Dmg& g, NodeSet s);

// True iff there is no non-trivial directed walk from a node to itself.
// A self-loop counts as such a walk.
bool is_acyclic(const Dmg& g);
// Same, but self-loops are ignored.
bool is_acyclic_up_to_self_loops(const Dmg& g);

struct SccPartition {
  // Node -> component id.
  std::vector<int> component_of;
  // Components ordered by their smallest member.
  std::vector<NodeSet> components;
  // Component id -> set of successor component ids in the DAG of components.
  std::vector<NodeSet> condensation;

  NodeSet scc_of(int v) const { return components[component_of[v]]; }
};

SccPartition scc_partition(const Dmg& g);

// Adjacency of a graph with up to 32 nodes. Rows keep self-loops.
struct MaskGraph {
  int n = 0;
  std::array<NodeSet, kMaxMaskNodes> out{};
  std::array<NodeSet, kMaxMaskNodes> in{};
  std::array<NodeSet, kMaxMaskNodes> bi{};

  static MaskGraph from(const Dmg& g);

  int directed_count() const;
  int bidirected_count() const;  // unordered pairs, self-pairs included
};

// The two-layer time-split graph. Node k of layer l has index l*d + k.
struct LiftedDmg {
  Dmg base;
  MaskGraph graph;

  int d() const { return base.node_count(); }
  int node(int k, int layer) const { return layer * d() + k; }
  // Copies a base node set into the given layer.
  NodeSet in_layer(NodeSet s, int layer) const {
    return NodeSet(s.mask() << (layer * d()));
  }
};

LiftedDmg lift(const Dmg& g);

struct Projection {
  Dmg graph;
  // New index -> original index, increasing.
  std::vector<int> observed;
};

// Marginalizes the nodes outside `observed`. Throws Error if observed is
// empty or not a subset of the node set.
Projection latent_projection(const Dmg& g, NodeSet observed);

// Minimal acyclification of a DG: intra-SCC edges are dropped and every edge
// into an SCC is fanned out to all of its members. Throws Error for DMGs.
Dmg acyclify(const Dmg& g);

// Edge-set inclusion on both edge kinds. Throws Error on node-count mismatch.
bool is_subgraph(const Dmg& sub, const Dmg& super);
Dmg edge_union(const Dmg& a, const Dmg& b);

Dmg complete_dg(int d);
// All d^2 directed edges and all d(d-1)/2 bidirected pairs of distinct nodes.
Dmg complete_dmg(int d);

// Restriction to s, relabeled to 0..|s|-1 in increasing order of original id.
Dmg induced_subgraph(const Dmg& g, NodeSet s);

}  // namespace esep

#endif  // ESEP_GRAPH_H_
