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

// d-, sigma- and E-separation.
//
// All three criteria run the same reachability search over states
// (node, mark at arrival). A walk starting in the conditioning set is
// blocked at its endpoint, so sources inside C contribute nothing.

#ifndef ESEP_SEPARATION_H_
#define ESEP_SEPARATION_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esep/graph.h"

namespace esep {

enum class Criterion { kD, kSigma, kE };

std::string_view criterion_name(Criterion c);
// Accepts "d", "sigma" and "e". Throws Error otherwise.
Criterion parse_criterion(std::string_view name);

struct SeparationQuery {
  NodeSet a;
  NodeSet b;
  NodeSet c;
  Criterion criterion = Criterion::kE;
};

// Reachability over one graph with at most 32 nodes, with ancestor and SCC
// masks precomputed so that repeated queries are cheap. Self-loops never
// change which states are reachable and are dropped from the rows.
class Reachability {
 public:
  // With `sigma` false every non-collider in the conditioning set blocks.
  Reachability(const MaskGraph& g, bool sigma);

  // Nodes outside `cond` reachable from `sources - cond` by an open walk.
  // Includes the sources themselves.
  NodeSet open_from(NodeSet sources, NodeSet cond) const;

  NodeSet ancestors(NodeSet s) const;
  NodeSet scc(int v) const { return scc_[v]; }

 private:
  int n_;
  std::array<NodeSet, kMaxMaskNodes> out_{};
  std::array<NodeSet, kMaxMaskNodes> in_{};
  std::array<NodeSet, kMaxMaskNodes> bi_{};
  std::array<NodeSet, kMaxMaskNodes> anc_{};
  std::array<NodeSet, kMaxMaskNodes> scc_{};
  // Nodes a conditioned non-collider may still send a tail edge to.
  std::array<NodeSet, kMaxMaskNodes> pass_{};
};

bool d_separated(const Dmg& g, NodeSet a, NodeSet b, NodeSet c);
bool sigma_separated(const Dmg& g, NodeSet a, NodeSet b, NodeSet c);
// B is E-separated from A given C. Not symmetric in A and B. Triples with
// A and C overlapping are answered as separated.
bool e_separated(const Dmg& g, NodeSet a, NodeSet b, NodeSet c);

bool separated(const Dmg& g, const SeparationQuery& q);

// Ground truth for tests: enumerates simple paths of the base graph (or the
// lifted graph for kE) and checks each one literally. Throws Error for
// d > 6.
bool separated_oracle(const Dmg& g, const SeparationQuery& q);

enum class EdgeKind {
  kForward,     // nodes[k] -> nodes[k+1]
  kBackward,    // nodes[k] <- nodes[k+1]
  kBidirected,  // nodes[k] <-> nodes[k+1]
};

struct Walk {
  std::vector<int> nodes;
  std::vector<EdgeKind> edges;
};

bool walk_in_graph(const MaskGraph& g, const Walk& w);

// Renders with 1-based names. When `lifted_d` is positive, node k + l*d is
// printed as "k_l".
std::string format_walk(const Walk& w, int lifted_d = 0);

// An open walk witnessing that q does not hold, over the lifted graph for kE.
std::optional<Walk> find_open_walk(const Dmg& g, const SeparationQuery& q);

// An asymmetric inducing path from v to w: colliders lie in an({v,w}),
// interior non-colliders are unblockable, and the last edge entering scc(w)
// points into it. For v == w the path returns to v.
std::optional<Walk> find_inducing_path(const Dmg& g, int v, int w);

// Whether sigma-separation in g implies d-separation in acyclify(g) for q.
// Throws Error if g has bidirected edges.
bool sigma_implies_d_on_acyclification(const Dmg& g, const SeparationQuery& q);

}  // namespace esep

#endif  // ESEP_SEPARATION_H_
