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

#include "esep/equivalence.h"

namespace esep {
namespace {

void require_dg(const Dmg& g) {
  if (!g.is_dg()) throw Error("operation requires a directed graph");
}

void require_same_size(const Dmg& g1, const Dmg& g2) {
  if (g1.node_count() != g2.node_count()) {
    throw Error("node count mismatch: " + std::to_string(g1.node_count()) +
                " vs " + std::to_string(g2.node_count()));
  }
}

}  // namespace

bool markov_equivalent(const Dmg& g1, const Dmg& g2) {
  require_same_size(g1, g2);
  return fingerprint(g1, Criterion::kE) == fingerprint(g2, Criterion::kE);
}

std::optional<Triple> distinguishing_triple(const Dmg& g1, const Dmg& g2) {
  require_same_size(g1, g2);
  const Fingerprint f1 = fingerprint(g1, Criterion::kE);
  const Fingerprint f2 = fingerprint(g2, Criterion::kE);
  const int d = g1.node_count();
  for (int a = 0; a < d; ++a) {
    for (std::uint32_t rank = 0; rank < (1U << (d - 1)); ++rank) {
      const NodeSet c = Fingerprint::conditioning_set(a, rank);
      for (int b = 0; b < d; ++b) {
        if (f1.bit(a, b, c) != f2.bit(a, b, c)) {
          return Triple{NodeSet::single(a), NodeSet::single(b), c};
        }
      }
    }
  }
  return std::nullopt;
}

bool dg_equivalent_characterization(const Dmg& g1, const Dmg& g2) {
  require_dg(g1);
  require_dg(g2);
  require_same_size(g1, g2);
  const SccPartition p1 = scc_partition(g1);
  const SccPartition p2 = scc_partition(g2);
  if (p1.components != p2.components) return false;
  for (NodeSet s : p1.components) {
    if (s.size() == 1) {
      const int v = s.first();
      if (g1.parents(v) != g2.parents(v)) return false;
    } else if (parents(g1, s) - s != parents(g2, s) - s) {
      return false;
    }
  }
  return true;
}

Dmg greatest_element_dg(const Dmg& g) {
  require_dg(g);
  const SccPartition p = scc_partition(g);
  Dmg out(g.node_count());
  for (NodeSet s : p.components) {
    const NodeSet sources =
        s.size() == 1 ? parents(g, s) : parents(g, s) | s;
    for (int i : sources) {
      for (int j : s) out = out.with_directed(i, j);
    }
  }
  return out;
}

bool is_maximal(const Dmg& g) {
  require_dg(g);
  const Fingerprint base = fingerprint(g, Criterion::kE);
  for (int i = 0; i < g.node_count(); ++i) {
    for (int j = 0; j < g.node_count(); ++j) {
      if (g.has_directed(i, j)) continue;
      if (fingerprint(g.with_directed(i, j), Criterion::kE) == base) {
        return false;
      }
    }
  }
  return true;
}

bool edge_move_preserves(const Dmg& g, DirectedEdge e) {
  if (g.has_directed(e.from, e.to)) {
    throw Error("edge " + std::to_string(e.from + 1) + " -> " +
                std::to_string(e.to + 1) + " already present");
  }
  const NodeSet scc_j = scc_partition(g).scc_of(e.to);
  if (scc_j.contains(e.from)) return scc_j.size() >= 2;
  return g.children(e.from).intersects(scc_j);
}

bool bidirected_move_preserves(const Dmg& g, BidirectedEdge p) {
  if (p.a == p.b) throw Error("bidirected edge needs two distinct nodes");
  if (g.has_bidirected(p.a, p.b)) {
    throw Error("bidirected edge " + std::to_string(p.a + 1) + " <-> " +
                std::to_string(p.b + 1) + " already present");
  }
  const SccPartition part = scc_partition(g);
  const NodeSet scc_i = part.scc_of(p.a);
  const NodeSet scc_j = part.scc_of(p.b);
  if (!scc_j.contains(p.a)) {
    for (int i : scc_i) {
      if (g.siblings(i).intersects(scc_j)) return true;
    }
  }
  return markov_equivalent(g, g.with_bidirected(p.a, p.b));
}

std::optional<std::size_t> find_greatest_in_class(
    const std::vector<Dmg>& members) {
  if (members.empty()) return std::nullopt;
  Dmg sup = members.front();
  for (const Dmg& m : members) sup = edge_union(sup, m);
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (members[k] == sup) return k;
  }
  return std::nullopt;
}

}  // namespace esep
