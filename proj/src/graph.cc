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

#include "esep/graph.h"

#include <algorithm>
#include <functional>
#include <string>
#include <utility>

namespace esep {

Dmg::Dmg(int node_count) : d_(node_count) {
  if (node_count < 0 || node_count > kMaxNodes) {
    throw Error("node count " + std::to_string(node_count) +
                " outside [0, " + std::to_string(kMaxNodes) + "]");
  }
}

Dmg Dmg::from_edges(int node_count, std::span<const DirectedEdge> directed,
                    std::span<const BidirectedEdge> bidirected) {
  Dmg g(node_count);
  for (const DirectedEdge& e : directed) g = g.with_directed(e.from, e.to);
  for (const BidirectedEdge& e : bidirected) g = g.with_bidirected(e.a, e.b);
  return g;
}

void Dmg::check_node(int v) const {
  if (v < 0 || v >= d_) {
    throw Error("node index " + std::to_string(v) + " out of range for d=" +
                std::to_string(d_));
  }
}

bool Dmg::has_directed(int from, int to) const {
  check_node(from);
  check_node(to);
  return out_[from].contains(to);
}

bool Dmg::has_bidirected(int a, int b) const {
  check_node(a);
  check_node(b);
  return bi_[a].contains(b);
}

Dmg Dmg::with_directed(int from, int to) const {
  check_node(from);
  check_node(to);
  Dmg g = *this;
  g.out_[from] = g.out_[from].with(to);
  g.in_[to] = g.in_[to].with(from);
  return g;
}

Dmg Dmg::without_directed(int from, int to) const {
  check_node(from);
  check_node(to);
  Dmg g = *this;
  g.out_[from] = g.out_[from].without(to);
  g.in_[to] = g.in_[to].without(from);
  return g;
}

Dmg Dmg::with_bidirected(int a, int b) const {
  check_node(a);
  check_node(b);
  Dmg g = *this;
  g.bi_[a] = g.bi_[a].with(b);
  g.bi_[b] = g.bi_[b].with(a);
  return g;
}

Dmg Dmg::without_bidirected(int a, int b) const {
  check_node(a);
  check_node(b);
  Dmg g = *this;
  g.bi_[a] = g.bi_[a].without(b);
  g.bi_[b] = g.bi_[b].without(a);
  return g;
}

NodeSet Dmg::children(int v) const {
  check_node(v);
  return out_[v];
}

NodeSet Dmg::parents(int v) const {
  check_node(v);
  return in_[v];
}

NodeSet Dmg::siblings(int v) const {
  check_node(v);
  return bi_[v];
}

std::vector<DirectedEdge> Dmg::directed_edges() const {
  std::vector<DirectedEdge> edges;
  for (int i = 0; i < d_; ++i) {
    for (int j : out_[i]) edges.push_back({i, j});
  }
  return edges;
}

std::vector<BidirectedEdge> Dmg::bidirected_edges() const {
  std::vector<BidirectedEdge> edges;
  for (int a = 0; a < d_; ++a) {
    for (int b : bi_[a] - NodeSet::range(a)) edges.push_back({a, b});
  }
  return edges;
}

int Dmg::directed_count() const {
  int n = 0;
  for (int i = 0; i < d_; ++i) n += out_[i].size();
  return n;
}

int Dmg::bidirected_count() const {
  int n = 0;
  for (int a = 0; a < d_; ++a) n += (bi_[a] - NodeSet::range(a)).size();
  return n;
}

namespace {

void check_set(const Dmg& g, NodeSet s) {
  if (!s.is_subset_of(g.nodes())) {
    throw Error("node set " + s.to_string(1) + " not within 1.." +
                std::to_string(g.node_count()));
  }
}

void check_same_size(const Dmg& a, const Dmg& b) {
  if (a.node_count() != b.node_count()) {
    throw Error("node count mismatch: " + std::to_string(a.node_count()) +
                " vs " + std::to_string(b.node_count()));
  }
}

template <typename Step>
NodeSet closure(NodeSet seed, Step step) {
  NodeSet seen = seed;
  NodeSet frontier = seed;
  while (!frontier.empty()) {
    NodeSet next;
    for (int v : frontier) next |= step(v);
    frontier = next - seen;
    seen |= next;
  }
  return seen;
}

}  // namespace

NodeSet parents(const Dmg& g, NodeSet s) {
  check_set(g, s);
  NodeSet out;
  for (int v : s) out |= g.parents(v);
  return out;
}

NodeSet children(const Dmg& g, NodeSet s) {
  check_set(g, s);
  NodeSet out;
  for (int v : s) out |= g.children(v);
  return out;
}

NodeSet ancestors(const Dmg& g, NodeSet s) {
  check_set(g, s);
  return closure(s, [&](int v) { return g.parents(v); });
}

NodeSet descendants(const Dmg& g, NodeSet s) {
  check_set(g, s);
  return closure(s, [&](int v) { return g.children(v); });
}

SccPartition scc_partition(const Dmg& g) {
  const int d = g.node_count();
  // Tarjan's algorithm; recursion depth is bounded by kMaxNodes.
  std::vector<int> index(d, -1), low(d, 0);
  std::vector<int> stack;
  NodeSet on_stack;
  std::vector<NodeSet> found;
  int counter = 0;

  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack = on_stack.with(v);
    for (int w : g.children(v)) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.contains(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      NodeSet component;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack = on_stack.without(w);
        component = component.with(w);
      } while (w != v);
      found.push_back(component);
    }
  };
  for (int v = 0; v < d; ++v) {
    if (index[v] < 0) visit(v);
  }

  std::sort(found.begin(), found.end(),
            [](NodeSet a, NodeSet b) { return a.first() < b.first(); });
  SccPartition p;
  p.components = std::move(found);
  p.component_of.assign(d, 0);
  for (int c = 0; c < static_cast<int>(p.components.size()); ++c) {
    for (int v : p.components[c]) p.component_of[v] = c;
  }
  p.condensation.assign(p.components.size(), NodeSet());
  for (const DirectedEdge& e : g.directed_edges()) {
    int cu = p.component_of[e.from];
    int cv = p.component_of[e.to];
    if (cu != cv) p.condensation[cu] = p.condensation[cu].with(cv);
  }
  return p;
}

bool is_acyclic_up_to_self_loops(const Dmg& g) {
  SccPartition p = scc_partition(g);
  return std::all_of(p.components.begin(), p.components.end(),
                     [](NodeSet c) { return c.size() == 1; });
}

bool is_acyclic(const Dmg& g) {
  for (int v = 0; v < g.node_count(); ++v) {
    if (g.has_self_loop(v)) return false;
  }
  return is_acyclic_up_to_self_loops(g);
}

MaskGraph MaskGraph::from(const Dmg& g) {
  MaskGraph m;
  m.n = g.node_count();
  for (int v = 0; v < m.n; ++v) {
    m.out[v] = g.children(v);
    m.in[v] = g.parents(v);
    m.bi[v] = g.siblings(v);
  }
  return m;
}

int MaskGraph::directed_count() const {
  int c = 0;
  for (int v = 0; v < n; ++v) c += out[v].size();
  return c;
}

int MaskGraph::bidirected_count() const {
  int c = 0;
  for (int v = 0; v < n; ++v) c += (bi[v] - NodeSet::range(v)).size();
  return c;
}

LiftedDmg lift(const Dmg& g) {
  LiftedDmg l;
  l.base = g;
  MaskGraph& m = l.graph;
  const int d = g.node_count();
  m.n = 2 * d;
  auto add_directed = [&](int u, int v) {
    m.out[u] = m.out[u].with(v);
    m.in[v] = m.in[v].with(u);
  };
  for (const DirectedEdge& e : g.directed_edges()) {
    add_directed(e.from, e.to);
    add_directed(e.from, e.to + d);
    add_directed(e.from + d, e.to + d);
  }
  for (const BidirectedEdge& e : g.bidirected_edges()) {
    for (int la = 0; la < 2; ++la) {
      for (int lb = 0; lb < 2; ++lb) {
        int u = e.a + la * d;
        int v = e.b + lb * d;
        m.bi[u] = m.bi[u].with(v);
        m.bi[v] = m.bi[v].with(u);
      }
    }
  }
  return l;
}

Projection latent_projection(const Dmg& g, NodeSet observed) {
  if (observed.empty()) throw Error("latent projection onto empty node set");
  check_set(g, observed);
  Projection p;
  p.observed = observed.to_vector();
  std::vector<int> new_index(g.node_count(), -1);
  for (int k = 0; k < static_cast<int>(p.observed.size()); ++k) {
    new_index[p.observed[k]] = k;
  }
  const NodeSet latent = g.nodes() - observed;
  Dmg out(observed.size());

  for (int v : observed) {
    // Directed: v -> ... -> w with latent interior.
    NodeSet reached = g.children(v);
    NodeSet via = closure(reached & latent, [&](int x) {
      return g.children(x) & latent;
    });
    reached |= children(g, via);
    for (int w : reached & observed) {
      out = out.with_directed(new_index[v], new_index[w]);
    }

    // Bidirected: v <- ... or v <-> ..., no colliders, head at the far end.
    // `up` holds latent nodes entered against an arrow (tail mark there),
    // `down` those entered along an arrow (head mark there).
    NodeSet heads = g.siblings(v);
    NodeSet up = g.parents(v) & latent;
    NodeSet down = heads & latent;
    NodeSet up_seen, down_seen;
    while (!(up - up_seen).empty() || !(down - down_seen).empty()) {
      NodeSet up_new = up - up_seen;
      NodeSet down_new = down - down_seen;
      up_seen |= up_new;
      down_seen |= down_new;
      for (int x : up_new) {
        up |= g.parents(x) & latent;
        NodeSet fwd = g.siblings(x) | g.children(x);
        heads |= fwd;
        down |= fwd & latent;
      }
      for (int x : down_new) {
        heads |= g.children(x);
        down |= g.children(x) & latent;
      }
    }
    for (int w : heads & observed) {
      out = out.with_bidirected(new_index[v], new_index[w]);
    }
  }
  p.graph = out;
  return p;
}

Dmg acyclify(const Dmg& g) {
  if (!g.is_dg()) throw Error("acyclification requires a directed graph");
  SccPartition p = scc_partition(g);
  Dmg out(g.node_count());
  for (const DirectedEdge& e : g.directed_edges()) {
    NodeSet target = p.scc_of(e.to);
    if (target.contains(e.from)) continue;
    for (int w : target) out = out.with_directed(e.from, w);
  }
  return out;
}

bool is_subgraph(const Dmg& sub, const Dmg& super) {
  check_same_size(sub, super);
  for (int v = 0; v < sub.node_count(); ++v) {
    if (!sub.children(v).is_subset_of(super.children(v))) return false;
    if (!sub.siblings(v).is_subset_of(super.siblings(v))) return false;
  }
  return true;
}

Dmg edge_union(const Dmg& a, const Dmg& b) {
  check_same_size(a, b);
  Dmg out = a;
  for (const DirectedEdge& e : b.directed_edges()) {
    out = out.with_directed(e.from, e.to);
  }
  for (const BidirectedEdge& e : b.bidirected_edges()) {
    out = out.with_bidirected(e.a, e.b);
  }
  return out;
}

Dmg complete_dg(int d) {
  Dmg g(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g = g.with_directed(i, j);
  }
  return g;
}

Dmg complete_dmg(int d) {
  Dmg g = complete_dg(d);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) g = g.with_bidirected(a, b);
  }
  return g;
}

Dmg induced_subgraph(const Dmg& g, NodeSet s) {
  check_set(g, s);
  std::vector<int> index(g.node_count(), -1);
  int k = 0;
  for (int v : s) index[v] = k++;
  Dmg out(s.size());
  for (const DirectedEdge& e : g.directed_edges()) {
    if (s.contains(e.from) && s.contains(e.to)) {
      out = out.with_directed(index[e.from], index[e.to]);
    }
  }
  for (const BidirectedEdge& e : g.bidirected_edges()) {
    if (s.contains(e.a) && s.contains(e.b)) {
      out = out.with_bidirected(index[e.a], index[e.b]);
    }
  }
  return out;
}

}  // namespace esep
