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

// Simple-path enumeration used to cross-check the reachability search.
// Shares nothing with it beyond the Dmg accessors: edges are listed
// explicitly, the lifted graph is rebuilt here, and ancestors come from a
// plain depth-first search.

#include <vector>

#include "esep/separation.h"

namespace esep {
namespace {

struct Edge {
  int u;
  int v;
  bool bidirected;
};

struct Incidence {
  int other;
  bool head_here;
  bool head_there;
};

class PathOracle {
 public:
  PathOracle(int n, const std::vector<Edge>& edges, bool sigma)
      : n_(n), sigma_(sigma), adj_(n) {
    for (const Edge& e : edges) {
      if (e.u == e.v) continue;
      if (e.bidirected) {
        adj_[e.u].push_back({e.v, true, true});
        adj_[e.v].push_back({e.u, true, true});
      } else {
        adj_[e.u].push_back({e.v, false, true});
        adj_[e.v].push_back({e.u, true, false});
        children_.push_back({e.u, e.v});
      }
    }
    reach_down_.assign(n_, std::vector<bool>(n_, false));
    for (int s = 0; s < n_; ++s) mark_down(s, s);
  }

  bool open_path_exists(const std::vector<int>& a, const std::vector<int>& b,
                        const std::vector<int>& c) {
    in_c_.assign(n_, false);
    in_b_.assign(n_, false);
    an_c_.assign(n_, false);
    for (int x : c) in_c_[x] = true;
    for (int x : b) in_b_[x] = true;
    for (int x = 0; x < n_; ++x) {
      for (int y : c) {
        if (reach_down_[x][y]) an_c_[x] = true;
      }
    }
    for (int s : a) {
      if (in_c_[s]) continue;
      if (in_b_[s]) return true;
      visited_.assign(n_, false);
      visited_[s] = true;
      if (extend(s, -1, false)) return true;
    }
    return false;
  }

 private:
  void mark_down(int from, int x) {
    if (reach_down_[from][x] && x != from) return;
    reach_down_[from][x] = true;
    for (const auto& [p, q] : children_) {
      if (p == x && !reach_down_[from][q]) mark_down(from, q);
    }
  }

  bool same_scc(int x, int y) const {
    return reach_down_[x][y] && reach_down_[y][x];
  }

  // Whether x, reached from prev with mark `in_head` at x, lets the path
  // continue to `next` whose edge has mark `out_head` at x.
  bool passes(int x, int prev, bool in_head, int next, bool out_head) const {
    if (in_head && out_head) return an_c_[x];
    if (!in_c_[x]) return true;
    if (!sigma_) return false;
    if (!in_head && !same_scc(x, prev)) return false;
    if (!out_head && !same_scc(x, next)) return false;
    return true;
  }

  bool extend(int x, int prev, bool in_head) {
    for (const Incidence& inc : adj_[x]) {
      int y = inc.other;
      if (visited_[y]) continue;
      if (prev >= 0 && !passes(x, prev, in_head, y, inc.head_here)) continue;
      if (in_b_[y] && !in_c_[y]) return true;
      visited_[y] = true;
      bool found = extend(y, x, inc.head_there);
      visited_[y] = false;
      if (found) return true;
    }
    return false;
  }

  int n_;
  bool sigma_;
  std::vector<std::vector<Incidence>> adj_;
  std::vector<std::pair<int, int>> children_;
  std::vector<std::vector<bool>> reach_down_;
  std::vector<bool> in_c_, in_b_, an_c_, visited_;
};

std::vector<int> members(NodeSet s, int offset = 0) {
  std::vector<int> out;
  for (int v : s) out.push_back(v + offset);
  return out;
}

}  // namespace

bool separated_oracle(const Dmg& g, const SeparationQuery& q) {
  const int d = g.node_count();
  if (d > 6) throw Error("path oracle limited to 6 nodes");
  if (!(q.a | q.b | q.c).is_subset_of(g.nodes())) {
    throw Error("query sets must lie within the graph");
  }
  std::vector<Edge> edges;
  if (q.criterion != Criterion::kE) {
    for (const DirectedEdge& e : g.directed_edges()) {
      edges.push_back({e.from, e.to, false});
    }
    for (const BidirectedEdge& e : g.bidirected_edges()) {
      edges.push_back({e.a, e.b, true});
    }
    PathOracle oracle(d, edges, q.criterion == Criterion::kSigma);
    return !oracle.open_path_exists(members(q.a), members(q.b),
                                    members(q.c));
  }

  if (q.a.intersects(q.c)) return true;
  for (const DirectedEdge& e : g.directed_edges()) {
    edges.push_back({e.from, e.to, false});
    edges.push_back({e.from, e.to + d, false});
    edges.push_back({e.from + d, e.to + d, false});
  }
  for (const BidirectedEdge& e : g.bidirected_edges()) {
    edges.push_back({e.a, e.b, true});
    edges.push_back({e.a, e.b + d, true});
    edges.push_back({e.a + d, e.b, true});
    edges.push_back({e.a + d, e.b + d, true});
  }
  std::vector<int> cond = members(q.c);
  for (int v : q.c - q.b) cond.push_back(v + d);
  PathOracle oracle(2 * d, edges, true);
  return !oracle.open_path_exists(members(q.a), members(q.b, d), cond);
}

}  // namespace esep
