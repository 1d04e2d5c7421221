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

#include "esep/separation.h"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <unordered_set>

namespace esep {

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::kD:
      return "d";
    case Criterion::kSigma:
      return "sigma";
    case Criterion::kE:
      return "e";
  }
  return "?";
}

Criterion parse_criterion(std::string_view name) {
  if (name == "d") return Criterion::kD;
  if (name == "sigma") return Criterion::kSigma;
  if (name == "e") return Criterion::kE;
  throw Error("unknown criterion '" + std::string(name) + "'");
}

Reachability::Reachability(const MaskGraph& g, bool sigma) : n_(g.n) {
  for (int v = 0; v < n_; ++v) {
    out_[v] = g.out[v].without(v);
    in_[v] = g.in[v].without(v);
    bi_[v] = g.bi[v].without(v);
  }
  for (int v = 0; v < n_; ++v) {
    NodeSet seen = NodeSet::single(v);
    NodeSet frontier = seen;
    while (!frontier.empty()) {
      NodeSet next;
      for (int u : frontier) next |= in_[u];
      frontier = next - seen;
      seen |= next;
    }
    anc_[v] = seen;
  }
  for (int v = 0; v < n_; ++v) {
    NodeSet s;
    for (int u : anc_[v]) {
      if (anc_[u].contains(v)) s = s.with(u);
    }
    scc_[v] = s;
    pass_[v] = sigma ? s : NodeSet();
  }
}

NodeSet Reachability::ancestors(NodeSet s) const {
  NodeSet out;
  for (int v : s) out |= anc_[v];
  return out;
}

NodeSet Reachability::open_from(NodeSet sources, NodeSet cond) const {
  const NodeSet an = ancestors(cond);
  const NodeSet free = NodeSet(~cond.mask());
  NodeSet vis_t = sources - cond;
  NodeSet vis_h;
  NodeSet todo_t = vis_t;
  NodeSet todo_h;
  while (!todo_t.empty() || !todo_h.empty()) {
    NodeSet new_h;
    NodeSet new_t;
    for (int v : todo_t) {
      const bool blocked = cond.contains(v);
      new_h |= (blocked ? out_[v] & pass_[v] : out_[v]) | bi_[v];
      new_t |= in_[v] & (free | pass_[v]);
    }
    for (int v : todo_h) {
      const bool blocked = cond.contains(v);
      new_h |= blocked ? out_[v] & pass_[v] : out_[v];
      if (an.contains(v)) {
        new_h |= bi_[v];
        new_t |= in_[v] & (free | pass_[v]);
      }
    }
    todo_h = new_h - vis_h;
    todo_t = new_t - vis_t;
    vis_h |= new_h;
    vis_t |= new_t;
  }
  return (vis_h | vis_t) - cond;
}

namespace {

void check_query_sets(const Dmg& g, NodeSet a, NodeSet b, NodeSet c) {
  if (!(a | b | c).is_subset_of(g.nodes())) {
    throw Error("query sets must lie within 1.." +
                std::to_string(g.node_count()));
  }
}

NodeSet lifted_cond(const LiftedDmg& l, NodeSet b, NodeSet c) {
  return l.in_layer(c, 0) | (l.in_layer(c, 1) - l.in_layer(b, 1));
}

}  // namespace

bool d_separated(const Dmg& g, NodeSet a, NodeSet b, NodeSet c) {
  check_query_sets(g, a, b, c);
  Reachability r(MaskGraph::from(g), false);
  return !r.open_from(a, c).intersects(b);
}

bool sigma_separated(const Dmg& g, NodeSet a, NodeSet b, NodeSet c) {
  check_query_sets(g, a, b, c);
  Reachability r(MaskGraph::from(g), true);
  return !r.open_from(a, c).intersects(b);
}

bool e_separated(const Dmg& g, NodeSet a, NodeSet b, NodeSet c) {
  check_query_sets(g, a, b, c);
  if (a.intersects(c)) return true;
  LiftedDmg l = lift(g);
  Reachability r(l.graph, true);
  return !r.open_from(l.in_layer(a, 0), lifted_cond(l, b, c))
              .intersects(l.in_layer(b, 1));
}

bool separated(const Dmg& g, const SeparationQuery& q) {
  switch (q.criterion) {
    case Criterion::kD:
      return d_separated(g, q.a, q.b, q.c);
    case Criterion::kSigma:
      return sigma_separated(g, q.a, q.b, q.c);
    case Criterion::kE:
      return e_separated(g, q.a, q.b, q.c);
  }
  return false;
}

bool walk_in_graph(const MaskGraph& g, const Walk& w) {
  if (w.nodes.empty() || w.edges.size() + 1 != w.nodes.size()) return false;
  for (int v : w.nodes) {
    if (v < 0 || v >= g.n) return false;
  }
  for (size_t k = 0; k < w.edges.size(); ++k) {
    int u = w.nodes[k];
    int v = w.nodes[k + 1];
    switch (w.edges[k]) {
      case EdgeKind::kForward:
        if (!g.out[u].contains(v)) return false;
        break;
      case EdgeKind::kBackward:
        if (!g.out[v].contains(u)) return false;
        break;
      case EdgeKind::kBidirected:
        if (!g.bi[u].contains(v)) return false;
        break;
    }
  }
  return true;
}

std::string format_walk(const Walk& w, int lifted_d) {
  auto name = [&](int v) {
    if (lifted_d <= 0) return std::to_string(v + 1);
    return std::to_string(v % lifted_d + 1) + "_" +
           std::to_string(v / lifted_d);
  };
  std::string out = w.nodes.empty() ? "" : name(w.nodes[0]);
  for (size_t k = 0; k < w.edges.size(); ++k) {
    switch (w.edges[k]) {
      case EdgeKind::kForward:
        out += " -> ";
        break;
      case EdgeKind::kBackward:
        out += " <- ";
        break;
      case EdgeKind::kBidirected:
        out += " <-> ";
        break;
    }
    out += name(w.nodes[k + 1]);
  }
  return out;
}

std::optional<Walk> find_open_walk(const Dmg& g, const SeparationQuery& q) {
  check_query_sets(g, q.a, q.b, q.c);
  MaskGraph m;
  NodeSet sources, targets, cond;
  if (q.criterion == Criterion::kE) {
    if (q.a.intersects(q.c)) return std::nullopt;
    LiftedDmg l = lift(g);
    m = l.graph;
    sources = l.in_layer(q.a, 0);
    targets = l.in_layer(q.b, 1);
    cond = lifted_cond(l, q.b, q.c);
  } else {
    m = MaskGraph::from(g);
    sources = q.a;
    targets = q.b;
    cond = q.c;
  }
  const Reachability r(m, q.criterion != Criterion::kD);
  const NodeSet an = r.ancestors(cond);
  auto pass = [&](int v) {
    return q.criterion == Criterion::kD ? NodeSet() : r.scc(v);
  };

  // State index: 2 * node + (arrived with head).
  struct Step {
    int prev = -1;
    EdgeKind kind = EdgeKind::kForward;
  };
  std::vector<Step> from(2 * m.n);
  std::vector<bool> seen(2 * m.n, false);
  std::deque<int> queue;
  for (int a : sources - cond) {
    seen[2 * a] = true;
    queue.push_back(2 * a);
  }
  auto rebuild = [&](int state) {
    Walk w;
    while (state >= 0) {
      w.nodes.push_back(state / 2);
      if (from[state].prev >= 0) w.edges.push_back(from[state].kind);
      state = from[state].prev;
    }
    std::reverse(w.nodes.begin(), w.nodes.end());
    std::reverse(w.edges.begin(), w.edges.end());
    return w;
  };
  while (!queue.empty()) {
    const int state = queue.front();
    queue.pop_front();
    const int v = state / 2;
    const bool head = state % 2;
    if (targets.contains(v) && !cond.contains(v)) return rebuild(state);

    const bool in_c = cond.contains(v);
    auto visit = [&](NodeSet next, bool arrive_head, EdgeKind kind) {
      for (int u : next.without(v)) {
        int s = 2 * u + (arrive_head ? 1 : 0);
        if (seen[s]) continue;
        seen[s] = true;
        from[s] = {state, kind};
        queue.push_back(s);
      }
    };
    NodeSet parents_ok;
    for (int p : m.in[v]) {
      if (!cond.contains(p) || pass(v).contains(p)) parents_ok = parents_ok.with(p);
    }
    const NodeSet kids = in_c ? m.out[v] & pass(v) : m.out[v];
    visit(kids, true, EdgeKind::kForward);
    if (!head || an.contains(v)) {
      visit(m.bi[v], true, EdgeKind::kBidirected);
      visit(parents_ok, false, EdgeKind::kBackward);
    }
  }
  return std::nullopt;
}

std::optional<Walk> find_inducing_path(const Dmg& g, int v, int w) {
  if (v < 0 || v >= g.node_count() || w < 0 || w >= g.node_count()) {
    throw Error("inducing path endpoint out of range");
  }
  if (v == w) {
    if (g.has_self_loop(v)) return Walk{{v, v}, {EdgeKind::kForward}};
    if (g.has_bidirected(v, v)) return Walk{{v, v}, {EdgeKind::kBidirected}};
  }
  const SccPartition p = scc_partition(g);
  const NodeSet an = ancestors(g, NodeSet{v, w});
  const NodeSet scc_w = p.scc_of(w);

  // Marks are recorded at the current node: true for an arrowhead.
  std::unordered_set<std::uint64_t> failed;
  std::vector<int> nodes{v};
  std::vector<EdgeKind> kinds;

  std::function<bool(int, int, bool, bool, NodeSet)> search =
      [&](int x, int prev, bool in_head, bool entered_ok,
          NodeSet visited) -> bool {
    const bool interior = prev >= 0;
    const NodeSet scc_x = p.scc_of(x);
    if (interior && !in_head && !scc_x.contains(prev)) return false;
    const std::uint64_t key =
        (std::uint64_t{visited.mask()} << 8) | (std::uint64_t(x) << 3) |
        (in_head ? 4U : 0U) |
        (interior && scc_x.contains(prev) ? 2U : 0U) | (entered_ok ? 1U : 0U);
    if (failed.contains(key)) return false;

    struct Move {
      NodeSet targets;
      bool out_head;   // mark at x
      bool next_head;  // mark at the next node
      EdgeKind kind;
    };
    const Move moves[] = {
        {g.children(x), false, true, EdgeKind::kForward},
        {g.parents(x), true, false, EdgeKind::kBackward},
        {g.siblings(x), true, true, EdgeKind::kBidirected},
    };
    for (const Move& mv : moves) {
      for (int y : mv.targets.without(x)) {
        const bool closes = y == w;
        if (visited.contains(y) && !closes) continue;
        if (interior) {
          if (in_head && mv.out_head) {
            if (!an.contains(x)) continue;
          } else if (!mv.out_head && !scc_x.contains(y)) {
            continue;
          }
        }
        bool ok = entered_ok;
        if (scc_w.contains(y) && !scc_w.contains(x)) ok = mv.next_head;
        nodes.push_back(y);
        kinds.push_back(mv.kind);
        if (closes) {
          if (ok) return true;
        } else if (search(y, x, mv.next_head, ok, visited.with(y))) {
          return true;
        }
        nodes.pop_back();
        kinds.pop_back();
      }
    }
    failed.insert(key);
    return false;
  };

  if (search(v, -1, false, scc_w.contains(v), NodeSet::single(v))) {
    return Walk{nodes, kinds};
  }
  return std::nullopt;
}

bool sigma_implies_d_on_acyclification(const Dmg& g,
                                       const SeparationQuery& q) {
  if (!g.is_dg()) throw Error("acyclification requires a directed graph");
  if (!sigma_separated(g, q.a, q.b, q.c)) return true;
  return d_separated(acyclify(g), q.a, q.b, q.c);
}

}  // namespace esep
