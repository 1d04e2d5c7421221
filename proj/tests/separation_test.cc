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

#include <random>

#include "doctest.h"
#include "test_support.h"

namespace esep {
namespace {

using testing::fig1;
using testing::graph;
using testing::nodes;

constexpr Criterion kCriteria[] = {Criterion::kD, Criterion::kSigma,
                                   Criterion::kE};

// Plain reachability on a mask graph, reflexive, for checking witnesses.
std::vector<std::vector<bool>> mask_reach(const MaskGraph& g) {
  std::vector<std::vector<bool>> r(g.n, std::vector<bool>(g.n, false));
  for (int v = 0; v < g.n; ++v) {
    r[v][v] = true;
    for (int w : g.out[v]) r[v][w] = true;
  }
  for (int k = 0; k < g.n; ++k) {
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        if (r[i][k] && r[k][j]) r[i][j] = true;
      }
    }
  }
  return r;
}

// Checks openness of a walk straight from the definitions.
bool walk_is_open(const MaskGraph& g, const Walk& w, NodeSet cond,
                  bool sigma) {
  if (w.nodes.empty() || w.edges.size() + 1 != w.nodes.size()) return false;
  if (cond.contains(w.nodes.front()) || cond.contains(w.nodes.back())) {
    return false;
  }
  auto r = mask_reach(g);
  for (std::size_t k = 1; k + 1 < w.nodes.size(); ++k) {
    const int v = w.nodes[k];
    const bool head_in = w.edges[k - 1] != EdgeKind::kBackward;
    const bool head_out = w.edges[k] != EdgeKind::kForward;
    if (head_in && head_out) {
      bool in_an = false;
      for (int c : cond) in_an = in_an || r[v][c];
      if (!in_an) return false;
      continue;
    }
    if (!cond.contains(v)) continue;
    if (!sigma) return false;
    // Conditioned non-collider: every tail it sends must stay in its SCC.
    auto stays = [&](int u) { return r[v][u] && r[u][v]; };
    if (!head_in && !stays(w.nodes[k - 1])) return false;
    if (!head_out && !stays(w.nodes[k + 1])) return false;
  }
  return true;
}

TEST_CASE("d-separation textbook examples") {
  Dmg chain = graph(3, {{1, 2}, {2, 3}});
  CHECK(d_separated(chain, nodes({1}), nodes({3}), nodes({2})));
  CHECK_FALSE(d_separated(chain, nodes({1}), nodes({3}), {}));
  Dmg collider = graph(3, {{1, 2}, {3, 2}});
  CHECK(d_separated(collider, nodes({1}), nodes({3}), {}));
  CHECK_FALSE(d_separated(collider, nodes({1}), nodes({3}), nodes({2})));
  Dmg fork = graph(3, {{2, 1}, {2, 3}});
  CHECK_FALSE(d_separated(fork, nodes({1}), nodes({3}), {}));
  CHECK(d_separated(fork, nodes({1}), nodes({3}), nodes({2})));
  // A descendant of a collider opens it.
  Dmg desc = graph(4, {{1, 2}, {3, 2}, {2, 4}});
  CHECK_FALSE(d_separated(desc, nodes({1}), nodes({3}), nodes({4})));
}

TEST_CASE("sigma-separation examples") {
  Dmg g = graph(3, {{1, 2}, {2, 3}, {3, 2}});
  CHECK_FALSE(sigma_separated(g, nodes({1}), nodes({3}), nodes({2})));
  CHECK(separated_oracle(g, {nodes({1}), nodes({3}), nodes({2}),
                             Criterion::kSigma}) == false);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 5;
    Dmg h = testing::random_graph(rng, d, 0.3, 0.2);
    for (const DirectedEdge& e : h.directed_edges()) {
      if (e.from == e.to) continue;
      NodeSet c = testing::random_subset(rng, d).without(e.from).without(e.to);
      REQUIRE_FALSE(sigma_separated(h, NodeSet::single(e.from),
                                    NodeSet::single(e.to), c));
    }
  }
}

TEST_CASE("E-separation on the four-node example") {
  Dmg g = fig1();
  CHECK_FALSE(e_separated(g, nodes({1}), nodes({3}), {}));
  CHECK(e_separated(g, nodes({3}), nodes({1}), {}));
  for (std::uint32_t m = 0; m < 16; ++m) {
    NodeSet c = NodeSet(m).without(0);
    CHECK_FALSE(e_separated(g, nodes({1}), nodes({2}), c));
    CHECK_FALSE(e_separated(g, nodes({1}), nodes({4}), c));
  }
}

TEST_CASE("E-separation fails right redundancy on a single edge") {
  Dmg g = graph(2, {{1, 2}});
  CHECK_FALSE(e_separated(g, nodes({1}), nodes({2}), nodes({2})));
  CHECK_FALSE(e_separated(g, nodes({1}), nodes({2}), {}));
  CHECK(e_separated(g, nodes({2}), nodes({1}), {}));
}

TEST_CASE("a conditioned source is separated") {
  Dmg g = complete_dmg(3);
  for (Criterion c : kCriteria) {
    CHECK(separated(g, {nodes({1}), nodes({2}), nodes({1}), c}));
    CHECK(separated_oracle(g, {nodes({1}), nodes({2}), nodes({1}), c}));
  }
}

TEST_CASE("state machines agree with the path oracle for all DGs up to 3 "
          "nodes") {
  for (int d = 1; d <= 3; ++d) {
    const std::uint32_t n = 1U << d;
    testing::for_each_dg(d, [&](const Dmg& g) {
      for (std::uint32_t a = 1; a < n; ++a) {
        for (std::uint32_t b = 1; b < n; ++b) {
          for (std::uint32_t c = 0; c < n; ++c) {
            for (Criterion cr : kCriteria) {
              SeparationQuery q{NodeSet(a), NodeSet(b), NodeSet(c), cr};
              if (separated(g, q) != separated_oracle(g, q)) {
                FAIL(criterion_name(cr) << " disagrees on "
                                        << q.a.to_string(1) << " "
                                        << q.b.to_string(1) << " "
                                        << q.c.to_string(1));
              }
            }
          }
        }
      }
    });
  }
}

TEST_CASE("state machines agree with the path oracle for all DMGs on 3 "
          "nodes, singleton queries") {
  testing::for_each_dmg(3, [&](const Dmg& g) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (std::uint32_t c = 0; c < 8; ++c) {
          for (Criterion cr : kCriteria) {
            SeparationQuery q{NodeSet::single(a), NodeSet::single(b),
                              NodeSet(c), cr};
            REQUIRE(separated(g, q) == separated_oracle(g, q));
          }
        }
      }
    }
  });
}

TEST_CASE("state machines agree with the path oracle on random 4-node "
          "queries") {
  std::mt19937_64 rng(20260401);
  int checked = 0;
  while (checked < 100000) {
    Dmg g = testing::random_graph(rng, 4, 0.3, 0.2);
    for (int k = 0; k < 20; ++k, ++checked) {
      SeparationQuery q{testing::random_subset(rng, 4),
                        testing::random_subset(rng, 4),
                        testing::random_subset(rng, 4),
                        kCriteria[checked % 3]};
      REQUIRE(separated(g, q) == separated_oracle(g, q));
    }
  }
}

TEST_CASE("the oracle rejects large graphs") {
  CHECK_THROWS_AS(separated_oracle(Dmg(7), {nodes({1}), nodes({2}), {}}),
                  Error);
}

TEST_CASE("witness walks exist exactly for connected queries and are open") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 3000; ++trial) {
    const int d = 2 + trial % 4;
    Dmg g = testing::random_graph(rng, d, 0.3, 0.2);
    SeparationQuery q{testing::random_subset(rng, d),
                      testing::random_subset(rng, d),
                      testing::random_subset(rng, d), kCriteria[trial % 3]};
    auto w = find_open_walk(g, q);
    REQUIRE(w.has_value() == !separated(g, q));
    if (!w) continue;
    MaskGraph m;
    NodeSet src = q.a, dst = q.b, cond = q.c;
    if (q.criterion == Criterion::kE) {
      LiftedDmg l = lift(g);
      m = l.graph;
      src = l.in_layer(q.a, 0);
      dst = l.in_layer(q.b, 1);
      cond = l.in_layer(q.c, 0) | (l.in_layer(q.c, 1) - dst);
    } else {
      m = MaskGraph::from(g);
    }
    REQUIRE(walk_in_graph(m, *w));
    REQUIRE(src.contains(w->nodes.front()));
    REQUIRE(dst.contains(w->nodes.back()));
    REQUIRE(walk_is_open(m, *w, cond, q.criterion != Criterion::kD));
  }
}

TEST_CASE("walks format with layer subscripts") {
  auto w = find_open_walk(graph(2, {{1, 2}}), {nodes({1}), nodes({2}), {}});
  REQUIRE(w);
  CHECK(format_walk(*w, 2) == "1_0 -> 2_1");
  Walk plain{{0, 1, 2}, {EdgeKind::kForward, EdgeKind::kBidirected}};
  CHECK(format_walk(plain) == "1 -> 2 <-> 3");
}

TEST_CASE("sigma and d coincide on acyclic graphs up to 4 nodes") {
  for (int d = 1; d <= 4; ++d) {
    const std::uint32_t n = 1U << d;
    testing::for_each_dg(d, [&](const Dmg& g) {
      if (testing::has_nontrivial_cycle(g)) return;
      for (std::uint32_t a = 1; a < n; ++a) {
        for (std::uint32_t b = 1; b < n; ++b) {
          for (std::uint32_t c = 0; c < n; ++c) {
            REQUIRE(d_separated(g, NodeSet(a), NodeSet(b), NodeSet(c)) ==
                    sigma_separated(g, NodeSet(a), NodeSet(b), NodeSet(c)));
          }
        }
      }
    });
  }
}

TEST_CASE("sigma-separation implies d-separation in the acyclification") {
  for (int d = 1; d <= 3; ++d) {
    const std::uint32_t n = 1U << d;
    testing::for_each_dg(d, [&](const Dmg& g) {
      for (std::uint32_t a = 1; a < n; ++a) {
        for (std::uint32_t b = 1; b < n; ++b) {
          for (std::uint32_t c = 0; c < n; ++c) {
            REQUIRE(sigma_implies_d_on_acyclification(
                g, {NodeSet(a), NodeSet(b), NodeSet(c), Criterion::kSigma}));
          }
        }
      }
    });
  }
  Dmg two_cycle = graph(2, {{1, 2}, {2, 1}});
  CHECK_FALSE(sigma_separated(two_cycle, nodes({1}), nodes({2}), {}));
  CHECK(sigma_implies_d_on_acyclification(two_cycle,
                                          {nodes({1}), nodes({2}), {}}));
  CHECK_THROWS_AS(sigma_implies_d_on_acyclification(
                      graph(2, {}, {{1, 2}}), {nodes({1}), nodes({2}), {}}),
                  Error);
}

TEST_CASE("E-separation is monotone in the target set") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5000; ++trial) {
    const int d = 2 + trial % 4;
    Dmg g = testing::random_graph(rng, d, 0.25, 0.15);
    NodeSet a = testing::random_subset(rng, d);
    NodeSet b = testing::random_subset(rng, d);
    NodeSet c = testing::random_subset(rng, d);
    if (!e_separated(g, a, b, c)) continue;
    NodeSet sub = b & testing::random_subset(rng, d);
    REQUIRE(e_separated(g, a, sub, c));
  }
}

TEST_CASE("E-separation composes over singletons") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5000; ++trial) {
    const int d = 2 + trial % 4;
    Dmg g = testing::random_graph(rng, d, 0.25, 0.15);
    NodeSet a = testing::random_subset(rng, d);
    NodeSet b = testing::random_subset(rng, d);
    NodeSet c = testing::random_subset(rng, d);
    if (a.intersects(c)) continue;
    bool all = true;
    for (int x : a) {
      for (int y : b) {
        all = all && e_separated(g, NodeSet::single(x), NodeSet::single(y), c);
      }
    }
    REQUIRE(e_separated(g, a, b, c) == all);
  }
}

TEST_CASE("inducing path examples") {
  auto p = find_inducing_path(graph(2, {{1, 2}}), 0, 1);
  REQUIRE(p);
  CHECK(p->nodes == std::vector<int>{0, 1});
  CHECK(p->edges == std::vector<EdgeKind>{EdgeKind::kForward});

  Dmg g = graph(3, {{2, 3}}, {{1, 2}, {2, 3}});
  p = find_inducing_path(g, 0, 2);
  REQUIRE(p);
  CHECK(p->nodes.front() == 0);
  CHECK(p->nodes.back() == 2);
  for (std::uint32_t c = 0; c < 8; ++c) {
    if (c & 1U) continue;
    CHECK_FALSE(e_separated(g, nodes({1}), nodes({3}), NodeSet(c)));
  }

  CHECK_FALSE(find_inducing_path(graph(3, {{1, 2}, {3, 2}}), 0, 2));
  // Reversed edge points out of the target.
  CHECK_FALSE(find_inducing_path(graph(2, {{2, 1}}), 0, 1));
  CHECK(find_inducing_path(graph(2, {{1, 1}}), 0, 0));
  CHECK_FALSE(find_inducing_path(Dmg(2), 0, 0));
}

TEST_CASE("an inducing path rules out every separating set") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 1500; ++trial) {
    const int d = 2 + trial % 3;
    Dmg g = testing::random_graph(rng, d, 0.25, 0.2);
    for (int v = 0; v < d; ++v) {
      for (int w = 0; w < d; ++w) {
        bool separable = false;
        for (std::uint32_t c = 0; c < (1U << d); ++c) {
          if ((c >> v) & 1U) continue;
          if (e_separated(g, NodeSet::single(v), NodeSet::single(w),
                          NodeSet(c))) {
            separable = true;
            break;
          }
        }
        auto p = find_inducing_path(g, v, w);
        if (p) {
          REQUIRE_FALSE(separable);
          REQUIRE(p->nodes.front() == v);
          REQUIRE(p->nodes.back() == w);
          REQUIRE(walk_in_graph(MaskGraph::from(g), *p));
        }
      }
    }
  }
}

TEST_CASE("inducing paths extend across the target's component") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + trial % 3;
    Dmg g = testing::random_graph(rng, d, 0.35, 0.2);
    SccPartition p = scc_partition(g);
    for (int v = 0; v < d; ++v) {
      for (int w = 0; w < d; ++w) {
        if (!find_inducing_path(g, v, w)) continue;
        for (int u : p.scc_of(w)) REQUIRE(find_inducing_path(g, v, u));
      }
    }
  }
}

TEST_CASE("a bidirected edge between components makes them inseparable") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + trial % 3;
    Dmg g = testing::random_graph(rng, d, 0.35, 0.25);
    SccPartition p = scc_partition(g);
    for (const BidirectedEdge& e : g.bidirected_edges()) {
      NodeSet sv = p.scc_of(e.a), sw = p.scc_of(e.b);
      if (sv == sw) continue;
      for (int x : sv) {
        for (int y : sw) {
          for (std::uint32_t c = 0; c < (1U << d); ++c) {
            NodeSet cs(c);
            if (!cs.contains(x)) {
              REQUIRE_FALSE(e_separated(g, NodeSet::single(x),
                                        NodeSet::single(y), cs));
            }
            if (!cs.contains(y)) {
              REQUIRE_FALSE(e_separated(g, NodeSet::single(y),
                                        NodeSet::single(x), cs));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("criterion names round-trip") {
  for (Criterion c : kCriteria) CHECK(parse_criterion(criterion_name(c)) == c);
  CHECK_THROWS_AS(parse_criterion("m"), Error);
}

}  // namespace
}  // namespace esep
