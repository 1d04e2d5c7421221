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

#include "esep/discovery.h"

#include <utility>

#include "esep/independence_model.h"

namespace esep {

LiftedEdgeState::LiftedEdgeState(const Dmg& start) : d_(start.node_count()) {
  if (!start.is_dg()) throw Error("discovery starts from a directed graph");
  for (const DirectedEdge& e : start.directed_edges()) {
    out_[e.from] = out_[e.from].with(e.to).with(e.to + d_);
    out_[e.from + d_] = out_[e.from + d_].with(e.to + d_);
  }
}

bool LiftedEdgeState::has(int from, int from_layer, int to,
                          int to_layer) const {
  return out_[from + from_layer * d_].contains(to + to_layer * d_);
}

NodeSet LiftedEdgeState::past_parents(int j) const {
  NodeSet out;
  for (int k = 0; k < d_; ++k) {
    if (out_[k].contains(j + d_)) out = out.with(k);
  }
  return out;
}

void LiftedEdgeState::remove(int i, int j) {
  out_[i] = out_[i].without(j).without(j + d_);
  out_[i + d_] = out_[i + d_].without(j + d_);
}

Dmg LiftedEdgeState::collapse() const {
  Dmg g(d_);
  for (int i = 0; i < d_; ++i) {
    for (int j = 0; j < d_; ++j) {
      const bool a = has(i, 0, j, 0);
      const bool b = has(i, 0, j, 1);
      const bool c = has(i, 1, j, 1);
      if (a != b || b != c) {
        throw Error("lifted edges of " + std::to_string(i + 1) + " -> " +
                    std::to_string(j + 1) + " only partly removed");
      }
      if (b) g = g.with_directed(i, j);
    }
  }
  return g;
}

Dmg ct_pc(int d, const CiOracle& oracle, const std::optional<Dmg>& start,
          std::vector<CiQuery>* log) {
  const Dmg init = start ? *start : complete_dg(d);
  if (init.node_count() != d) throw Error("start graph has wrong node count");
  LiftedEdgeState state(init);
  const std::uint32_t all = (1U << d) - 1;

  for (int c = 0; c < d; ++c) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (!state.has(i, 0, j, 1)) continue;
        for (std::uint32_t mask = 0; mask <= all; ++mask) {
          const NodeSet k(mask);
          if (k.size() != c || k.contains(i)) continue;
          if (!k.is_subset_of(state.past_parents(j))) continue;
          bool independent;
          try {
            independent = oracle(i, j, k);
          } catch (const Error& e) {
            throw Error("CI query (" + std::to_string(i + 1) + ", " +
                        std::to_string(j + 1) + " | " + k.to_string(1) +
                        "): " + e.what());
          }
          if (log) log->push_back({i, j, k, independent});
          if (independent) {
            state.remove(i, j);
            break;
          }
        }
      }
    }
  }
  return state.collapse();
}

CiOracle graph_oracle(const Dmg& g_true) {
  auto fp = std::make_shared<const Fingerprint>(
      fingerprint(g_true, Criterion::kE));
  return [fp](int i, int j, NodeSet k) { return fp->bit(i, j, k); };
}

CiOracle data_oracle(std::shared_ptr<const PathBundle> paths,
                     const CiTestOptions& options) {
  return [paths = std::move(paths), options](int i, int j, NodeSet k) {
    return ci_test_data(*paths, i, j, k, options).independent;
  };
}

}  // namespace esep
