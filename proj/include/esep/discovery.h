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

// PC-style discovery on the lifted edge structure (ctPC).

#ifndef ESEP_DISCOVERY_H_
#define ESEP_DISCOVERY_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "esep/graph.h"
#include "esep/sde.h"

namespace esep {

// oracle(i, j, K) is true when X^j given X^K is accepted as independent of
// the past of X^i.
using CiOracle = std::function<bool(int i, int j, NodeSet k)>;

// Lifted directed edges over {k_0, k_1}. Each base edge i -> j owns the
// triple i_0 -> j_0, i_0 -> j_1, i_1 -> j_1.
class LiftedEdgeState {
 public:
  explicit LiftedEdgeState(const Dmg& start);

  int d() const { return d_; }
  bool has(int from, int from_layer, int to, int to_layer) const;
  // Lifted sources k with k_0 -> j_1.
  NodeSet past_parents(int j) const;
  void remove(int i, int j);

  // Base edge i -> j iff i_0 -> j_1 survives. Throws Error if a triple is
  // only partly present.
  Dmg collapse() const;

 private:
  int d_;
  std::array<NodeSet, kMaxMaskNodes> out_{};
};

struct CiQuery {
  int i = 0;
  int j = 0;
  NodeSet k;
  bool independent = false;
};

// Starts from `start` (default: complete DG with all self-loops) and, for
// c = 0..d-1 and every ordered pair (i, j) including i == j whose edge is
// still present, tries the conditioning sets K of size c drawn from
// V \ {i} with k_0 -> j_1 present for all k in K, in increasing mask order.
// The first accepted K removes the triple of i -> j. Every oracle call is
// appended to *log when given.
Dmg ct_pc(int d, const CiOracle& oracle,
          const std::optional<Dmg>& start = std::nullopt,
          std::vector<CiQuery>* log = nullptr);

// Exact oracle: E-separation of {j} from {i} given K in g_true.
CiOracle graph_oracle(const Dmg& g_true);

// Adapts ci_test_data to the oracle interface.
CiOracle data_oracle(std::shared_ptr<const PathBundle> paths,
                     const CiTestOptions& options);

}  // namespace esep

#endif  // ESEP_DISCOVERY_H_
