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

// Linear SDEs dX = (A X + c) dt + diag(D) dW, simulated by Euler-Maruyama,
// and a heuristic conditional independence test on the simulated paths.

#ifndef ESEP_SDE_H_
#define ESEP_SDE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "esep/graph.h"
#include "json.hpp"

namespace esep {

struct LinearSdeParams {
  int d = 0;
  // Row-major; drift[i*d + j] is the effect of X^j on dX^i, so an edge
  // j -> i of the adjacency graph fills entry (i, j).
  std::vector<double> drift;
  std::vector<double> offset;
  std::vector<double> diffusion;
  std::vector<double> initial;

  double a(int i, int j) const { return drift[i * d + j]; }

  nlohmann::json to_json() const;
  static LinearSdeParams from_json(const nlohmann::json& j);
};

// Off-diagonal magnitudes in [1, 1.5) with a random sign, self-loop weights
// in [-0.5, 0.5], offsets in [0, 0.1), diffusion in [0.3, 0.5), zero start.
// Draws with an eigenvalue of real part above 2 are redrawn; their number is
// stored in *redraws when given. Throws Error for DMGs.
LinearSdeParams sample_params(const Dmg& adjacency, std::uint64_t seed,
                              int* redraws = nullptr);

struct PathBundle {
  int d = 0;
  int n_paths = 0;
  int n_steps = 0;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  LinearSdeParams params;
  // values[(p * (n_steps + 1) + k) * d + i] is X^i of path p at step k.
  std::vector<double> values;

  double time(int k) const { return horizon * k / n_steps; }
  double value(int path, int step, int coord) const {
    return values[(std::size_t(path) * (n_steps + 1) + step) * d + coord];
  }
  double& value(int path, int step, int coord) {
    return values[(std::size_t(path) * (n_steps + 1) + step) * d + coord];
  }

  // Raw doubles to `path`, metadata to `path` + ".json".
  void save(const std::string& path) const;
  static PathBundle load(const std::string& path);
};

// Each path draws from its own stream seeded by (seed, path index), so the
// result does not depend on `workers`.
PathBundle simulate(const LinearSdeParams& params, int n_paths, int n_steps,
                    double horizon, std::uint64_t seed, int workers = 1);

struct CiTestResult {
  double statistic = 0;
  double p_value = 1;
  bool independent = true;
};

struct CiTestOptions {
  double s = 0.5;
  double h = 0.5;
  double alpha = 0.05;
  int permutations = 199;
};

// Tests X^i on [0,s] against X^j on [s,s+h] given X^K, where K n {j} is
// observed on [0,s] and K \ {j} on [0,s+h]. Every feature is an increment,
// so shifting paths by constants changes nothing. Throws Error with fewer
// than 20 paths, when s+h runs past the grid, or when the i or j features
// have no variance.
CiTestResult ci_test_data(const PathBundle& paths, int i, int j, NodeSet k,
                          const CiTestOptions& options);

}  // namespace esep

#endif  // ESEP_SDE_H_
