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

#include "esep/sde.h"

#include <cmath>
#include <filesystem>
#include <memory>

#include "doctest.h"
#include "esep/discovery.h"
#include "test_support.h"

namespace esep {
namespace {

using testing::graph;
using testing::nodes;

LinearSdeParams constant_params(int d, double drift_offset, double sigma) {
  LinearSdeParams p;
  p.d = d;
  p.drift.assign(std::size_t(d) * d, 0.0);
  p.offset.assign(d, drift_offset);
  p.diffusion.assign(d, sigma);
  p.initial.assign(d, 0.0);
  return p;
}

double terminal_mean(const PathBundle& b, int coord) {
  double s = 0;
  for (int p = 0; p < b.n_paths; ++p) s += b.value(p, b.n_steps, coord);
  return s / b.n_paths;
}

double terminal_variance(const PathBundle& b, int coord) {
  const double m = terminal_mean(b, coord);
  double s = 0;
  for (int p = 0; p < b.n_paths; ++p) {
    const double x = b.value(p, b.n_steps, coord) - m;
    s += x * x;
  }
  return s / (b.n_paths - 1);
}

TEST_CASE("sampled parameters follow the adjacency") {
  Dmg adj = graph(3, {{1, 1}, {1, 2}, {2, 2}, {3, 2}, {2, 3}, {3, 3}});
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    LinearSdeParams p = sample_params(adj, seed);
    REQUIRE(p.d == 3);
    for (int i = 0; i < 3; ++i) {
      REQUIRE(p.diffusion[i] >= 0.3);
      REQUIRE(p.diffusion[i] < 0.5);
      REQUIRE(p.offset[i] >= 0.0);
      REQUIRE(p.offset[i] < 0.1);
      REQUIRE(p.initial[i] == 0.0);
      for (int j = 0; j < 3; ++j) {
        const double a = p.a(i, j);
        if (!adj.has_directed(j, i)) {
          REQUIRE(a == 0.0);
        } else if (i == j) {
          REQUIRE(std::abs(a) <= 0.5);
        } else {
          REQUIRE(std::abs(a) >= 1.0);
          REQUIRE(std::abs(a) < 1.5);
        }
      }
    }
  }
  CHECK(sample_params(adj, 7).drift == sample_params(adj, 7).drift);
  CHECK(sample_params(adj, 7).drift != sample_params(adj, 8).drift);
  CHECK_THROWS_AS(sample_params(graph(2, {}, {{1, 2}}), 1), Error);
}

TEST_CASE("explosive draws are redrawn") {
  // Two nodes cannot exceed the bound: 0.5 from the loop plus 1.5.
  Dmg pair = graph(2, {{1, 2}, {2, 1}, {1, 1}, {2, 2}});
  int total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    int redraws = -1;
    (void)sample_params(pair, seed, &redraws);
    total += redraws;
  }
  CHECK(total == 0);
  total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    int redraws = -1;
    (void)sample_params(complete_dg(4), seed, &redraws);
    REQUIRE(redraws >= 0);
    total += redraws;
  }
  CHECK(total > 0);
}

TEST_CASE("parameters round-trip through JSON") {
  LinearSdeParams p = sample_params(testing::fig1(), 3);
  LinearSdeParams q = LinearSdeParams::from_json(p.to_json());
  CHECK(q.drift == p.drift);
  CHECK(q.offset == p.offset);
  CHECK(q.diffusion == p.diffusion);
  CHECK(q.initial == p.initial);
  nlohmann::json bad = p.to_json();
  bad["offset"] = {1.0};
  CHECK_THROWS_AS(LinearSdeParams::from_json(bad), Error);
}

TEST_CASE("deterministic simulations") {
  PathBundle still = simulate(constant_params(2, 0.0, 0.0), 3, 10, 1.0, 1);
  for (double v : still.values) CHECK(v == 0.0);
  PathBundle drift = simulate(constant_params(1, 1.0, 0.0), 2, 200, 2.0, 1);
  CHECK(drift.value(0, 200, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(drift.time(200) == 2.0);
  CHECK(drift.time(0) == 0.0);
  CHECK_THROWS_AS(simulate(constant_params(1, 0, 0), 1, 0, 1.0, 1), Error);
  CHECK_THROWS_AS(simulate(constant_params(1, 0, 0), 1, 1, 0.0, 1), Error);
}

TEST_CASE("Brownian variance") {
  const double sigma = 0.4;
  PathBundle b = simulate(constant_params(1, 0.0, sigma), 10000, 50, 1.0, 11);
  CHECK(std::abs(terminal_variance(b, 0) - sigma * sigma) <=
        0.05 * sigma * sigma);
}

TEST_CASE("simulation is reproducible and worker independent") {
  LinearSdeParams p = sample_params(testing::fig1(), 5);
  PathBundle a = simulate(p, 50, 40, 1.0, 99, 1);
  PathBundle b = simulate(p, 50, 40, 1.0, 99, 3);
  CHECK(a.values == b.values);
  PathBundle c = simulate(p, 50, 40, 1.0, 100, 1);
  CHECK(a.values != c.values);
}

TEST_CASE("path bundles round-trip through files") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "esep_sde_test";
  fs::create_directories(dir);
  const std::string file = (dir / "paths.bin").string();
  PathBundle a = simulate(sample_params(graph(2, {{1, 2}}), 2), 25, 20, 1.0, 4);
  a.save(file);
  PathBundle b = PathBundle::load(file);
  CHECK(b.values == a.values);
  CHECK(b.seed == a.seed);
  CHECK(b.n_steps == a.n_steps);
  CHECK(b.params.drift == a.params.drift);
  CHECK_THROWS_AS(PathBundle::load((dir / "missing.bin").string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("halving the step keeps terminal means") {
  Dmg sde1 = graph(3, {{1, 1}, {1, 2}, {2, 2}, {3, 2}, {2, 3}, {3, 3}});
  LinearSdeParams p = sample_params(sde1, 21);
  PathBundle coarse = simulate(p, 4000, 100, 1.0, 1);
  PathBundle fine = simulate(p, 4000, 200, 1.0, 2);
  for (int i = 0; i < 3; ++i) {
    const double se = std::sqrt(terminal_variance(coarse, i) / 4000 +
                                terminal_variance(fine, i) / 4000);
    CHECK(std::abs(terminal_mean(coarse, i) - terminal_mean(fine, i)) <
          3 * se);
  }
}

TEST_CASE("CI test input checks") {
  PathBundle few = simulate(constant_params(2, 0, 0.4), 10, 20, 1.0, 1);
  CHECK_THROWS_AS(ci_test_data(few, 0, 1, {}, {}), Error);
  PathBundle b = simulate(constant_params(2, 0, 0.4), 40, 20, 1.0, 1);
  CiTestOptions late;
  late.s = 0.8;
  late.h = 0.5;
  CHECK_THROWS_AS(ci_test_data(b, 0, 1, {}, late), Error);
  CHECK_THROWS_AS(ci_test_data(b, 0, 2, {}, {}), Error);
  PathBundle flat = simulate(constant_params(2, 0.1, 0.0), 40, 20, 1.0, 1);
  CHECK_THROWS_AS(ci_test_data(flat, 0, 1, {}, {}), Error);
}

TEST_CASE("CI decisions ignore constant shifts") {
  Dmg adj = graph(3, {{1, 2}, {2, 3}, {3, 3}});
  PathBundle b = simulate(sample_params(adj, 8), 200, 100, 1.0, 8);
  PathBundle shifted = b;
  for (int p = 0; p < b.n_paths; ++p) {
    for (int k = 0; k <= b.n_steps; ++k) {
      for (int i = 0; i < 3; ++i) shifted.value(p, k, i) += 1.0 + i;
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (std::uint32_t m = 0; m < 8; ++m) {
        NodeSet k(m);
        if (k.contains(i)) continue;
        CiTestResult x = ci_test_data(b, i, j, k, {});
        CiTestResult y = ci_test_data(shifted, i, j, k, {});
        REQUIRE(x.independent == y.independent);
        REQUIRE(x.p_value == y.p_value);
      }
    }
  }
}

TEST_CASE("CI test detects a direct effect") {
  Dmg chain = graph(2, {{1, 2}});
  int rejected = 0;
  const int seeds = 50;
  for (int seed = 0; seed < seeds; ++seed) {
    PathBundle b = simulate(sample_params(chain, seed), 400, 200, 1.0, seed);
    if (!ci_test_data(b, 0, 1, {}, {}).independent) ++rejected;
  }
  MESSAGE("direct effect detected in " << rejected << " of " << seeds);
  CHECK(rejected >= 0.8 * seeds);
}

TEST_CASE("CI test is calibrated on independent coordinates") {
  Dmg split = graph(2, {{1, 1}, {2, 2}});
  int rejected = 0;
  const int trials = 200;
  for (int seed = 0; seed < trials; ++seed) {
    PathBundle b =
        simulate(sample_params(split, 1000 + seed), 400, 100, 1.0, seed);
    if (!ci_test_data(b, 0, 1, {}, {}).independent) ++rejected;
  }
  MESSAGE("false rejections: " << rejected << " of " << trials);
  CHECK(rejected <= 2 * 0.05 * trials);
}

TEST_CASE("data oracle forwards to the CI test") {
  auto b = std::make_shared<PathBundle>(
      simulate(sample_params(graph(3, {{1, 2}}), 6), 100, 50, 1.0, 6));
  CiTestOptions opts;
  CiOracle o = data_oracle(b, opts);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      NodeSet k = nodes({3}).without(i);
      CHECK(o(i, j, k) == ci_test_data(*b, i, j, k, opts).independent);
    }
  }
}

}  // namespace
}  // namespace esep
