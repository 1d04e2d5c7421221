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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace esep {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::vector<double> json_doubles(const nlohmann::json& j, const char* key,
                                 std::size_t n) {
  std::vector<double> v = j.at(key).get<std::vector<double>>();
  if (v.size() != n) {
    throw Error(std::string("parameter '") + key + "' has the wrong length");
  }
  return v;
}

}  // namespace

nlohmann::json LinearSdeParams::to_json() const {
  return {{"d", d},
          {"drift", drift},
          {"offset", offset},
          {"diffusion", diffusion},
          {"initial", initial}};
}

LinearSdeParams LinearSdeParams::from_json(const nlohmann::json& j) {
  try {
    LinearSdeParams p;
    p.d = j.at("d").get<int>();
    if (p.d < 1 || p.d > kMaxNodes) throw Error("bad SDE dimension");
    const std::size_t n = p.d;
    p.drift = json_doubles(j, "drift", n * n);
    p.offset = json_doubles(j, "offset", n);
    p.diffusion = json_doubles(j, "diffusion", n);
    p.initial = json_doubles(j, "initial", n);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed SDE parameters: ") + e.what());
  }
}

LinearSdeParams sample_params(const Dmg& adjacency, std::uint64_t seed,
                              int* redraws) {
  if (!adjacency.is_dg()) throw Error("SDE adjacency must be a directed graph");
  const int d = adjacency.node_count();
  std::mt19937_64 rng(derive_seed(seed, 0));
  std::uniform_real_distribution<double> magnitude(1.0, 1.5);
  std::uniform_real_distribution<double> self(-0.5, 0.5);
  std::uniform_real_distribution<double> offset(0.0, 0.1);
  std::uniform_real_distribution<double> diffusion(0.3, 0.5);
  std::bernoulli_distribution negative(0.5);

  LinearSdeParams p;
  p.d = d;
  int rejected = 0;
  for (;;) {
    p.drift.assign(std::size_t(d) * d, 0.0);
    for (const DirectedEdge& e : adjacency.directed_edges()) {
      double w;
      if (e.from == e.to) {
        w = self(rng);
      } else {
        w = magnitude(rng);
        if (negative(rng)) w = -w;
      }
      p.drift[e.to * d + e.from] = w;
    }
    p.offset.resize(d);
    p.diffusion.resize(d);
    for (int i = 0; i < d; ++i) {
      p.offset[i] = offset(rng);
      p.diffusion[i] = diffusion(rng);
    }
    p.initial.assign(d, 0.0);

    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) a(i, j) = p.a(i, j);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    if (solver.eigenvalues().real().maxCoeff() <= 2.0) break;
    if (++rejected >= 10000) throw Error("no stable drift matrix found");
  }
  if (redraws) *redraws = rejected;
  return p;
}

void PathBundle::save(const std::string& path) const {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write path bundle '" + path + "'");
    out.write(reinterpret_cast<const char*>(values.data()),
              values.size() * sizeof(double));
    if (!out) throw Error("cannot write path bundle '" + path + "'");
  }
  nlohmann::json meta = {{"d", d},
                         {"n_paths", n_paths},
                         {"n_steps", n_steps},
                         {"T", horizon},
                         {"seed", seed},
                         {"params", params.to_json()}};
  std::ofstream side(path + ".json");
  if (!side) throw Error("cannot write '" + path + ".json'");
  side << meta.dump(2) << "\n";
}

PathBundle PathBundle::load(const std::string& path) {
  std::ifstream side(path + ".json");
  if (!side) throw Error("cannot open '" + path + ".json'");
  PathBundle b;
  try {
    nlohmann::json meta = nlohmann::json::parse(side);
    b.d = meta.at("d").get<int>();
    b.n_paths = meta.at("n_paths").get<int>();
    b.n_steps = meta.at("n_steps").get<int>();
    b.horizon = meta.at("T").get<double>();
    b.seed = meta.at("seed").get<std::uint64_t>();
    b.params = LinearSdeParams::from_json(meta.at("params"));
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed path bundle metadata: " + std::string(e.what()));
  }
  if (b.d != b.params.d || b.n_paths < 1 || b.n_steps < 1) {
    throw Error("inconsistent path bundle metadata");
  }
  const std::size_t n = std::size_t(b.n_paths) * (b.n_steps + 1) * b.d;
  std::error_code ec;
  if (std::filesystem::file_size(path, ec) != n * sizeof(double) || ec) {
    throw Error("path bundle '" + path + "' has the wrong size");
  }
  b.values.resize(n);
  std::ifstream in(path, std::ios::binary);
  in.read(reinterpret_cast<char*>(b.values.data()), n * sizeof(double));
  if (!in) throw Error("cannot read path bundle '" + path + "'");
  return b;
}

PathBundle simulate(const LinearSdeParams& params, int n_paths, int n_steps,
                    double horizon, std::uint64_t seed, int workers) {
  if (n_steps < 1) throw Error("need at least one step");
  if (!(horizon > 0)) throw Error("horizon must be positive");
  if (n_paths < 1) throw Error("need at least one path");
  const int d = params.d;
  PathBundle b;
  b.d = d;
  b.n_paths = n_paths;
  b.n_steps = n_steps;
  b.horizon = horizon;
  b.seed = seed;
  b.params = params;
  b.values.assign(std::size_t(n_paths) * (n_steps + 1) * d, 0.0);
  const double dt = horizon / n_steps;
  const double sqrt_dt = std::sqrt(dt);

  auto run_path = [&](int p) {
    std::mt19937_64 rng(derive_seed(seed, std::uint64_t(p) + 1));
    std::normal_distribution<double> normal;
    std::vector<double> x(params.initial), next(d);
    for (int i = 0; i < d; ++i) b.value(p, 0, i) = x[i];
    for (int k = 1; k <= n_steps; ++k) {
      for (int i = 0; i < d; ++i) {
        double drift = params.offset[i];
        for (int j = 0; j < d; ++j) drift += params.a(i, j) * x[j];
        next[i] = x[i] + drift * dt + params.diffusion[i] * sqrt_dt * normal(rng);
        if (!std::isfinite(next[i])) {
          throw Error("non-finite value at step " + std::to_string(k) +
                      " of path " + std::to_string(p));
        }
      }
      x.swap(next);
      for (int i = 0; i < d; ++i) b.value(p, k, i) = x[i];
    }
  };

  const int threads = std::clamp(workers, 1, n_paths);
  if (threads == 1) {
    for (int p = 0; p < n_paths; ++p) run_path(p);
    return b;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int p = t; p < n_paths; p += threads) run_path(p);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return b;
}

namespace {

// Terminal increment, sum of squared increments and mid-interval increment
// of one coordinate on steps [k0, k1].
void segment_features(const PathBundle& b, int coord, int k0, int k1,
                      Eigen::MatrixXd& out, int col) {
  const int mid = (k0 + k1) / 2;
  for (int p = 0; p < b.n_paths; ++p) {
    double qv = 0;
    for (int k = k0 + 1; k <= k1; ++k) {
      const double dx = b.value(p, k, coord) - b.value(p, k - 1, coord);
      qv += dx * dx;
    }
    out(p, col) = b.value(p, k1, coord) - b.value(p, k0, coord);
    out(p, col + 1) = qv;
    out(p, col + 2) = b.value(p, mid, coord) - b.value(p, k0, coord);
  }
}

// Residuals of m on z (least squares), standardized. Columns without
// variance before or after the projection are dropped.
Eigen::MatrixXd residual_scores(const Eigen::MatrixXd& m,
                                const Eigen::MatrixXd& z) {
  const Eigen::MatrixXd coef = z.colPivHouseholderQr().solve(m);
  const Eigen::MatrixXd r = m - z * coef;
  std::vector<int> keep;
  for (int c = 0; c < m.cols(); ++c) {
    const Eigen::VectorXd raw = m.col(c).array() - m.col(c).mean();
    const Eigen::VectorXd res = r.col(c).array() - r.col(c).mean();
    const double scale = std::max(1.0, m.col(c).cwiseAbs().maxCoeff());
    if (raw.norm() <= 1e-12 * scale * std::sqrt(double(m.rows()))) continue;
    if (res.squaredNorm() <= 1e-10 * raw.squaredNorm()) continue;
    keep.push_back(c);
  }
  Eigen::MatrixXd out(m.rows(), keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    Eigen::VectorXd col = r.col(keep[k]).array() - r.col(keep[k]).mean();
    out.col(k) = col / col.norm();
  }
  return out;
}

double max_abs_correlation(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return (x.transpose() * y).cwiseAbs().maxCoeff();
}

}  // namespace

CiTestResult ci_test_data(const PathBundle& paths, int i, int j, NodeSet k,
                          const CiTestOptions& options) {
  if (paths.n_paths < 20) throw Error("CI test needs at least 20 paths");
  if (i < 0 || i >= paths.d || j < 0 || j >= paths.d ||
      !k.is_subset_of(NodeSet::range(paths.d))) {
    throw Error("CI test index out of range");
  }
  if (!(options.s > 0) || !(options.h > 0)) {
    throw Error("s and h must be positive");
  }
  const double dt = paths.horizon / paths.n_steps;
  const int ks = static_cast<int>(std::lround(options.s / dt));
  const int ke = static_cast<int>(std::lround((options.s + options.h) / dt));
  if (ks < 1 || ke <= ks || ke > paths.n_steps) {
    throw Error("interval [0, s+h] does not fit the simulation grid");
  }

  const int n = paths.n_paths;
  Eigen::MatrixXd x(n, 3), y(n, 3);
  segment_features(paths, i, 0, ks, x, 0);
  segment_features(paths, j, ks, ke, y, 0);
  int zcols = 1;
  for (int v : k) zcols += v == j ? 3 : 6;
  Eigen::MatrixXd z(n, zcols);
  z.col(0).setOnes();
  int col = 1;
  for (int v : k) {
    segment_features(paths, v, 0, ks, z, col);
    col += 3;
    if (v != j) {
      segment_features(paths, v, ks, ke, z, col);
      col += 3;
    }
  }

  const Eigen::MatrixXd rx = residual_scores(x, z);
  const Eigen::MatrixXd ry = residual_scores(y, z);
  if (rx.cols() == 0 || ry.cols() == 0) {
    throw Error("degenerate CI test: features without variance");
  }

  CiTestResult result;
  result.statistic = max_abs_correlation(rx, ry);
  std::uint64_t stream = (std::uint64_t(i) << 40) | (std::uint64_t(j) << 32) |
                         k.mask();
  std::mt19937_64 rng(derive_seed(paths.seed, stream));
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Eigen::MatrixXd shuffled(n, ry.cols());
  int exceed = 0;
  for (int b = 0; b < options.permutations; ++b) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int r = 0; r < n; ++r) shuffled.row(r) = ry.row(perm[r]);
    if (max_abs_correlation(rx, shuffled) >= result.statistic - 1e-12) {
      ++exceed;
    }
  }
  result.p_value = (1.0 + exceed) / (1.0 + options.permutations);
  result.independent = result.p_value >= options.alpha;
  return result;
}

}  // namespace esep
