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

#include "esep/independence_model.h"

#include <functional>
#include <tuple>
#include <utility>

namespace esep {

Fingerprint::Fingerprint(int d, Criterion criterion)
    : d_(d), criterion_(criterion) {
  if (d < 0 || d > kMaxNodes) {
    throw Error("fingerprint node count " + std::to_string(d) +
                " out of range");
  }
  words_.assign((bit_count(d) + 63) / 64, 0);
}

std::size_t Fingerprint::index(int d, int a, int b, NodeSet c) {
  const std::uint32_t m = c.mask();
  const std::uint32_t low = m & ((1U << a) - 1);
  const std::uint32_t high = (m >> (a + 1)) << a;
  return ((std::size_t(a) * d + b) << (d - 1)) + (low | high);
}

NodeSet Fingerprint::conditioning_set(int a, std::uint32_t rank) {
  const std::uint32_t low = rank & ((1U << a) - 1);
  const std::uint32_t high = (rank >> a) << (a + 1);
  return NodeSet(low | high);
}

bool Fingerprint::bit(int a, int b, NodeSet c) const {
  if (a < 0 || a >= d_ || b < 0 || b >= d_ ||
      !c.is_subset_of(NodeSet::range(d_)) || c.contains(a)) {
    throw Error("fingerprint query out of range");
  }
  std::size_t i = index(d_, a, b, c);
  return (words_[i / 64] >> (i % 64)) & 1U;
}

void Fingerprint::set(int a, int b, NodeSet c, bool value) {
  if (a < 0 || a >= d_ || b < 0 || b >= d_ ||
      !c.is_subset_of(NodeSet::range(d_)) || c.contains(a)) {
    throw Error("fingerprint query out of range");
  }
  std::size_t i = index(d_, a, b, c);
  const std::uint64_t m = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[i / 64] |= m;
  } else {
    words_[i / 64] &= ~m;
  }
}

std::string Fingerprint::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t nibbles = (size() + 3) / 4;
  std::string out(nibbles, '0');
  for (std::size_t k = 0; k < nibbles; ++k) {
    out[k] = kDigits[(words_[k / 16] >> (4 * (k % 16))) & 0xF];
  }
  return out;
}

nlohmann::json Fingerprint::to_json() const {
  return {{"d", d_},
          {"criterion", std::string(criterion_name(criterion_))},
          {"layout_version", kFingerprintLayoutVersion},
          {"bits", to_hex()}};
}

Fingerprint Fingerprint::from_json(const nlohmann::json& j) {
  try {
    if (j.at("layout_version").get<int>() != kFingerprintLayoutVersion) {
      throw Error("unsupported fingerprint layout version");
    }
    Fingerprint fp(j.at("d").get<int>(),
                   parse_criterion(j.at("criterion").get<std::string>()));
    const std::string hex = j.at("bits").get<std::string>();
    if (hex.size() != (fp.size() + 3) / 4) {
      throw Error("fingerprint length does not match d");
    }
    for (std::size_t k = 0; k < hex.size(); ++k) {
      char ch = hex[k];
      std::uint64_t nib;
      if (ch >= '0' && ch <= '9') {
        nib = ch - '0';
      } else if (ch >= 'a' && ch <= 'f') {
        nib = ch - 'a' + 10;
      } else {
        throw Error("bad hex digit in fingerprint");
      }
      fp.words_[k / 16] |= nib << (4 * (k % 16));
    }
    return fp;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed fingerprint JSON: ") + e.what());
  }
}

void compute_fingerprint_bits(const Dmg& g, Criterion criterion,
                              std::span<std::uint64_t> words) {
  const int d = g.node_count();
  if (d == 0) return;
  const std::uint32_t subsets = 1U << (d - 1);
  auto set_bit = [&](std::size_t i) { words[i / 64] |= std::uint64_t{1} << (i % 64); };

  if (criterion == Criterion::kE) {
    const LiftedDmg l = lift(g);
    const Reachability r(l.graph, true);
    for (int a = 0; a < d; ++a) {
      const NodeSet src = NodeSet::single(a);
      for (std::uint32_t rank = 0; rank < subsets; ++rank) {
        const NodeSet c = Fingerprint::conditioning_set(a, rank);
        const NodeSet cond = c | l.in_layer(c, 1);
        const NodeSet reach = r.open_from(src, cond);
        const std::size_t base = (std::size_t(a) * d) << (d - 1);
        for (int b = 0; b < d; ++b) {
          bool sep;
          if (c.contains(b)) {
            sep = !r.open_from(src, cond.without(b + d)).contains(b + d);
          } else {
            sep = !reach.contains(b + d);
          }
          if (sep) set_bit(base + (std::size_t(b) << (d - 1)) + rank);
        }
      }
    }
    return;
  }

  const Reachability r(MaskGraph::from(g), criterion == Criterion::kSigma);
  for (int a = 0; a < d; ++a) {
    for (std::uint32_t rank = 0; rank < subsets; ++rank) {
      const NodeSet c = Fingerprint::conditioning_set(a, rank);
      const NodeSet reach = r.open_from(NodeSet::single(a), c);
      const std::size_t base = (std::size_t(a) * d) << (d - 1);
      for (int b = 0; b < d; ++b) {
        if (!reach.contains(b)) set_bit(base + (std::size_t(b) << (d - 1)) + rank);
      }
    }
  }
}

Fingerprint fingerprint(const Dmg& g, Criterion criterion) {
  Fingerprint fp(g.node_count(), criterion);
  compute_fingerprint_bits(g, criterion, fp.mutable_words());
  return fp;
}

bool triple_in_model(const Fingerprint& fp, NodeSet a, NodeSet b, NodeSet c) {
  if (!(a | b | c).is_subset_of(NodeSet::range(fp.d()))) {
    throw Error("triple outside the model's node set");
  }
  if (a.intersects(c)) return true;
  for (int x : a) {
    for (int y : b) {
      if (!fp.bit(x, y, c)) return false;
    }
  }
  return true;
}

TernaryModel::TernaryModel(Fingerprint fp) : rep_(std::move(fp)) {}

TernaryModel::TernaryModel(Dmg g, Criterion criterion)
    : rep_(GraphView{std::move(g), criterion}) {}

TernaryModel::TernaryModel(int d, std::set<Triple> triples)
    : rep_(Explicit{d, std::move(triples)}) {
  if (d < 0 || d > kMaxNodes) throw Error("model node count out of range");
}

int TernaryModel::d() const {
  if (auto* fp = std::get_if<Fingerprint>(&rep_)) return fp->d();
  if (auto* gv = std::get_if<GraphView>(&rep_)) return gv->g.node_count();
  return std::get<Explicit>(rep_).d;
}

bool TernaryModel::contains(NodeSet a, NodeSet b, NodeSet c) const {
  if (auto* fp = std::get_if<Fingerprint>(&rep_)) {
    return triple_in_model(*fp, a, b, c);
  }
  if (auto* gv = std::get_if<GraphView>(&rep_)) {
    if (a.intersects(c)) return true;
    return separated(gv->g, {a, b, c, gv->criterion});
  }
  return std::get<Explicit>(rep_).triples.contains(Triple{a, b, c});
}

Fingerprint TernaryModel::singleton_fingerprint() const {
  Criterion crit = Criterion::kE;
  if (auto* fp = std::get_if<Fingerprint>(&rep_)) crit = fp->criterion();
  if (auto* gv = std::get_if<GraphView>(&rep_)) crit = gv->criterion;
  const int n = d();
  Fingerprint out(n, crit);
  if (n == 0) return out;
  for (int a = 0; a < n; ++a) {
    for (std::uint32_t rank = 0; rank < (1U << (n - 1)); ++rank) {
      NodeSet c = Fingerprint::conditioning_set(a, rank);
      for (int b = 0; b < n; ++b) {
        if (contains(NodeSet::single(a), NodeSet::single(b), c)) {
          out.set(a, b, c, true);
        }
      }
    }
  }
  return out;
}

TernaryModel marginal_model(const Fingerprint& fp, NodeSet v_obs) {
  if (v_obs.empty()) throw Error("marginal model over empty node set");
  if (!v_obs.is_subset_of(NodeSet::range(fp.d()))) {
    throw Error("observed set outside the model's node set");
  }
  const std::vector<int> obs = v_obs.to_vector();
  const int n = static_cast<int>(obs.size());
  Fingerprint out(n, fp.criterion());
  for (int a = 0; a < n; ++a) {
    for (std::uint32_t rank = 0; rank < (1U << (n - 1)); ++rank) {
      const NodeSet c = Fingerprint::conditioning_set(a, rank);
      NodeSet original;
      for (int k : c) original = original.with(obs[k]);
      for (int b = 0; b < n; ++b) {
        if (fp.bit(obs[a], obs[b], original)) out.set(a, b, c, true);
      }
    }
  }
  return TernaryModel(std::move(out));
}

std::string_view axiom_name(Axiom a) {
  switch (a) {
    case Axiom::kLR: return "LR";
    case Axiom::kRR: return "RR";
    case Axiom::kLD: return "LD";
    case Axiom::kRD: return "RD";
    case Axiom::kLWU: return "LWU";
    case Axiom::kRWU: return "RWU";
    case Axiom::kLC: return "LC";
    case Axiom::kRC: return "RC";
    case Axiom::kLI: return "LI";
    case Axiom::kRI: return "RI";
    case Axiom::kLCo: return "LCo";
    case Axiom::kRCo: return "RCo";
  }
  return "?";
}

Axiom parse_axiom(std::string_view name) {
  for (Axiom a : kAllAxioms) {
    if (axiom_name(a) == name) return a;
  }
  throw Error("unknown axiom '" + std::string(name) + "'");
}

bool axiom_instance_holds(const TernaryModel& m, Axiom axiom,
                          const AxiomInstance& x) {
  auto in = [&](NodeSet a, NodeSet b, NodeSet c) { return m.contains(a, b, c); };
  const NodeSet A = x.a, B = x.b, C = x.c, D = x.d;
  switch (axiom) {
    case Axiom::kLR:
      return in(A, B, A);
    case Axiom::kRR:
      return in(A, B, B);
    case Axiom::kLD:
      return !in(A, B, C) || in(D, B, C);
    case Axiom::kRD:
      return !in(A, B, C) || in(A, D, C);
    case Axiom::kLWU:
      return !in(A | D, B, C) || in(A, B, C | D);
    case Axiom::kRWU:
      return !in(A, B | D, C) || in(A, B, C | D);
    case Axiom::kLC:
      return !(in(A, B, C) && in(D, B, A | C)) || in(A | D, B, C);
    case Axiom::kRC:
      return !(in(A, B, C) && in(A, D, B | C)) || in(A, B | D, C);
    case Axiom::kLI:
      return !(in(A, B, C) && in(C, B, A)) || in(A | C, B, A & C);
    case Axiom::kRI:
      return !(in(A, B, C) && in(A, C, B)) || in(A, B | C, B & C);
    case Axiom::kLCo: {
      bool all = true;
      for (int a : A) all = all && in(NodeSet::single(a), B, C);
      return in(A, B, C) == all;
    }
    case Axiom::kRCo: {
      bool all = true;
      for (int b : B) all = all && in(A, NodeSet::single(b), C);
      return in(A, B, C) == all;
    }
  }
  return true;
}

namespace {

// Calls f for every instance in the axiom's domain.
void for_each_instance(int d, Axiom axiom,
                       const std::function<void(const AxiomInstance&)>& f) {
  const std::uint32_t full = (1U << d) - 1;
  if (axiom == Axiom::kLR || axiom == Axiom::kRR) {
    for (std::uint32_t a = 0; a <= full; ++a) {
      for (std::uint32_t b = 0; b <= full; ++b) {
        f({NodeSet(a), NodeSet(b), NodeSet(), NodeSet()});
      }
    }
    return;
  }
  const bool sub = axiom == Axiom::kLD || axiom == Axiom::kRD;
  const int labels = sub ? 4 : 5;
  int total = 1;
  for (int k = 0; k < d; ++k) total *= labels;
  for (int code = 0; code < total; ++code) {
    NodeSet sets[4];
    int rest = code;
    for (int v = 0; v < d; ++v) {
      int label = rest % labels;
      rest /= labels;
      if (label > 0) sets[label - 1] = sets[label - 1].with(v);
    }
    if (!sub) {
      f({sets[0], sets[1], sets[2], sets[3]});
      continue;
    }
    const NodeSet host = axiom == Axiom::kLD ? sets[0] : sets[1];
    // Every submask of host, including the empty set.
    std::uint32_t s = host.mask();
    while (true) {
      f({sets[0], sets[1], sets[2], NodeSet(s)});
      if (s == 0) break;
      s = (s - 1) & host.mask();
    }
  }
}

}  // namespace

std::optional<AxiomInstance> check_axiom(const TernaryModel& m, Axiom axiom) {
  std::optional<AxiomInstance> best;
  auto key = [](const AxiomInstance& x) {
    return std::make_tuple(x.a.size() + x.b.size() + x.c.size() + x.d.size(),
                           x.a, x.b, x.c, x.d);
  };
  for_each_instance(m.d(), axiom, [&](const AxiomInstance& x) {
    if (best && key(x) >= key(*best)) return;
    if (!axiom_instance_holds(m, axiom, x)) best = x;
  });
  return best;
}

}  // namespace esep
