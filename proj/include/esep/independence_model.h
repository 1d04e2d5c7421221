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

// Independence models as sets of triples (A, B, C), and their singleton
// fingerprints.

#ifndef ESEP_INDEPENDENCE_MODEL_H_
#define ESEP_INDEPENDENCE_MODEL_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "esep/graph.h"
#include "esep/separation.h"
#include "json.hpp"

namespace esep {

inline constexpr int kFingerprintLayoutVersion = 1;

// One bit per singleton triple ({a}, {b}, C) with C ranging over subsets of
// V \ {a}. The bit is set iff the triple is in the model.
//
// Layout: bit ((a*d + b) << (d-1)) + rank(C), where rank(C) packs the mask
// of C with the bit of a squeezed out, so subsets are visited in increasing
// mask order.
class Fingerprint {
 public:
  Fingerprint() = default;
  Fingerprint(int d, Criterion criterion);

  int d() const { return d_; }
  Criterion criterion() const { return criterion_; }
  std::size_t size() const { return bit_count(d_); }

  bool bit(int a, int b, NodeSet c) const;
  void set(int a, int b, NodeSet c, bool value);

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  // Low nibble first: hex digit k holds bits 4k..4k+3.
  std::string to_hex() const;
  nlohmann::json to_json() const;
  static Fingerprint from_json(const nlohmann::json& j);

  static std::size_t bit_count(int d) {
    return d == 0 ? 0 : (std::size_t(d) * d) << (d - 1);
  }
  static std::size_t index(int d, int a, int b, NodeSet c);
  // Inverse of the rank used in index(): spreads `rank` around bit a.
  static NodeSet conditioning_set(int a, std::uint32_t rank);

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  int d_ = 0;
  Criterion criterion_ = Criterion::kE;
  std::vector<std::uint64_t> words_;
};

// Fills `words` (sized for Fingerprint::bit_count(g.node_count()) bits and
// zeroed by the caller) with the fingerprint bits of g.
void compute_fingerprint_bits(const Dmg& g, Criterion criterion,
                              std::span<std::uint64_t> words);

Fingerprint fingerprint(const Dmg& g, Criterion criterion);

// Set-valued membership: triples with A and C overlapping are in the model,
// otherwise all singleton pairs across A x B must be.
bool triple_in_model(const Fingerprint& fp, NodeSet a, NodeSet b, NodeSet c);

struct Triple {
  NodeSet a;
  NodeSet b;
  NodeSet c;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// An independence model over {0, ..., d-1}: a fingerprint, a graph queried
// with its separation criterion, or an explicit list of triples.
class TernaryModel {
 public:
  explicit TernaryModel(Fingerprint fp);
  TernaryModel(Dmg g, Criterion criterion);
  TernaryModel(int d, std::set<Triple> triples);

  int d() const;
  bool contains(NodeSet a, NodeSet b, NodeSet c) const;
  // The singleton restriction, for comparing models of different origin.
  Fingerprint singleton_fingerprint() const;

 private:
  struct GraphView {
    Dmg g;
    Criterion criterion;
  };
  struct Explicit {
    int d;
    std::set<Triple> triples;
  };
  std::variant<Fingerprint, GraphView, Explicit> rep_;
};

// Triples over v_obs only, relabeled to 0..|v_obs|-1. Throws Error if v_obs
// is empty.
TernaryModel marginal_model(const Fingerprint& fp, NodeSet v_obs);

enum class Axiom { kLR, kRR, kLD, kRD, kLWU, kRWU, kLC, kRC, kLI, kRI, kLCo, kRCo };

inline constexpr Axiom kAllAxioms[] = {
    Axiom::kLR,  Axiom::kRR,  Axiom::kLD, Axiom::kRD, Axiom::kLWU, Axiom::kRWU,
    Axiom::kLC,  Axiom::kRC,  Axiom::kLI, Axiom::kRI, Axiom::kLCo, Axiom::kRCo};

std::string_view axiom_name(Axiom a);
Axiom parse_axiom(std::string_view name);

// Assignment of the sets A, B, C and D appearing in an axiom.
struct AxiomInstance {
  NodeSet a;
  NodeSet b;
  NodeSet c;
  NodeSet d;
  friend bool operator==(const AxiomInstance&, const AxiomInstance&) = default;
};

// LR and RR range over all A, B. LD and RD take A, B, C pairwise disjoint
// and D inside A (resp. B). The remaining axioms take A, B, C, D pairwise
// disjoint. Weak union is checked in the form
//   LWU: (A u D, B, C) => (A, B, C u D)
//   RWU: (A, B u D, C) => (A, B, C u D).
bool axiom_instance_holds(const TernaryModel& m, Axiom axiom,
                          const AxiomInstance& x);

// The failing instance with the fewest total elements, ties broken by the
// masks of (A, B, C, D) in lexicographic order. nullopt if the axiom holds.
std::optional<AxiomInstance> check_axiom(const TernaryModel& m, Axiom axiom);

}  // namespace esep

#endif  // ESEP_INDEPENDENCE_MODEL_H_
