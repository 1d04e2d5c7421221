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

// Markov equivalence under E-separation.

#ifndef ESEP_EQUIVALENCE_H_
#define ESEP_EQUIVALENCE_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "esep/graph.h"
#include "esep/independence_model.h"

namespace esep {

// Fingerprint equality under E-separation. Throws Error on node-count
// mismatch.
bool markov_equivalent(const Dmg& g1, const Dmg& g2);

// A singleton triple in exactly one of the two E-separation models.
std::optional<Triple> distinguishing_triple(const Dmg& g1, const Dmg& g2);

// Graphical test for DGs: same SCCs, same parent set (self-loop included) for
// every singleton SCC, and same outside parents for every larger SCC.
bool dg_equivalent_characterization(const Dmg& g1, const Dmg& g2);

// The largest DG in the class of g: every larger SCC is completed with all
// internal edges and self-loops, and every outside parent of an SCC points
// to all its members. Singleton SCCs keep their parents.
Dmg greatest_element_dg(const Dmg& g);

// True iff no absent directed edge can be added without changing the model.
bool is_maximal(const Dmg& g);

// Whether adding the absent directed edge keeps the E-separation model, by
// the SCC rules: preserved iff e stays inside an SCC of size >= 2, or its
// source already has an edge into the target's SCC. Throws Error if e is
// present.
bool edge_move_preserves(const Dmg& g, DirectedEdge e);

// Whether adding the absent bidirected edge keeps the model. True without
// computation when i and j lie in different SCCs that are already joined by
// a bidirected edge; otherwise decided by comparing fingerprints.
bool bidirected_move_preserves(const Dmg& g, BidirectedEdge p);

struct EquivalenceClass {
  Fingerprint fingerprint;
  std::vector<Dmg> members;
  std::optional<std::size_t> greatest;
};

// Index of the member that contains every other member, if any.
std::optional<std::size_t> find_greatest_in_class(
    const std::vector<Dmg>& members);

}  // namespace esep

#endif  // ESEP_EQUIVALENCE_H_
