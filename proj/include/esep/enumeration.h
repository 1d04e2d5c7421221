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

// Exhaustive enumeration of labeled DGs and DMGs, grouped by fingerprint.

#ifndef ESEP_ENUMERATION_H_
#define ESEP_ENUMERATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esep/graph.h"
#include "esep/independence_model.h"
#include "json.hpp"

namespace esep {

enum class GraphKind { kDg, kDmg };

std::string_view kind_name(GraphKind k);
GraphKind parse_kind(std::string_view name);

// Bijection between graphs and integer codes. Bit i*d + j is the directed
// edge i -> j; bidirected pairs {i < j} follow in lexicographic order at bits
// d*d + pair index. Bidirected self-pairs have no slot.
class GraphCodec {
 public:
  GraphCodec(int d, GraphKind kind);

  int d() const { return d_; }
  GraphKind kind() const { return kind_; }
  int slot_count() const;
  std::uint64_t count() const { return std::uint64_t{1} << slot_count(); }

  Dmg decode(std::uint64_t code) const;
  std::uint64_t encode(const Dmg& g) const;

 private:
  int d_;
  GraphKind kind_;
};

struct EnumerationOptions {
  int d = 0;
  GraphKind kind = GraphKind::kDg;
  Criterion criterion = Criterion::kE;
  int workers = 1;
  // Completed shards are written here and reloaded on the next run.
  std::string checkpoint_dir;
  int max_slots = 22;
  std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

struct GraphClass {
  std::vector<std::uint64_t> fingerprint;  // raw fingerprint words
  std::vector<std::uint64_t> members;      // increasing codes
  std::uint64_t supremum = 0;              // union of all members
  bool has_greatest = false;               // supremum is a member
};

struct Enumeration {
  int d = 0;
  GraphKind kind = GraphKind::kDg;
  Criterion criterion = Criterion::kE;
  std::uint64_t total = 0;
  // Ordered by smallest member code.
  std::vector<GraphClass> classes;
};

// Throws Error when the slot count exceeds options.max_slots.
Enumeration enumerate_and_group(const EnumerationOptions& options);

struct VerificationReport {
  int d = 0;
  GraphKind kind = GraphKind::kDg;
  Criterion criterion = Criterion::kE;
  std::uint64_t total = 0;
  std::size_t class_count = 0;
  std::uint64_t member_sum = 0;
  // Indices into Enumeration::classes without a greatest element.
  std::vector<std::size_t> failures;
  double seconds = 0;

  // Omits wall-clock time unless asked, so reports compare byte for byte.
  nlohmann::json to_json(const Enumeration& e, bool with_timing) const;
};

VerificationReport verify_greatest_elements(const Enumeration& e);

struct SigmaCounterexample {
  std::vector<Dmg> members;
  Dmg supremum;
  // Separated in every member, not in the supremum.
  Triple witness;
};

// Searches all DGs on d nodes for a class under `criterion` whose edge union
// is not in the class. Witnesses with three distinct singleton sets are
// preferred.
std::optional<SigmaCounterexample> find_sigma_counterexample(
    int d, Criterion criterion = Criterion::kSigma);

}  // namespace esep

#endif  // ESEP_ENUMERATION_H_
