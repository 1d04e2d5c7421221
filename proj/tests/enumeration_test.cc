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

#include "esep/enumeration.h"

#include <filesystem>
#include <random>

#include "doctest.h"
#include "esep/equivalence.h"
#include "test_support.h"

namespace esep {
namespace {

namespace fs = std::filesystem;
using testing::graph;

Enumeration run(int d, GraphKind kind, Criterion crit, int workers = 1,
                std::string dir = "") {
  EnumerationOptions o;
  o.d = d;
  o.kind = kind;
  o.criterion = crit;
  o.workers = workers;
  o.checkpoint_dir = std::move(dir);
  return enumerate_and_group(o);
}

TEST_CASE("codec layout") {
  GraphCodec dg(3, GraphKind::kDg);
  CHECK(dg.slot_count() == 9);
  CHECK(dg.encode(graph(3, {{1, 2}})) == 2);
  CHECK(dg.encode(graph(3, {{2, 1}})) == 8);
  GraphCodec dmg(3, GraphKind::kDmg);
  CHECK(dmg.slot_count() == 12);
  CHECK(dmg.encode(graph(3, {}, {{1, 2}})) == 1U << 9);
  CHECK(dmg.encode(graph(3, {}, {{2, 3}})) == 1U << 11);
  CHECK(GraphCodec(4, GraphKind::kDmg).count() == 4194304);
  CHECK(GraphCodec(4, GraphKind::kDg).count() == 65536);
  CHECK_THROWS_AS(GraphCodec(8, GraphKind::kDg), Error);
  CHECK_THROWS_AS(dg.encode(graph(3, {}, {{1, 2}})), Error);
  CHECK_THROWS_AS(dg.decode(512), Error);
}

TEST_CASE("codec round-trips") {
  for (int d = 1; d <= 3; ++d) {
    for (GraphKind kind : {GraphKind::kDg, GraphKind::kDmg}) {
      GraphCodec c(d, kind);
      for (std::uint64_t code = 0; code < c.count(); ++code) {
        REQUIRE(c.encode(c.decode(code)) == code);
      }
    }
  }
  std::mt19937_64 rng(47);
  GraphCodec c(5, GraphKind::kDmg);
  for (int trial = 0; trial < 1000; ++trial) {
    Dmg g = testing::random_graph(rng, 5, 0.3, 0.3);
    REQUIRE(c.decode(c.encode(g)) == g);
  }
}

TEST_CASE("one node gives two classes") {
  Enumeration e = run(1, GraphKind::kDg, Criterion::kE);
  CHECK(e.total == 2);
  REQUIRE(e.classes.size() == 2);
  CHECK(e.classes[0].members == std::vector<std::uint64_t>{0});
  CHECK(e.classes[1].members == std::vector<std::uint64_t>{1});
}

TEST_CASE("classes partition the codes and share fingerprints") {
  for (int d = 2; d <= 3; ++d) {
    for (GraphKind kind : {GraphKind::kDg, GraphKind::kDmg}) {
      Enumeration e = run(d, kind, Criterion::kE);
      GraphCodec c(d, kind);
      std::vector<bool> seen(c.count(), false);
      std::uint64_t first = 0;
      for (const GraphClass& cls : e.classes) {
        REQUIRE(!cls.members.empty());
        REQUIRE(cls.members.front() >= first);
        first = cls.members.front();
        std::uint64_t sup = 0;
        for (std::uint64_t code : cls.members) {
          REQUIRE_FALSE(seen[code]);
          seen[code] = true;
          sup |= code;
          Fingerprint fp = fingerprint(c.decode(code), Criterion::kE);
          REQUIRE(std::equal(fp.words().begin(), fp.words().end(),
                             cls.fingerprint.begin(), cls.fingerprint.end()));
        }
        REQUIRE(cls.supremum == sup);
      }
      for (bool s : seen) REQUIRE(s);
    }
  }
}

TEST_CASE("greatest elements of DG classes match the construction") {
  for (int d = 2; d <= 4; ++d) {
    Enumeration e = run(d, GraphKind::kDg, Criterion::kE);
    GraphCodec c(d, GraphKind::kDg);
    VerificationReport r = verify_greatest_elements(e);
    CHECK(r.failures.empty());
    CHECK(r.member_sum == c.count());
    for (const GraphClass& cls : e.classes) {
      REQUIRE(cls.has_greatest);
      for (std::uint64_t code : cls.members) {
        REQUIRE(c.encode(greatest_element_dg(c.decode(code))) ==
                cls.supremum);
      }
    }
  }
}

TEST_CASE("DMG classes up to 3 nodes have greatest elements") {
  for (int d = 2; d <= 3; ++d) {
    VerificationReport r =
        verify_greatest_elements(run(d, GraphKind::kDmg, Criterion::kE));
    CHECK(r.failures.empty());
    CHECK(r.total == GraphCodec(d, GraphKind::kDmg).count());
  }
}

TEST_CASE("sigma classes on 3 nodes can lack a greatest element") {
  Enumeration e = run(3, GraphKind::kDg, Criterion::kSigma);
  CHECK_FALSE(verify_greatest_elements(e).failures.empty());
}

TEST_CASE("reports do not depend on the worker count") {
  Enumeration one = run(3, GraphKind::kDmg, Criterion::kE, 1);
  Enumeration four = run(3, GraphKind::kDmg, Criterion::kE, 4);
  CHECK(verify_greatest_elements(one).to_json(one, false).dump() ==
        verify_greatest_elements(four).to_json(four, false).dump());
}

TEST_CASE("checkpoints resume to the same result") {
  fs::path dir = fs::temp_directory_path() / "esep_enum_checkpoint_test";
  fs::remove_all(dir);
  EnumerationOptions o;
  o.d = 4;
  o.kind = GraphKind::kDg;
  o.criterion = Criterion::kE;
  o.checkpoint_dir = dir.string();
  Enumeration fresh = enumerate_and_group(o);
  std::size_t shards = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    (void)entry;
    ++shards;
  }
  CHECK(shards == 4);
  // Drop one shard: the rerun recomputes it and loads the others.
  fs::remove(dir / "dg-d4-e-2.bin");
  Enumeration resumed = enumerate_and_group(o);
  CHECK(verify_greatest_elements(fresh).to_json(fresh, false) ==
        verify_greatest_elements(resumed).to_json(resumed, false));
  fs::remove_all(dir);
}

TEST_CASE("slot cap guards the enumeration") {
  EnumerationOptions o;
  o.d = 5;
  o.kind = GraphKind::kDg;
  CHECK_THROWS_AS(enumerate_and_group(o), Error);
}

TEST_CASE("sigma counterexample on 3 nodes") {
  auto cx = find_sigma_counterexample(3);
  REQUIRE(cx);
  REQUIRE(cx->members.size() >= 2);
  Dmg sup(3);
  for (const Dmg& m : cx->members) sup = edge_union(sup, m);
  CHECK(cx->supremum == sup);
  const Triple& t = cx->witness;
  for (const Dmg& m : cx->members) {
    CHECK(sigma_separated(m, t.a, t.b, t.c));
  }
  CHECK_FALSE(sigma_separated(sup, t.a, t.b, t.c));
  CHECK(t.a.size() == 1);
  CHECK(t.b.size() == 1);
  CHECK(t.c.size() == 1);
  Fingerprint fp = fingerprint(cx->members.front(), Criterion::kSigma);
  for (const Dmg& m : cx->members) {
    CHECK(fingerprint(m, Criterion::kSigma) == fp);
  }
}

TEST_CASE("no E-separation counterexample on 3 nodes") {
  CHECK_FALSE(find_sigma_counterexample(3, Criterion::kE));
  CHECK_FALSE(find_sigma_counterexample(2, Criterion::kE));
}

TEST_CASE("kind names round-trip") {
  CHECK(parse_kind(kind_name(GraphKind::kDg)) == GraphKind::kDg);
  CHECK(parse_kind(kind_name(GraphKind::kDmg)) == GraphKind::kDmg);
  CHECK_THROWS_AS(parse_kind("cpdag"), Error);
}

}  // namespace
}  // namespace esep
