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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string_view>
#include <thread>
#include <unordered_map>

namespace esep {

std::string_view kind_name(GraphKind k) {
  return k == GraphKind::kDg ? "dg" : "dmg";
}

GraphKind parse_kind(std::string_view name) {
  if (name == "dg") return GraphKind::kDg;
  if (name == "dmg") return GraphKind::kDmg;
  throw Error("unknown graph kind '" + std::string(name) + "'");
}

GraphCodec::GraphCodec(int d, GraphKind kind) : d_(d), kind_(kind) {
  if (d < 1 || d > 7) {
    throw Error("enumeration supports 1 to 7 nodes, got " + std::to_string(d));
  }
}

int GraphCodec::slot_count() const {
  int slots = d_ * d_;
  if (kind_ == GraphKind::kDmg) slots += d_ * (d_ - 1) / 2;
  return slots;
}

Dmg GraphCodec::decode(std::uint64_t code) const {
  if (code >= count()) throw Error("graph code out of range");
  std::vector<DirectedEdge> directed;
  std::vector<BidirectedEdge> bidirected;
  for (int i = 0; i < d_; ++i) {
    for (int j = 0; j < d_; ++j) {
      if ((code >> (i * d_ + j)) & 1U) directed.push_back({i, j});
    }
  }
  if (kind_ == GraphKind::kDmg) {
    int slot = d_ * d_;
    for (int i = 0; i < d_; ++i) {
      for (int j = i + 1; j < d_; ++j, ++slot) {
        if ((code >> slot) & 1U) bidirected.push_back({i, j});
      }
    }
  }
  return Dmg::from_edges(d_, directed, bidirected);
}

std::uint64_t GraphCodec::encode(const Dmg& g) const {
  if (g.node_count() != d_) throw Error("graph size does not match codec");
  std::uint64_t code = 0;
  for (const DirectedEdge& e : g.directed_edges()) {
    code |= std::uint64_t{1} << (e.from * d_ + e.to);
  }
  const std::vector<BidirectedEdge> bi = g.bidirected_edges();
  if (!bi.empty() && kind_ == GraphKind::kDg) {
    throw Error("bidirected edge in a DG encoding");
  }
  for (const BidirectedEdge& e : bi) {
    if (e.a == e.b) throw Error("bidirected self-loop has no code slot");
    // Pairs before row a, then the offset within row a.
    int index = e.a * d_ - e.a * (e.a + 1) / 2 + (e.b - e.a - 1);
    code |= std::uint64_t{1} << (d_ * d_ + index);
  }
  return code;
}

namespace {

constexpr std::uint64_t kShardSize = std::uint64_t{1} << 14;

std::filesystem::path shard_path(const EnumerationOptions& o,
                                 std::uint64_t shard) {
  return std::filesystem::path(o.checkpoint_dir) /
         (std::string(kind_name(o.kind)) + "-d" + std::to_string(o.d) + "-" +
          std::string(criterion_name(o.criterion)) + "-" +
          std::to_string(shard) + ".bin");
}

bool load_shard(const std::filesystem::path& path, std::uint64_t* out,
                std::size_t words) {
  std::error_code ec;
  if (std::filesystem::file_size(path, ec) != words * sizeof(std::uint64_t) ||
      ec) {
    return false;
  }
  std::ifstream in(path, std::ios::binary);
  in.read(reinterpret_cast<char*>(out), words * sizeof(std::uint64_t));
  return static_cast<bool>(in);
}

void save_shard(const std::filesystem::path& path, const std::uint64_t* data,
                std::size_t words) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data),
              words * sizeof(std::uint64_t));
    if (!out) throw Error("cannot write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

Enumeration enumerate_and_group(const EnumerationOptions& o) {
  const GraphCodec codec(o.d, o.kind);
  if (codec.slot_count() > o.max_slots) {
    throw Error(std::to_string(codec.slot_count()) +
                " edge slots exceed the cap of " + std::to_string(o.max_slots));
  }
  if (!o.checkpoint_dir.empty()) {
    std::filesystem::create_directories(o.checkpoint_dir);
  }
  const std::uint64_t total = codec.count();
  const std::size_t words = (Fingerprint::bit_count(o.d) + 63) / 64;
  std::vector<std::uint64_t> fps(total * words, 0);

  const std::uint64_t shards = (total + kShardSize - 1) / kShardSize;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> done{0};
  std::mutex progress_mu;
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    try {
      for (std::uint64_t s = next++; s < shards; s = next++) {
        const std::uint64_t lo = s * kShardSize;
        const std::uint64_t hi = std::min(total, lo + kShardSize);
        std::uint64_t* out = fps.data() + lo * words;
        const std::size_t n = (hi - lo) * words;
        const bool resumed = !o.checkpoint_dir.empty() &&
                             load_shard(shard_path(o, s), out, n);
        if (!resumed) {
          for (std::uint64_t code = lo; code < hi; ++code) {
            compute_fingerprint_bits(
                codec.decode(code), o.criterion,
                std::span<std::uint64_t>(fps.data() + code * words, words));
          }
          if (!o.checkpoint_dir.empty()) save_shard(shard_path(o, s), out, n);
        }
        const std::uint64_t finished = done += hi - lo;
        if (o.progress) {
          std::lock_guard<std::mutex> lock(progress_mu);
          o.progress(finished, total);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = shards;
    }
  };
  const int workers = std::max(1, o.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  Enumeration e;
  e.d = o.d;
  e.kind = o.kind;
  e.criterion = o.criterion;
  e.total = total;
  auto key_of = [&](std::uint64_t code) {
    return std::string_view(
        reinterpret_cast<const char*>(fps.data() + code * words),
        words * sizeof(std::uint64_t));
  };
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(1024);
  for (std::uint64_t code = 0; code < total; ++code) {
    auto [it, inserted] = index.try_emplace(key_of(code), e.classes.size());
    if (inserted) {
      GraphClass c;
      c.fingerprint.assign(fps.begin() + code * words,
                           fps.begin() + (code + 1) * words);
      e.classes.push_back(std::move(c));
    }
    GraphClass& c = e.classes[it->second];
    c.members.push_back(code);
    c.supremum |= code;
  }
  for (GraphClass& c : e.classes) {
    c.has_greatest = key_of(c.supremum) == key_of(c.members.front());
  }
  return e;
}

nlohmann::json VerificationReport::to_json(const Enumeration& e,
                                           bool with_timing) const {
  nlohmann::json failed = nlohmann::json::array();
  for (std::size_t k : failures) {
    const GraphClass& c = e.classes[k];
    Fingerprint fp(d, criterion);
    std::copy(c.fingerprint.begin(), c.fingerprint.end(),
              fp.mutable_words().begin());
    failed.push_back({{"fingerprint", fp.to_hex()},
                      {"members", c.members},
                      {"supremum", c.supremum}});
  }
  nlohmann::json j = {{"d", d},
                      {"kind", std::string(kind_name(kind))},
                      {"criterion", std::string(criterion_name(criterion))},
                      {"total", total},
                      {"class_count", class_count},
                      {"member_sum", member_sum},
                      {"failure_count", failures.size()},
                      {"failures", failed}};
  if (with_timing) j["seconds"] = seconds;
  return j;
}

VerificationReport verify_greatest_elements(const Enumeration& e) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.d = e.d;
  r.kind = e.kind;
  r.criterion = e.criterion;
  r.total = e.total;
  r.class_count = e.classes.size();
  for (std::size_t k = 0; k < e.classes.size(); ++k) {
    const GraphClass& c = e.classes[k];
    r.member_sum += c.members.size();
    // The supremum lies in the class, and it contains every member by
    // construction, so it is the greatest element.
    if (!c.has_greatest) r.failures.push_back(k);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  return r;
}

std::optional<SigmaCounterexample> find_sigma_counterexample(
    int d, Criterion criterion) {
  EnumerationOptions o;
  o.d = d;
  o.kind = GraphKind::kDg;
  o.criterion = criterion;
  const Enumeration e = enumerate_and_group(o);
  const GraphCodec codec(d, GraphKind::kDg);

  std::optional<SigmaCounterexample> fallback;
  for (const GraphClass& c : e.classes) {
    if (c.has_greatest) continue;
    const Dmg sup = codec.decode(c.supremum);
    const Fingerprint sup_fp = fingerprint(sup, criterion);
    const Fingerprint member_fp = fingerprint(codec.decode(c.members.front()),
                                              criterion);
    std::optional<Triple> any, preferred;
    for (int a = 0; a < d && !preferred; ++a) {
      for (std::uint32_t rank = 0; rank < (1U << (d - 1)) && !preferred;
           ++rank) {
        const NodeSet cset = Fingerprint::conditioning_set(a, rank);
        for (int b = 0; b < d; ++b) {
          if (!member_fp.bit(a, b, cset) || sup_fp.bit(a, b, cset)) continue;
          Triple t{NodeSet::single(a), NodeSet::single(b), cset};
          if (!any) any = t;
          if (a != b && cset.size() == 1 && !cset.contains(b)) {
            preferred = t;
            break;
          }
        }
      }
    }
    if (!any) continue;
    SigmaCounterexample x;
    for (std::uint64_t code : c.members) x.members.push_back(codec.decode(code));
    x.supremum = sup;
    x.witness = preferred ? *preferred : *any;
    if (preferred) return x;
    if (!fallback) fallback = std::move(x);
  }
  return fallback;
}

}  // namespace esep
