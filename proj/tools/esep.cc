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

// Command-line front end. Exit status: 0 success, 1 domain error, 2 usage.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "esep/discovery.h"
#include "esep/enumeration.h"
#include "esep/equivalence.h"
#include "esep/graph.h"
#include "esep/graph_io.h"
#include "esep/independence_model.h"
#include "esep/sde.h"
#include "esep/separation.h"
#include "json.hpp"

namespace {

using esep::Dmg;
using esep::Error;
using esep::NodeSet;
using nlohmann::json;

enum class Level { kError, kWarn, kInfo, kDebug };
Level g_level = Level::kWarn;

void log(Level level, const std::string& msg) {
  static const char* kNames[] = {"error", "warn", "info", "debug"};
  if (level <= g_level) {
    std::cerr << "[" << kNames[static_cast<int>(level)] << "] " << msg << "\n";
  }
}

int default_workers() {
  if (const char* env = std::getenv("ESEP_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
    log(Level::kWarn, "ignoring ESEP_WORKERS=" + std::string(env));
  }
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

void emit_graph(const Dmg& g, const std::string& out, bool as_json) {
  if (!out.empty()) {
    esep::write_graph_file(out, g);
    return;
  }
  if (as_json) {
    std::cout << esep::graph_to_json(g).dump() << "\n";
  } else {
    std::cout << esep::format_graph_text(g);
  }
}

json triple_json(const esep::Triple& t) {
  return {{"a", t.a.to_vector()}, {"b", t.b.to_vector()}, {"c", t.c.to_vector()}};
}

std::string triple_text(const esep::Triple& t) {
  return "(" + t.a.to_string(1) + ", " + t.b.to_string(1) + ", " +
         t.c.to_string(1) + ")";
}

json walk_json(const esep::Walk& w) {
  static const char* kinds[] = {"->", "<-", "<->"};
  json edges = json::array();
  for (esep::EdgeKind k : w.edges) edges.push_back(kinds[static_cast<int>(k)]);
  return {{"nodes", w.nodes}, {"edges", edges}};
}

struct Common {
  bool json = false;
  std::string log_level = "warn";
};

// sep

struct SepArgs {
  std::string criterion = "e";
  std::string graph;
  std::string a, b, c;
  bool witness = false;
};

int run_sep(const SepArgs& args, const Common& common) {
  Dmg g = esep::read_graph_file(args.graph);
  esep::SeparationQuery q{esep::parse_node_list(args.a),
                          esep::parse_node_list(args.b),
                          esep::parse_node_list(args.c),
                          esep::parse_criterion(args.criterion)};
  const bool sep = esep::separated(g, q);
  std::optional<esep::Walk> walk;
  if (args.witness && !sep) walk = esep::find_open_walk(g, q);
  const int lifted_d = q.criterion == esep::Criterion::kE ? g.node_count() : 0;
  if (common.json) {
    json j = {{"criterion", args.criterion}, {"separated", sep}};
    if (walk) {
      j["witness"] = walk_json(*walk);
      j["witness_text"] = esep::format_walk(*walk, lifted_d);
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << (sep ? "separated" : "connected") << "\n";
    if (walk) std::cout << esep::format_walk(*walk, lifted_d) << "\n";
  }
  return 0;
}

// lift

int run_lift(const std::string& path, const std::string& out,
             const Common& common) {
  Dmg g = esep::read_graph_file(path);
  if (2 * g.node_count() > esep::kMaxNodes) {
    throw Error("lifted graph would exceed " +
                std::to_string(esep::kMaxNodes) + " nodes");
  }
  esep::LiftedDmg l = esep::lift(g);
  Dmg flat(l.graph.n);
  for (int v = 0; v < l.graph.n; ++v) {
    for (int w : l.graph.out[v]) flat = flat.with_directed(v, w);
    for (int w : l.graph.bi[v]) {
      if (w >= v) flat = flat.with_bidirected(v, w);
    }
  }
  if (!common.json && out.empty()) {
    std::cout << "# node k is k_0 for k <= " << g.node_count()
              << ", else (k - " << g.node_count() << ")_1\n";
  }
  emit_graph(flat, out, common.json);
  return 0;
}

// project

int run_project(const std::string& path, const std::string& observe,
                const std::string& out, const Common& common) {
  Dmg g = esep::read_graph_file(path);
  esep::Projection p =
      esep::latent_projection(g, esep::parse_node_list(observe));
  if (common.json && out.empty()) {
    json j = esep::graph_to_json(p.graph);
    j["observed"] = p.observed;
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (out.empty()) {
    std::cout << "# observed:";
    for (int v : p.observed) std::cout << " " << v + 1;
    std::cout << "\n";
  }
  emit_graph(p.graph, out, common.json);
  return 0;
}

// model

int run_model(const std::string& path, const std::string& criterion,
              bool axioms, const Common& common) {
  Dmg g = esep::read_graph_file(path);
  esep::Fingerprint fp = esep::fingerprint(g, esep::parse_criterion(criterion));
  json checks = json::object();
  if (axioms) {
    if (g.node_count() > 4) throw Error("axiom checks need at most 4 nodes");
    esep::TernaryModel m(fp);
    for (esep::Axiom ax : esep::kAllAxioms) {
      auto w = esep::check_axiom(m, ax);
      json entry = {{"holds", !w}};
      if (w) {
        entry["counterexample"] = {{"a", w->a.to_vector()},
                                   {"b", w->b.to_vector()},
                                   {"c", w->c.to_vector()},
                                   {"d", w->d.to_vector()}};
      }
      checks[std::string(esep::axiom_name(ax))] = entry;
    }
  }
  if (common.json) {
    json j = fp.to_json();
    if (axioms) j["axioms"] = checks;
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << "criterion " << criterion << "\nbits " << fp.to_hex() << "\n";
  for (auto& [name, entry] : checks.items()) {
    std::cout << name << ": " << (entry["holds"] ? "holds" : "fails");
    if (!entry["holds"]) {
      const json& c = entry["counterexample"];
      auto set = [](const json& v) {
        return NodeSet::from(v.get<std::vector<int>>()).to_string(1);
      };
      std::cout << " A=" << set(c["a"]) << " B=" << set(c["b"])
                << " C=" << set(c["c"]) << " D=" << set(c["d"]);
    }
    std::cout << "\n";
  }
  return 0;
}

// equiv

int run_equiv(const std::string& p1, const std::string& p2,
              const Common& common) {
  Dmg g1 = esep::read_graph_file(p1);
  Dmg g2 = esep::read_graph_file(p2);
  auto t = esep::distinguishing_triple(g1, g2);
  if (common.json) {
    json j = {{"equivalent", !t}};
    if (t) j["witness_triple"] = triple_json(*t);
    std::cout << j.dump() << "\n";
  } else if (!t) {
    std::cout << "equivalent\n";
  } else {
    std::cout << "not equivalent\n" << triple_text(*t) << "\n";
  }
  return 0;
}

// greatest

int run_greatest(const std::string& path, bool enumerate,
                 const std::string& out, const Common& common) {
  Dmg g = esep::read_graph_file(path);
  if (!enumerate) {
    emit_graph(esep::greatest_element_dg(g), out, common.json);
    return 0;
  }
  const esep::GraphKind kind =
      g.is_dg() ? esep::GraphKind::kDg : esep::GraphKind::kDmg;
  esep::GraphCodec codec(g.node_count(), kind);
  if (codec.slot_count() > 22) throw Error("class scan limited to 22 edge slots");
  const esep::Fingerprint target = esep::fingerprint(g, esep::Criterion::kE);
  std::vector<Dmg> members;
  for (std::uint64_t code = 0; code < codec.count(); ++code) {
    Dmg m = codec.decode(code);
    if (esep::fingerprint(m, esep::Criterion::kE) == target) members.push_back(m);
  }
  log(Level::kInfo, "class has " + std::to_string(members.size()) + " members");
  auto top = esep::find_greatest_in_class(members);
  if (!top) {
    if (common.json) {
      std::cout << json{{"greatest", nullptr}, {"members", members.size()}}.dump()
                << "\n";
    } else {
      std::cout << "no greatest element among " << members.size()
                << " members\n";
    }
    return 0;
  }
  emit_graph(members[*top], out, common.json);
  return 0;
}

// enumerate

struct EnumArgs {
  int d = 0;
  std::string kind = "dg";
  std::string criterion = "e";
  int workers = 0;
  std::string out;
  std::string checkpoint;
  bool timing = false;
};

int run_enumerate(const EnumArgs& args, const Common& common) {
  esep::EnumerationOptions o;
  o.d = args.d;
  o.kind = esep::parse_kind(args.kind);
  o.criterion = esep::parse_criterion(args.criterion);
  o.workers = args.workers > 0 ? args.workers : default_workers();
  o.checkpoint_dir = args.checkpoint;
  o.progress = [](std::uint64_t done, std::uint64_t total) {
    log(Level::kInfo, std::to_string(done) + "/" + std::to_string(total) +
                          " graphs");
  };
  const auto start = std::chrono::steady_clock::now();
  esep::Enumeration e = esep::enumerate_and_group(o);
  esep::VerificationReport r = esep::verify_greatest_elements(e);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  const json report = r.to_json(e, args.timing);

  if (!args.out.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(args.out);
    std::ofstream(fs::path(args.out) / "report.json") << report.dump(2) << "\n";
    esep::GraphCodec codec(e.d, e.kind);
    for (std::size_t n = 0; n < r.failures.size(); ++n) {
      const esep::GraphClass& c = e.classes[r.failures[n]];
      const fs::path dir = fs::path(args.out) / ("failure-" + std::to_string(n));
      fs::create_directories(dir);
      for (std::uint64_t code : c.members) {
        esep::write_graph_file(
            (dir / ("member-" + std::to_string(code) + ".txt")).string(),
            codec.decode(code));
      }
      esep::write_graph_file((dir / "supremum.txt").string(),
                             codec.decode(c.supremum));
    }
  }
  if (common.json) {
    std::cout << report.dump() << "\n";
  } else {
    std::cout << "d " << r.d << " kind " << args.kind << " criterion "
              << args.criterion << "\n"
              << "graphs " << r.total << "\nclasses " << r.class_count
              << "\nwithout greatest element " << r.failures.size() << "\n";
    if (args.timing) std::cout << "seconds " << r.seconds << "\n";
  }
  return 0;
}

// discover

struct DiscoverArgs {
  std::string oracle = "graph";
  std::string truth;
  std::string paths;
  double alpha = 0.05;
  double s = 0.5;
  double h = 0.5;
  int permutations = 199;
  std::string out;
  std::string log_file;
};

int run_discover(const DiscoverArgs& args, const Common& common) {
  esep::CiOracle oracle;
  int d;
  if (args.oracle == "graph") {
    if (args.truth.empty()) throw Error("--oracle graph needs --truth");
    Dmg truth = esep::read_graph_file(args.truth);
    d = truth.node_count();
    oracle = esep::graph_oracle(truth);
  } else if (args.oracle == "data") {
    if (args.paths.empty()) throw Error("--oracle data needs --paths");
    auto bundle =
        std::make_shared<esep::PathBundle>(esep::PathBundle::load(args.paths));
    d = bundle->d;
    esep::CiTestOptions opts;
    opts.alpha = args.alpha;
    opts.s = args.s;
    opts.h = args.h;
    opts.permutations = args.permutations;
    oracle = esep::data_oracle(bundle, opts);
  } else {
    throw Error("unknown oracle '" + args.oracle + "'");
  }
  std::vector<esep::CiQuery> queries;
  Dmg found = esep::ct_pc(d, oracle, std::nullopt, &queries);
  log(Level::kInfo, std::to_string(queries.size()) + " CI queries");

  json qlog = json::array();
  for (const esep::CiQuery& q : queries) {
    qlog.push_back({{"i", q.i}, {"j", q.j}, {"k", q.k.to_vector()},
                    {"independent", q.independent}});
  }
  if (!args.log_file.empty()) {
    std::ofstream f(args.log_file);
    if (!f) throw Error("cannot write '" + args.log_file + "'");
    f << qlog.dump(2) << "\n";
  }
  if (common.json && args.out.empty()) {
    std::cout << json{{"graph", esep::graph_to_json(found)}, {"queries", qlog}}
                     .dump()
              << "\n";
    return 0;
  }
  emit_graph(found, args.out, common.json);
  return 0;
}

// simulate

struct SimulateArgs {
  std::string adjacency;
  int paths = 400;
  int steps = 200;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& args, const Common& common) {
  Dmg adj = esep::read_graph_file(args.adjacency);
  int redraws = 0;
  esep::LinearSdeParams p = esep::sample_params(adj, args.seed, &redraws);
  if (redraws > 0) {
    log(Level::kInfo, "redrew drift " + std::to_string(redraws) +
                          " times for stability");
  }
  esep::PathBundle b = esep::simulate(
      p, args.paths, args.steps, args.horizon, args.seed,
      args.workers > 0 ? args.workers : default_workers());
  b.save(args.out);
  if (common.json) {
    std::cout << json{{"out", args.out},
                      {"paths", b.n_paths},
                      {"steps", b.n_steps},
                      {"redraws", redraws},
                      {"params", p.to_json()}}
                     .dump()
              << "\n";
  } else {
    std::cout << "wrote " << b.n_paths << " paths to " << args.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"E-separation toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--json", common.json, "Machine-readable output");
  app.add_option("--log-level", common.log_level, "error, warn, info or debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  std::function<int()> action;

  SepArgs sep;
  auto* sep_cmd = app.add_subcommand("sep", "Separation query");
  sep_cmd->add_option("--criterion", sep.criterion)
      ->check(CLI::IsMember({"d", "sigma", "e"}));
  sep_cmd->add_option("--graph", sep.graph)->required();
  sep_cmd->add_option("--a", sep.a)->required();
  sep_cmd->add_option("--b", sep.b)->required();
  sep_cmd->add_option("--c", sep.c);
  sep_cmd->add_flag("--witness", sep.witness, "Print an open walk");
  sep_cmd->callback([&] { action = [&] { return run_sep(sep, common); }; });

  std::string lift_graph, lift_out;
  auto* lift_cmd = app.add_subcommand("lift", "Two-layer lifted graph");
  lift_cmd->add_option("--graph", lift_graph)->required();
  lift_cmd->add_option("--out", lift_out);
  lift_cmd->callback([&] {
    action = [&] { return run_lift(lift_graph, lift_out, common); };
  });

  std::string proj_graph, proj_obs, proj_out;
  auto* proj_cmd = app.add_subcommand("project", "Latent projection");
  proj_cmd->add_option("--graph", proj_graph)->required();
  proj_cmd->add_option("--observe", proj_obs, "Observed nodes, e.g. 1,2")
      ->required();
  proj_cmd->add_option("--out", proj_out);
  proj_cmd->callback([&] {
    action = [&] { return run_project(proj_graph, proj_obs, proj_out, common); };
  });

  std::string acy_graph, acy_out;
  auto* acy_cmd = app.add_subcommand("acyclify", "Acyclification of a DG");
  acy_cmd->add_option("--graph", acy_graph)->required();
  acy_cmd->add_option("--out", acy_out);
  acy_cmd->callback([&] {
    action = [&] {
      emit_graph(esep::acyclify(esep::read_graph_file(acy_graph)), acy_out,
                 common.json);
      return 0;
    };
  });

  std::string model_graph, model_crit = "e";
  bool model_axioms = false;
  auto* model_cmd = app.add_subcommand("model", "Independence fingerprint");
  model_cmd->add_option("--graph", model_graph)->required();
  model_cmd->add_option("--criterion", model_crit)
      ->check(CLI::IsMember({"d", "sigma", "e"}));
  model_cmd->add_flag("--axioms", model_axioms, "Check graphoid axioms");
  model_cmd->callback([&] {
    action = [&] {
      return run_model(model_graph, model_crit, model_axioms, common);
    };
  });

  std::string g1, g2;
  auto* equiv_cmd = app.add_subcommand("equiv", "Markov equivalence");
  equiv_cmd->add_option("--g1", g1)->required();
  equiv_cmd->add_option("--g2", g2)->required();
  equiv_cmd->callback([&] { action = [&] { return run_equiv(g1, g2, common); }; });

  std::string top_graph, top_out;
  bool construct = false, scan = false;
  auto* top_cmd = app.add_subcommand("greatest", "Greatest class member");
  top_cmd->add_option("--graph", top_graph)->required();
  auto* construct_flag =
      top_cmd->add_flag("--construct", construct, "Closure rules (DGs)");
  top_cmd->add_flag("--enumerate", scan, "Scan all graphs of the same size")
      ->excludes(construct_flag);
  top_cmd->add_option("--out", top_out);
  top_cmd->callback([&] {
    action = [&] { return run_greatest(top_graph, scan, top_out, common); };
  });

  EnumArgs en;
  auto* en_cmd = app.add_subcommand("enumerate", "Exhaustive class search");
  en_cmd->add_option("--d", en.d)->required()->check(CLI::Range(1, 7));
  en_cmd->add_option("--kind", en.kind)->check(CLI::IsMember({"dg", "dmg"}));
  en_cmd->add_option("--criterion", en.criterion)
      ->check(CLI::IsMember({"d", "sigma", "e"}));
  en_cmd->add_option("--workers", en.workers, "Default: ESEP_WORKERS or cores");
  en_cmd->add_option("--out", en.out, "Report and failure classes");
  en_cmd->add_option("--checkpoint", en.checkpoint, "Shard directory");
  en_cmd->add_flag("--timing", en.timing, "Include wall-clock time");
  en_cmd->callback([&] { action = [&] { return run_enumerate(en, common); }; });

  DiscoverArgs disc;
  auto* disc_cmd = app.add_subcommand("discover", "ctPC discovery");
  disc_cmd->set_help_flag("--help", "Print this help message and exit");
  disc_cmd->add_option("--oracle", disc.oracle)
      ->check(CLI::IsMember({"graph", "data"}));
  disc_cmd->add_option("--truth", disc.truth);
  disc_cmd->add_option("--paths", disc.paths);
  disc_cmd->add_option("--alpha", disc.alpha)->check(CLI::Range(0.0, 1.0));
  disc_cmd->add_option("--s", disc.s);
  disc_cmd->add_option("--h", disc.h);
  disc_cmd->add_option("--permutations", disc.permutations)
      ->check(CLI::PositiveNumber);
  disc_cmd->add_option("--out", disc.out);
  disc_cmd->add_option("--log", disc.log_file, "JSON log of CI queries");
  disc_cmd->callback([&] { action = [&] { return run_discover(disc, common); }; });

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Linear SDE paths");
  sim_cmd->add_option("--adjacency", sim.adjacency)->required();
  sim_cmd->add_option("--paths", sim.paths)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--steps", sim.steps)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--horizon", sim.horizon)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed)->required();
  sim_cmd->add_option("--workers", sim.workers);
  sim_cmd->add_option("--out", sim.out)->required();
  sim_cmd->callback([&] { action = [&] { return run_simulate(sim, common); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::map<std::string, Level> levels = {{"error", Level::kError},
                                               {"warn", Level::kWarn},
                                               {"info", Level::kInfo},
                                               {"debug", Level::kDebug}};
  g_level = levels.at(common.log_level);
  try {
    return action();
  } catch (const Error& e) {
    log(Level::kError, e.what());
    return 1;
  }
}
