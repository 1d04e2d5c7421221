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

#include "esep/graph_io.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace esep {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<int> to_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

[[noreturn]] void fail_line(int line, const std::string& what) {
  throw Error("line " + std::to_string(line) + ": " + what);
}

}  // namespace

Dmg parse_graph_text(std::string_view text) {
  std::optional<Dmg> g;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.starts_with("nodes")) {
      if (g) fail_line(line_no, "duplicate 'nodes' line");
      auto d = to_int(line.substr(5));
      if (!d) fail_line(line_no, "expected 'nodes <d>'");
      g = Dmg(*d);
      continue;
    }
    if (!g) fail_line(line_no, "edge before 'nodes' line");

    bool bidirected = true;
    size_t op = line.find("<->");
    size_t op_len = 3;
    if (op == std::string_view::npos) {
      bidirected = false;
      op = line.find("->");
      op_len = 2;
    }
    if (op == std::string_view::npos) fail_line(line_no, "unrecognized line");
    auto u = to_int(line.substr(0, op));
    auto v = to_int(line.substr(op + op_len));
    if (!u || !v) fail_line(line_no, "bad node index");
    if (*u < 1 || *u > g->node_count() || *v < 1 || *v > g->node_count()) {
      fail_line(line_no, "node index out of range");
    }
    if (bidirected) {
      if (*u == *v) fail_line(line_no, "bidirected self-loop");
      *g = g->with_bidirected(*u - 1, *v - 1);
    } else {
      *g = g->with_directed(*u - 1, *v - 1);
    }
  }
  if (!g) throw Error("missing 'nodes' line");
  return *g;
}

std::string format_graph_text(const Dmg& g) {
  std::string out = "nodes " + std::to_string(g.node_count()) + "\n";
  for (const DirectedEdge& e : g.directed_edges()) {
    out += std::to_string(e.from + 1) + " -> " + std::to_string(e.to + 1) +
           "\n";
  }
  for (const BidirectedEdge& e : g.bidirected_edges()) {
    // A projected self-pair cannot be parsed back, so it is kept as a comment.
    if (e.a == e.b) out += "# ";
    out += std::to_string(e.a + 1) + " <-> " + std::to_string(e.b + 1) + "\n";
  }
  return out;
}

nlohmann::json graph_to_json(const Dmg& g) {
  nlohmann::json directed = nlohmann::json::array();
  for (const DirectedEdge& e : g.directed_edges()) {
    directed.push_back({e.from, e.to});
  }
  nlohmann::json bidirected = nlohmann::json::array();
  for (const BidirectedEdge& e : g.bidirected_edges()) {
    bidirected.push_back({e.a, e.b});
  }
  return {{"d", g.node_count()},
          {"directed", directed},
          {"bidirected", bidirected}};
}

Dmg graph_from_json(const nlohmann::json& j) {
  try {
    Dmg g(j.at("d").get<int>());
    for (const auto& e : j.at("directed")) {
      g = g.with_directed(e.at(0).get<int>(), e.at(1).get<int>());
    }
    if (j.contains("bidirected")) {
      for (const auto& e : j.at("bidirected")) {
        g = g.with_bidirected(e.at(0).get<int>(), e.at(1).get<int>());
      }
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed graph JSON: ") + e.what());
  }
}

Dmg parse_graph(std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed graph JSON: ") + e.what());
    }
    return graph_from_json(j);
  }
  return parse_graph_text(text);
}

Dmg read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_graph(buf.str());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_graph_file(const std::string& path, const Dmg& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write graph file '" + path + "'");
  if (path.ends_with(".json")) {
    out << graph_to_json(g).dump(2) << "\n";
  } else {
    out << format_graph_text(g);
  }
}

NodeSet parse_node_list(std::string_view text) {
  NodeSet s;
  text = trim(text);
  if (text.empty()) return s;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    auto v = to_int(text.substr(start, comma - start));
    if (!v || *v < 1 || *v > kMaxNodes) {
      throw Error("bad node list '" + std::string(text) + "'");
    }
    s = s.with(*v - 1);
    start = comma + 1;
  }
  return s;
}

}  // namespace esep
