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

// Text format (1-based):
//
//   # comment
//   nodes 4
//   1 -> 2
//   2 <-> 3
//
// JSON format (0-based): {"d": 4, "directed": [[0,1]], "bidirected": [[1,2]]}

#ifndef ESEP_GRAPH_IO_H_
#define ESEP_GRAPH_IO_H_

#include <string>
#include <string_view>

#include "esep/graph.h"
#include "json.hpp"

namespace esep {

Dmg parse_graph_text(std::string_view text);
std::string format_graph_text(const Dmg& g);

nlohmann::json graph_to_json(const Dmg& g);
Dmg graph_from_json(const nlohmann::json& j);

// Picks the format from the first non-blank character ('{' means JSON).
Dmg parse_graph(std::string_view text);
Dmg read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const Dmg& g);

// Parses "1,3,4" (1-based, empty string allowed) into a node set.
NodeSet parse_node_list(std::string_view text);

}  // namespace esep

#endif  // ESEP_GRAPH_IO_H_
