// Copyright 2026 The rmsa-bp Authors
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

// JSON readers and writers for topology, modulation and demand files.
//
//   topology:    {"nodes": [id...], "links": [{"a", "b", "length_km"}...],
//                 "slot_capacity": LC}
//   modulations: [{"name", "slot_rate_gbps", "max_reach_km"}...]
//   demands:     [{"id", "origin", "destination", "bandwidth_gbps"}...]
//
// Identifiers may be strings or non-negative integers. Internally they are
// labels; a label that is the canonical decimal form of an integer is
// written back as a JSON number.

#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmsa/error.hpp"
#include "rmsa/instance.hpp"

namespace rmsa {

namespace io_detail {

using nlohmann::json;

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + byte, '\n'));
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of(text, e.byte == 0 ? 0 : e.byte - 1), "",
                     e.what());
  }
}

// Line of the first occurrence of `"key"` after the `nth` occurrence of
// `anchor`; approximate location for field errors.
inline std::size_t locate(const std::string& text, const std::string& anchor,
                          std::size_t nth) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i <= nth; ++i) {
    pos = text.find(anchor, i == 0 ? pos : pos + 1);
    if (pos == std::string::npos) return 0;
  }
  return line_of(text, pos);
}

struct Reader {
  const std::string& text;
  const std::string& source;

  [[noreturn]] void fail(const std::string& field, std::size_t line,
                         const std::string& msg) const {
    throw ParseError(source, line, field, msg);
  }

  const json& member(const json& obj, const char* key, const std::string& path,
                     std::size_t line) const {
    if (!obj.is_object()) fail(path, line, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, line, "missing field");
    return *it;
  }

  std::string identifier(const json& v, const std::string& path,
                         std::size_t line) const {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return std::to_string(v.get<std::int64_t>());
    }
    fail(path, line, "expected a string or non-negative integer identifier");
  }

  double number(const json& v, const std::string& path,
                std::size_t line) const {
    if (!v.is_number()) fail(path, line, "expected a number");
    return v.get<double>();
  }

  const json& array(const json& v, const std::string& path,
                    std::size_t line) const {
    if (!v.is_array()) fail(path, line, "expected an array");
    return v;
  }
};

inline json identifier_json(const std::string& label) {
  const bool digits =
      !label.empty() && label.size() <= 18 &&
      std::all_of(label.begin(), label.end(),
                  [](char c) { return c >= '0' && c <= '9'; }) &&
      (label.size() == 1 || label[0] != '0');
  if (digits) return json(std::stoll(label));
  return json(label);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path.string(), 0, "", "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace io_detail

inline NetworkTopology parse_topology(const std::string& text,
                                      const std::string& source = "<topology>") {
  using io_detail::json;
  const json doc = io_detail::parse_text(text, source);
  io_detail::Reader r{text, source};
  if (!doc.is_object()) r.fail("", 1, "expected a top-level object");

  const json& nodes = r.array(r.member(doc, "nodes", "", 1), "nodes",
                              io_detail::locate(text, "\"nodes\"", 0));
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeIndex> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "nodes[" + std::to_string(i) + "]";
    std::string label =
        r.identifier(nodes[i], path, io_detail::locate(text, "\"nodes\"", 0));
    if (!index.emplace(label, labels.size()).second) {
      r.fail(path, io_detail::locate(text, "\"nodes\"", 0),
             "duplicate node " + label);
    }
    labels.push_back(std::move(label));
  }

  const std::size_t links_line = io_detail::locate(text, "\"links\"", 0);
  const json& links = r.array(r.member(doc, "links", "", 1), "links",
                              links_line);
  std::vector<Link> parsed;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string path = "links[" + std::to_string(i) + "]";
    const std::size_t line = io_detail::locate(text, "\"length_km\"", i);
    const json& l = links[i];
    auto endpoint = [&](const char* key) {
      std::string label = r.identifier(r.member(l, key, path, line),
                                       path + "." + key, line);
      auto it = index.find(label);
      if (it == index.end()) {
        r.fail(path + "." + key, line, "undeclared node " + label);
      }
      return it->second;
    };
    Link link;
    link.a = endpoint("a");
    link.b = endpoint("b");
    link.length_km = r.number(r.member(l, "length_km", path, line),
                              path + ".length_km", line);
    if (link.a == link.b) {
      r.fail(path, line, "self-loop on node " + labels[link.a]);
    }
    parsed.push_back(link);
  }

  const json& lc = r.member(doc, "slot_capacity", "", 1);
  if (!lc.is_number_integer()) {
    r.fail("slot_capacity", io_detail::locate(text, "\"slot_capacity\"", 0),
           "expected an integer");
  }
  try {
    return NetworkTopology(std::move(labels), std::move(parsed),
                           lc.get<int>());
  } catch (const InstanceError& e) {
    throw InstanceError(source + ": " + e.what());
  }
}

inline std::vector<Modulation> parse_modulations(
    const std::string& text, const std::string& source = "<modulations>") {
  using io_detail::json;
  const json doc = io_detail::parse_text(text, source);
  io_detail::Reader r{text, source};
  r.array(doc, "", 1);
  std::vector<Modulation> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "[" + std::to_string(i) + "]";
    const std::size_t line = io_detail::locate(text, "\"name\"", i);
    const json& m = doc[i];
    const json& name = r.member(m, "name", path, line);
    if (!name.is_string()) r.fail(path + ".name", line, "expected a string");
    out.push_back(Modulation{
        name.get<std::string>(),
        r.number(r.member(m, "slot_rate_gbps", path, line),
                 path + ".slot_rate_gbps", line),
        r.number(r.member(m, "max_reach_km", path, line),
                 path + ".max_reach_km", line)});
  }
  try {
    validate_modulations(out);
  } catch (const InstanceError& e) {
    throw InstanceError(source + ": " + e.what());
  }
  return out;
}

// Demand endpoints are resolved against `topology`.
inline std::vector<Demand> parse_demands(const std::string& text,
                                         const NetworkTopology& topology,
                                         const std::string& source = "<demands>") {
  using io_detail::json;
  const json doc = io_detail::parse_text(text, source);
  io_detail::Reader r{text, source};
  r.array(doc, "", 1);
  std::vector<Demand> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "[" + std::to_string(i) + "]";
    const std::size_t line = io_detail::locate(text, "\"bandwidth_gbps\"", i);
    const json& d = doc[i];
    auto node = [&](const char* key) {
      std::string label = r.identifier(r.member(d, key, path, line),
                                       path + "." + key, line);
      auto n = topology.find_node(label);
      if (!n) r.fail(path + "." + key, line, "undeclared node " + label);
      return *n;
    };
    Demand demand;
    demand.id = r.identifier(r.member(d, "id", path, line), path + ".id", line);
    demand.origin = node("origin");
    demand.destination = node("destination");
    demand.bandwidth_gbps = r.number(r.member(d, "bandwidth_gbps", path, line),
                                     path + ".bandwidth_gbps", line);
    out.push_back(std::move(demand));
  }
  return out;
}

inline std::string topology_to_json(const NetworkTopology& topology) {
  using io_detail::json;
  json nodes = json::array();
  for (const auto& label : topology.node_labels()) {
    nodes.push_back(io_detail::identifier_json(label));
  }
  json links = json::array();
  for (const Link& l : topology.links()) {
    links.push_back({{"a", io_detail::identifier_json(topology.node_label(l.a))},
                     {"b", io_detail::identifier_json(topology.node_label(l.b))},
                     {"length_km", l.length_km}});
  }
  json doc = {{"nodes", nodes},
              {"links", links},
              {"slot_capacity", topology.slot_capacity()}};
  return doc.dump(2) + "\n";
}

inline std::string modulations_to_json(const std::vector<Modulation>& table) {
  using io_detail::json;
  json doc = json::array();
  for (const Modulation& m : table) {
    doc.push_back({{"name", m.name},
                   {"slot_rate_gbps", m.slot_rate_gbps},
                   {"max_reach_km", m.max_reach_km}});
  }
  return doc.dump(2) + "\n";
}

inline std::string demands_to_json(const std::vector<Demand>& demands,
                                   const NetworkTopology& topology) {
  using io_detail::json;
  json doc = json::array();
  for (const Demand& d : demands) {
    doc.push_back(
        {{"id", io_detail::identifier_json(d.id)},
         {"origin", io_detail::identifier_json(topology.node_label(d.origin))},
         {"destination",
          io_detail::identifier_json(topology.node_label(d.destination))},
         {"bandwidth_gbps", d.bandwidth_gbps}});
  }
  return doc.dump(2) + "\n";
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline ProblemInstance load_instance(const std::filesystem::path& topology_file,
                                     const std::filesystem::path& modulation_file,
                                     const std::filesystem::path& demand_file,
                                     int r_max) {
  NetworkTopology topology = parse_topology(
      io_detail::read_file(topology_file), topology_file.string());
  std::vector<Modulation> modulations = parse_modulations(
      io_detail::read_file(modulation_file), modulation_file.string());
  std::vector<Demand> demands = parse_demands(
      io_detail::read_file(demand_file), topology, demand_file.string());
  return ProblemInstance(std::move(topology), std::move(modulations),
                         std::move(demands), r_max);
}

inline NetworkTopology load_topology(const std::filesystem::path& path) {
  return parse_topology(io_detail::read_file(path), path.string());
}

inline std::vector<Modulation> load_modulations(
    const std::filesystem::path& path) {
  return parse_modulations(io_detail::read_file(path), path.string());
}

inline std::vector<Demand> load_demands(const std::filesystem::path& path,
                                        const NetworkTopology& topology) {
  return parse_demands(io_detail::read_file(path), topology, path.string());
}

// Writes topology.json, modulations.json and demands.json into `dir`.
inline void save_instance(const ProblemInstance& instance,
                          const std::filesystem::path& dir) {
  write_text_file(dir / "topology.json", topology_to_json(instance.topology()));
  write_text_file(dir / "modulations.json",
                  modulations_to_json(instance.modulations()));
  write_text_file(dir / "demands.json",
                  demands_to_json(instance.demands(), instance.topology()));
}

}  // namespace rmsa
