#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "homdens/error.hpp"
#include "homdens/graph.hpp"

namespace homdens {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Parses exactly two whitespace-separated unsigned integers.
inline bool parse_pair(std::string_view line, std::uint64_t& a, std::uint64_t& b) {
  line = trim(line);
  const char* p = line.data();
  const char* end = p + line.size();
  auto r1 = std::from_chars(p, end, a);
  if (r1.ec != std::errc{} || r1.ptr == end || (*r1.ptr != ' ' && *r1.ptr != '\t')) return false;
  p = r1.ptr;
  while (p != end && (*p == ' ' || *p == '\t')) ++p;
  auto r2 = std::from_chars(p, end, b);
  return r2.ec == std::errc{} && r2.ptr == end;
}

}  // namespace detail

/// Edge-list text: "n m" header, then m lines "u v" (0-indexed).
inline Graph parse_edge_list(std::string_view text) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  std::uint64_t n = 0, m = 0;
  bool header = false;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (detail::trim(line).empty()) continue;
    std::uint64_t a = 0, b = 0;
    if (!detail::parse_pair(line, a, b))
      throw parse_error("edge list line " + std::to_string(lineno) + ": expected two non-negative integers");
    if (!header) {
      n = a;
      m = b;
      header = true;
      edges.reserve(m);
    } else {
      if (edges.size() == m)
        throw parse_error("edge list line " + std::to_string(lineno) + ": more edges than the header's m=" +
                          std::to_string(m));
      edges.emplace_back(a, b);
    }
  }
  if (!header) throw parse_error("edge list is empty (missing 'n m' header)");
  if (edges.size() != m)
    throw parse_error("edge list declares m=" + std::to_string(m) + " but has " + std::to_string(edges.size()) +
                      " edges");
  return Graph(n, edges);
}

/// Canonical form: "n m\n" then sorted "u v\n" lines with u < v.
inline std::string write_edge_list(const Graph& g) {
  std::string out = std::to_string(g.n()) + " " + std::to_string(g.m()) + "\n";
  out.reserve(out.size() + g.m() * 14);
  for (auto [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

inline void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot write '" + path + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw parse_error("write to '" + path + "' failed");
}

inline Graph read_edge_list_file(const std::string& path) {
  try {
    return parse_edge_list(read_file(path));
  } catch (const std::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
}

struct DatasetRecord {
  std::string id;
  Graph graph;
  std::string label;
};

namespace detail {

inline std::string scalar_to_string(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer() || j.is_number_unsigned()) return j.dump();
  throw parse_error("expected a string or integer");
}

}  // namespace detail

/// Parses one JSON dataset record:
///   {"id": str, "n": int, "edges": [[u,v],...], "label": int|str,
///    "node_attrs": [x0,...]}   (node_attrs optional)
inline DatasetRecord parse_dataset_record(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw parse_error("record is not a JSON object");
  DatasetRecord rec;
  try {
    if (!j.contains("id")) throw parse_error("missing field 'id'");
    rec.id = detail::scalar_to_string(j.at("id"));
  } catch (const parse_error& e) {
    throw parse_error(std::string("field 'id': ") + e.what());
  }
  auto fail = [&](const std::string& msg) { return parse_error("record '" + rec.id + "': " + msg); };
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 0)
    throw fail("field 'n' must be a non-negative integer");
  if (!j.contains("edges") || !j["edges"].is_array()) throw fail("field 'edges' must be an array");
  if (!j.contains("label")) throw fail("missing field 'label'");
  try {
    rec.label = detail::scalar_to_string(j["label"]);
  } catch (const parse_error&) {
    throw fail("field 'label' must be a string or integer");
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  edges.reserve(j["edges"].size());
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        e[0].get<std::int64_t>() < 0 || e[1].get<std::int64_t>() < 0)
      throw fail("each edge must be a pair of non-negative integers");
    edges.emplace_back(e[0].get<std::uint64_t>(), e[1].get<std::uint64_t>());
  }
  std::optional<std::vector<double>> attrs;
  if (j.contains("node_attrs") && !j["node_attrs"].is_null()) {
    if (!j["node_attrs"].is_array()) throw fail("field 'node_attrs' must be an array of numbers");
    attrs.emplace();
    for (const auto& a : j["node_attrs"]) {
      if (!a.is_number()) throw fail("field 'node_attrs' must be an array of numbers");
      attrs->push_back(a.get<double>());
    }
  }
  try {
    rec.graph = Graph(j["n"].get<std::uint64_t>(), edges, std::move(attrs));
  } catch (const invalid_graph& e) {
    throw fail(e.what());
  }
  return rec;
}

/// Newline-delimited records; blank lines are skipped. Errors carry the line
/// number and, once known, the record id.
inline std::vector<DatasetRecord> parse_dataset(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    try {
      out.push_back(parse_dataset_record(line));
    } catch (const parse_error& e) {
      throw parse_error("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<DatasetRecord> parse_dataset(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dataset(in);
}

/// One dataset-format line (no trailing newline).
inline std::string write_dataset_record(const std::string& id, const Graph& g, const std::string& label) {
  nlohmann::json j;
  j["id"] = id;
  j["n"] = g.n();
  auto edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  j["label"] = label;
  if (g.has_attrs()) j["node_attrs"] = *g.node_attrs();
  return j.dump();
}

}  // namespace homdens
