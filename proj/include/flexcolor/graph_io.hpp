#pragma once

// "flexgraph v1": a header line followed by one line per vertex,
//   v <id>: <neighbor ids in clockwise rotation order>
// Blank lines and '#' comments are ignored.

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flexcolor/graph.hpp"

namespace flexcolor {

struct GraphFile {
  Graph graph;
  RotationSystem rotation;  // listed order; meaningful only when an embedding is required
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  std::string s = pos == std::string::npos ? line : line.substr(0, pos);
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline int parse_int(const std::string& token, const std::string& context) {
  try {
    std::size_t used = 0;
    int value = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse, context + ": expected integer, got '" + token + "'");
  }
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

/// Non-empty, comment-stripped lines; checks the header against `magic`.
inline std::vector<std::pair<int, std::string>> content_lines(std::istream& in, const std::string& magic) {
  std::vector<std::pair<int, std::string>> out;
  std::string line;
  int number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    std::string s = strip_comment(line);
    if (s.empty()) continue;
    if (!header) {
      if (split_ws(s) != split_ws(magic))
        throw Error(ErrorCode::parse, "line " + std::to_string(number) + ": expected header '" + magic + "'");
      header = true;
      continue;
    }
    out.emplace_back(number, s);
  }
  if (!header) throw Error(ErrorCode::parse, "missing header '" + magic + "'");
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline GraphFile parse_flexgraph(std::istream& in) {
  GraphFile out;
  std::map<Vertex, std::vector<Vertex>> listed;
  for (const auto& [number, line] : detail::content_lines(in, "flexgraph v1")) {
    const std::string where = "line " + std::to_string(number);
    auto colon = line.find(':');
    if (line.rfind("v ", 0) != 0 || colon == std::string::npos)
      throw Error(ErrorCode::parse, where + ": expected 'v <id>: <neighbors>'");
    Vertex v = detail::parse_int(detail::strip_comment(line.substr(2, colon - 2)), where);
    if (listed.count(v)) throw Error(ErrorCode::parse, where + ": vertex " + std::to_string(v) + " declared twice");
    auto& nbrs = listed[v];
    for (const auto& tok : detail::split_ws(line.substr(colon + 1))) nbrs.push_back(detail::parse_int(tok, where));
  }
  for (const auto& [v, nbrs] : listed) {
    out.graph.add_vertex(v);
    std::set<Vertex> seen;
    for (Vertex w : nbrs) {
      if (w == v) throw Error(ErrorCode::parse, "self-loop at vertex " + std::to_string(v));
      if (!listed.count(w))
        throw Error(ErrorCode::parse, "vertex " + std::to_string(v) + " lists undeclared neighbor " + std::to_string(w));
      if (!seen.insert(w).second)
        throw Error(ErrorCode::parse, "parallel edge " + std::to_string(v) + "-" + std::to_string(w));
      const auto& back = listed.at(w);
      if (std::find(back.begin(), back.end(), v) == back.end())
        throw Error(ErrorCode::parse, "edge " + std::to_string(v) + "-" + std::to_string(w) + " listed on one side only");
      if (v < w) out.graph.add_edge(v, w);
    }
  }
  out.rotation.order = std::move(listed);
  return out;
}

inline GraphFile parse_flexgraph(const std::string& text) {
  std::istringstream in(text);
  return parse_flexgraph(in);
}

inline GraphFile load_flexgraph(const std::string& path) { return parse_flexgraph(detail::read_file(path)); }

/// Writes neighbors in rotation order when the rotation covers the graph,
/// otherwise in ascending order.
inline std::string serialize_flexgraph(const Graph& g, const RotationSystem* rotation = nullptr) {
  const bool use_rotation = rotation && rotation->covers(g);
  std::ostringstream out;
  out << "flexgraph v1\n";
  for (Vertex v : g.vertices()) {
    out << "v " << v << ":";
    const auto& nbrs = use_rotation ? rotation->order.at(v) : g.neighbors(v);
    for (Vertex w : nbrs) out << ' ' << w;
    out << '\n';
  }
  return out.str();
}

inline std::string serialize_flexgraph(const GraphFile& f) { return serialize_flexgraph(f.graph, &f.rotation); }

}  // namespace flexcolor
