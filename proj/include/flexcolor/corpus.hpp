#pragma once

// Bundled configurations with their known verdicts.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flexcolor/reducibility.hpp"

namespace flexcolor {

/// Configuration from an edge list; vertices listed in `degree` are core, the
/// rest of the edge endpoints (and `extra_boundary`) are boundary.
inline Configuration make_configuration(std::string name, const std::vector<std::pair<Vertex, Vertex>>& edges,
                                        const std::map<Vertex, int>& degree,
                                        const std::set<Vertex>& extra_boundary = {},
                                        std::optional<std::set<Vertex>> fix = std::nullopt) {
  Configuration c;
  c.name = std::move(name);
  for (const auto& [v, d] : degree) c.pattern.add_vertex(v);
  for (Vertex b : extra_boundary) c.pattern.add_vertex(b);
  for (auto [u, v] : edges) c.pattern.add_edge(u, v);
  for (Vertex v : c.pattern.vertices())
    if (!degree.count(v)) c.boundary.insert(v);
  c.host_degree = degree;
  c.declared_fix = std::move(fix);
  validate_configuration(c);
  return c;
}

struct CorpusEntry {
  Configuration config;
  int k = 0;
  std::string family;
  bool strong = false;
  bool weak = false;
  std::optional<std::set<Vertex>> fix_set;  // expected exactly, when given
};

/// A (k-2)-vertex with empty boundary.
inline Configuration single_vertex(int k) {
  return make_configuration("single-vertex-k" + std::to_string(k), {}, {{0, k - 2}});
}

/// Triangle u v w with deg u = deg v = k-1 and boundary {w}.
inline Configuration heavy_triangle(int k) {
  return make_configuration("heavy-triangle-k" + std::to_string(k), {{0, 1}, {1, 2}, {0, 2}}, {{0, k - 1}, {1, k - 1}});
}

/// Path a b c of 3-vertices.
inline Configuration cubic_path() { return make_configuration("cubic-path", {{0, 1}, {1, 2}}, {{0, 3}, {1, 3}, {2, 3}}); }

enum class StarTriangle { on_none_in_a, on_one_in_a, on_two_in_a, near_in_a, near_outside_a };

inline std::vector<StarTriangle> star_triangle_variants() {
  return {StarTriangle::on_none_in_a, StarTriangle::on_one_in_a, StarTriangle::on_two_in_a, StarTriangle::near_in_a,
          StarTriangle::near_outside_a};
}

inline std::string to_string(StarTriangle s) {
  switch (s) {
    case StarTriangle::on_none_in_a: return "on-triangle-0";
    case StarTriangle::on_one_in_a: return "on-triangle-1";
    case StarTriangle::on_two_in_a: return "on-triangle-2";
    case StarTriangle::near_in_a: return "near-triangle-in";
    case StarTriangle::near_outside_a: return "near-triangle-out";
  }
  return "";
}

/// A d-vertex v (id 0) with d-2 neighbors of degree 3 (the set A, ids 1..d-2),
/// where v lies on a triangle or is adjacent to a vertex of one. Triangle
/// vertices outside A and v form the boundary.
inline Configuration star_near_triangle(int d, StarTriangle variant) {
  const int a = d - 2;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::map<Vertex, int> degree{{0, d}};
  for (Vertex x = 1; x <= a; ++x) {
    edges.emplace_back(0, x);
    degree[x] = 3;
  }
  const Vertex t = a + 1;  // first id past A
  switch (variant) {
    case StarTriangle::on_none_in_a:
      edges.insert(edges.end(), {{0, t}, {0, t + 1}, {t, t + 1}});
      break;
    case StarTriangle::on_one_in_a:
      edges.insert(edges.end(), {{0, t}, {1, t}});
      break;
    case StarTriangle::on_two_in_a:
      if (a < 2) throw Error(ErrorCode::domain, "triangle inside A needs d >= 4");
      edges.emplace_back(1, 2);
      break;
    case StarTriangle::near_in_a:
      edges.insert(edges.end(), {{1, t}, {1, t + 1}, {t, t + 1}});
      break;
    case StarTriangle::near_outside_a:
      edges.insert(edges.end(), {{0, t}, {t, t + 1}, {t, t + 2}, {t + 1, t + 2}});
      break;
  }
  return make_configuration("star-d" + std::to_string(d) + "-" + to_string(variant), edges, degree);
}

/// A 4-vertex v on triangles v u1 u2 and v w1 w2 with u1, w1 of degree 3 and
/// u2, w2 of degree 4.
inline Configuration bowtie() {
  return make_configuration("bowtie", {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}},
                            {{0, 4}, {1, 3}, {2, 4}, {3, 3}, {4, 4}});
}

/// Adjacent 4-vertices v1, v2 on disjoint triangles v1 u1 u2 and v2 w1 w2,
/// with u1, w1 of degree 3 and u2, w2 of degree 4.
inline Configuration linked_triangles() {
  return make_configuration("linked-triangles", {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {3, 4}, {3, 5}, {4, 5}},
                            {{0, 4}, {1, 3}, {2, 4}, {3, 4}, {4, 3}, {5, 4}});
}

/// 4-cycle v1 v2 v3 v4 (ids 1..4) with the given degrees; vertices without a
/// degree are boundary.
inline Configuration four_cycle(std::string name, const std::map<Vertex, int>& degree,
                                std::optional<std::set<Vertex>> fix = std::nullopt) {
  return make_configuration(std::move(name), {{1, 2}, {2, 3}, {3, 4}, {1, 4}}, degree, {}, std::move(fix));
}

/// Path of four 4-vertices v1..v4 (ids 1..4).
inline Configuration quartic_path() {
  return make_configuration("quartic-path", {{1, 2}, {2, 3}, {3, 4}}, {{1, 4}, {2, 4}, {3, 4}, {4, 4}});
}

inline std::vector<CorpusEntry> configuration_corpus() {
  std::vector<CorpusEntry> out;
  for (int k : {4, 5}) out.push_back({single_vertex(k), k, "none", true, true, std::set<Vertex>{0}});
  for (int k : {4, 5}) out.push_back({heavy_triangle(k), k, "diamond", true, true, std::set<Vertex>{0, 1}});
  out.push_back({cubic_path(), 4, "none", true, true, std::set<Vertex>{0, 1, 2}});
  for (int d = 3; d <= 8; ++d)
    for (auto variant : star_triangle_variants()) {
      if (variant == StarTriangle::on_two_in_a && d < 4) continue;
      out.push_back({star_near_triangle(d, variant), 4, "c4-near-triangles", true, true, std::nullopt});
    }
  out.push_back({bowtie(), 4, "c4", true, true, std::set<Vertex>{0, 1, 2, 3, 4}});
  out.push_back({linked_triangles(), 4, "c4c5", true, true, std::nullopt});
  out.push_back({four_cycle("c4-44", {{1, 4}, {2, 4}}), 5, "house", true, true, std::set<Vertex>{1, 2}});
  out.push_back({four_cycle("c4-454", {{1, 4}, {2, 5}, {3, 4}}), 5, "house-k23", true, true, std::set<Vertex>{1, 2, 3}});
  out.push_back({four_cycle("c4-4555", {{1, 4}, {2, 5}, {3, 5}, {4, 5}}, std::set<Vertex>{2, 3, 4}), 5, "house-k23",
                 false, true, std::set<Vertex>{2, 3, 4}});
  out.push_back({quartic_path(), 5, "none", true, true, std::set<Vertex>{1, 2, 3, 4}});
  return out;
}

/// Named graphs with the cycle lengths they avoid and the family they belong to.
struct GraphCorpusEntry {
  std::string name;
  std::vector<int> free_of_cycles;
  std::string family;
  std::string library;
};

inline std::vector<GraphCorpusEntry> graph_corpus() {
  return {{"c3", {}, "none", ""},
          {"c5", {3, 4}, "c4-near-triangles", "thm3"},
          {"cube", {3}, "none", ""},
          {"octahedron", {}, "none", ""},
          {"dodecahedron", {3, 4}, "c4-near-triangles", "thm3"},
          {"icosahedron", {}, "none", ""},
          {"icosidodecahedron", {4}, "diamond", "thm2"},
          {"truncated-cube", {4, 5, 6, 7}, "c4c5c6", "thm4"},
          {"petersen", {3, 4}, "none", ""}};
}

}  // namespace flexcolor
