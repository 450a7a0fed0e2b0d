#pragma once

// Named graphs with plane embeddings. Convex polyhedra are generated from
// coordinates: edges join vertices at minimum distance, and each rotation
// lists neighbors clockwise as seen from outside the solid. Floating point is
// only used to build the combinatorial embedding.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "flexcolor/graph.hpp"
#include "flexcolor/graph_io.hpp"

namespace flexcolor {

using Point3 = std::array<double, 3>;
using Point2 = std::array<double, 2>;

namespace detail {

inline double dot(const Point3& a, const Point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Point3 cross(const Point3& a, const Point3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Point3 sub(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

inline void sort_clockwise(std::vector<Vertex>& nbrs, const std::function<double(Vertex)>& angle) {
  std::stable_sort(nbrs.begin(), nbrs.end(), [&](Vertex a, Vertex b) { return angle(a) > angle(b); });
}

}  // namespace detail

/// Convex polyhedron centered at the origin, vertices numbered by position in `points`.
inline GraphFile convex_polyhedron(const std::vector<Point3>& points) {
  GraphFile out;
  const int n = static_cast<int>(points.size());
  double shortest = INFINITY;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto d = detail::sub(points[i], points[j]);
      shortest = std::min(shortest, std::sqrt(detail::dot(d, d)));
    }
  for (int i = 0; i < n; ++i) out.graph.add_vertex(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto d = detail::sub(points[i], points[j]);
      if (std::sqrt(detail::dot(d, d)) < shortest * (1 + 1e-6)) out.graph.add_edge(i, j);
    }
  for (int v = 0; v < n; ++v) {
    const Point3& p = points[v];
    const double len = std::sqrt(detail::dot(p, p));
    const Point3 normal{p[0] / len, p[1] / len, p[2] / len};
    // Any tangent direction works as the zero angle.
    Point3 seed = std::fabs(normal[0]) < 0.9 ? Point3{1, 0, 0} : Point3{0, 1, 0};
    Point3 e1 = detail::cross(seed, normal);
    Point3 e2 = detail::cross(normal, e1);
    auto nbrs = out.graph.neighbors(v);
    detail::sort_clockwise(nbrs, [&](Vertex w) {
      auto d = detail::sub(points[w], p);
      return std::atan2(detail::dot(d, e2), detail::dot(d, e1));
    });
    out.rotation.order[v] = nbrs;
  }
  return out;
}

/// Rotation system of a straight-line plane drawing.
inline RotationSystem rotation_from_drawing(const Graph& g, const std::map<Vertex, Point2>& at) {
  RotationSystem r;
  for (Vertex v : g.vertices()) {
    auto nbrs = g.neighbors(v);
    const Point2 p = at.at(v);
    detail::sort_clockwise(nbrs, [&](Vertex w) {
      const Point2 q = at.at(w);
      return std::atan2(q[1] - p[1], q[0] - p[0]);
    });
    r.order[v] = nbrs;
  }
  return r;
}

inline GraphFile cube_embedded() {
  std::vector<Point3> pts;
  for (int x : {-1, 1})
    for (int y : {-1, 1})
      for (int z : {-1, 1}) pts.push_back({double(x), double(y), double(z)});
  return convex_polyhedron(pts);
}

inline GraphFile octahedron_embedded() {
  return convex_polyhedron({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
}

inline GraphFile icosahedron_embedded() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  std::vector<Point3> pts;
  for (double a : {-1.0, 1.0})
    for (double b : {-phi, phi}) {
      pts.push_back({0, a, b});
      pts.push_back({a, b, 0});
      pts.push_back({b, 0, a});
    }
  return convex_polyhedron(pts);
}

inline GraphFile dodecahedron_embedded() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  std::vector<Point3> pts;
  for (double x : {-1.0, 1.0})
    for (double y : {-1.0, 1.0})
      for (double z : {-1.0, 1.0}) pts.push_back({x, y, z});
  for (double a : {-1 / phi, 1 / phi})
    for (double b : {-phi, phi}) {
      pts.push_back({0, a, b});
      pts.push_back({a, b, 0});
      pts.push_back({b, 0, a});
    }
  return convex_polyhedron(pts);
}

inline GraphFile icosidodecahedron_embedded() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  std::vector<Point3> pts;
  for (double s : {-phi, phi}) {
    pts.push_back({0, 0, s});
    pts.push_back({0, s, 0});
    pts.push_back({s, 0, 0});
  }
  for (double a : {-0.5, 0.5})
    for (double b : {-phi / 2, phi / 2})
      for (double c : {-phi * phi / 2, phi * phi / 2}) {
        pts.push_back({a, b, c});
        pts.push_back({c, a, b});
        pts.push_back({b, c, a});
      }
  return convex_polyhedron(pts);
}

inline GraphFile truncated_cube_embedded() {
  const double xi = std::sqrt(2.0) - 1;
  std::vector<Point3> pts;
  for (double a : {-xi, xi})
    for (double b : {-1.0, 1.0})
      for (double c : {-1.0, 1.0}) {
        pts.push_back({a, b, c});
        pts.push_back({c, a, b});
        pts.push_back({b, c, a});
      }
  return convex_polyhedron(pts);
}

inline GraphFile cycle_embedded(int n) {
  GraphFile out;
  out.graph = cycle_graph(n);
  for (int i = 0; i < n; ++i) out.rotation.order[i] = {(i + n - 1) % n, (i + 1) % n};
  return out;
}

/// Graph with its neighbor lists (ascending) used as the rotation.
inline GraphFile unembedded(const Graph& g) {
  GraphFile out;
  out.graph = g;
  for (Vertex v : g.vertices()) out.rotation.order[v] = g.neighbors(v);
  return out;
}

inline std::vector<std::string> named_graph_names() {
  return {"c3", "c5", "cube", "octahedron", "dodecahedron", "icosahedron", "icosidodecahedron", "truncated-cube",
          "petersen"};
}

inline GraphFile named_graph(const std::string& name) {
  if (name == "c3") return cycle_embedded(3);
  if (name == "c5") return cycle_embedded(5);
  if (name == "cube") return cube_embedded();
  if (name == "octahedron") return octahedron_embedded();
  if (name == "dodecahedron") return dodecahedron_embedded();
  if (name == "icosahedron") return icosahedron_embedded();
  if (name == "icosidodecahedron") return icosidodecahedron_embedded();
  if (name == "truncated-cube") return truncated_cube_embedded();
  if (name == "petersen") return unembedded(petersen_graph());
  throw Error(ErrorCode::unknown_name, "no named graph '" + name + "'");
}

}  // namespace flexcolor
