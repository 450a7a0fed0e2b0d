#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flexcolor/error.hpp"

namespace flexcolor {

using Vertex = int;

/// Simple undirected graph on integer-labelled vertices. Loops and parallel
/// edges are rejected on insertion; neighbor lists are kept sorted.
class Graph {
 public:
  Graph() = default;

  void add_vertex(Vertex v) { adj_.try_emplace(v); }

  void add_edge(Vertex u, Vertex v) {
    if (u == v) throw Error(ErrorCode::invalid_graph, "self-loop at vertex " + std::to_string(u));
    auto& nu = adj_[u];
    auto& nv = adj_[v];
    auto it = std::lower_bound(nu.begin(), nu.end(), v);
    if (it != nu.end() && *it == v)
      throw Error(ErrorCode::invalid_graph,
                  "parallel edge " + std::to_string(u) + "-" + std::to_string(v));
    nu.insert(it, v);
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
    ++edges_;
  }

  void remove_vertex(Vertex v) {
    auto it = adj_.find(v);
    if (it == adj_.end()) return;
    for (Vertex w : it->second) {
      auto& nw = adj_[w];
      nw.erase(std::lower_bound(nw.begin(), nw.end(), v));
      --edges_;
    }
    adj_.erase(it);
  }

  void remove_edge(Vertex u, Vertex v) {
    if (!has_edge(u, v)) return;
    auto& nu = adj_[u];
    auto& nv = adj_[v];
    nu.erase(std::lower_bound(nu.begin(), nu.end(), v));
    nv.erase(std::lower_bound(nv.begin(), nv.end(), u));
    --edges_;
  }

  bool has_vertex(Vertex v) const { return adj_.count(v) != 0; }

  bool has_edge(Vertex u, Vertex v) const {
    auto it = adj_.find(u);
    if (it == adj_.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), v);
  }

  const std::vector<Vertex>& neighbors(Vertex v) const {
    static const std::vector<Vertex> none;
    auto it = adj_.find(v);
    return it == adj_.end() ? none : it->second;
  }

  int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> out;
    out.reserve(adj_.size());
    for (const auto& [v, _] : adj_) out.push_back(v);
    return out;
  }

  /// Each edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edges_);
    for (const auto& [u, nbrs] : adj_)
      for (Vertex v : nbrs)
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  std::size_t order() const { return adj_.size(); }
  std::size_t size() const { return edges_; }
  bool empty() const { return adj_.empty(); }

  int max_degree() const {
    int d = 0;
    for (const auto& [v, nbrs] : adj_) d = std::max(d, static_cast<int>(nbrs.size()));
    return d;
  }

  Graph induced(std::span<const Vertex> keep) const {
    std::set<Vertex> k(keep.begin(), keep.end());
    Graph h;
    for (Vertex v : k)
      if (has_vertex(v)) h.add_vertex(v);
    for (Vertex v : k) {
      if (!has_vertex(v)) continue;
      for (Vertex w : neighbors(v))
        if (v < w && k.count(w)) h.add_edge(v, w);
    }
    return h;
  }

  Graph without(std::span<const Vertex> drop) const {
    Graph h = *this;
    for (Vertex v : drop) h.remove_vertex(v);
    return h;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::map<Vertex, std::vector<Vertex>> adj_;
  std::size_t edges_ = 0;
};

inline bool is_connected(const Graph& g) {
  if (g.order() <= 1) return true;
  const auto vs = g.vertices();
  std::set<Vertex> seen{vs.front()};
  std::vector<Vertex> stack{vs.front()};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v))
      if (seen.insert(w).second) stack.push_back(w);
  }
  return seen.size() == g.order();
}

/// BFS distances from a set of sources; unreachable vertices are absent.
inline std::map<Vertex, int> distances_from(const Graph& g, std::span<const Vertex> sources) {
  std::map<Vertex, int> dist;
  std::queue<Vertex> q;
  for (Vertex s : sources)
    if (dist.emplace(s, 0).second) q.push(s);
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop();
    for (Vertex w : g.neighbors(v))
      if (dist.emplace(w, dist[v] + 1).second) q.push(w);
  }
  return dist;
}

/// Triangles as sorted triples, lexicographic.
inline std::vector<std::array<Vertex, 3>> triangles(const Graph& g) {
  std::vector<std::array<Vertex, 3>> out;
  for (Vertex u : g.vertices())
    for (Vertex v : g.neighbors(u)) {
      if (v <= u) continue;
      for (Vertex w : g.neighbors(v))
        if (w > v && g.has_edge(u, w)) out.push_back({u, v, w});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings

/// Cyclic (clockwise) neighbor order around every vertex.
struct RotationSystem {
  std::map<Vertex, std::vector<Vertex>> order;

  bool covers(const Graph& g) const {
    for (Vertex v : g.vertices()) {
      auto it = order.find(v);
      if (it == order.end()) return false;
      std::vector<Vertex> sorted = it->second;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != g.neighbors(v)) return false;
    }
    return true;
  }

  /// Neighbor that follows `from` in the rotation at `at`.
  Vertex successor(Vertex at, Vertex from) const {
    const auto& rot = order.at(at);
    auto it = std::find(rot.begin(), rot.end(), from);
    if (it == rot.end())
      throw Error(ErrorCode::embedding_incomplete,
                  "vertex " + std::to_string(from) + " missing from rotation at " + std::to_string(at));
    ++it;
    return it == rot.end() ? rot.front() : *it;
  }

  /// The embedding inherited by the subgraph induced on the vertices of `g`.
  RotationSystem restricted_to(const Graph& g) const {
    RotationSystem r;
    for (Vertex v : g.vertices()) {
      auto it = order.find(v);
      if (it == order.end()) continue;
      auto& dst = r.order[v];
      for (Vertex w : it->second)
        if (g.has_edge(v, w)) dst.push_back(w);
    }
    return r;
  }

  friend bool operator==(const RotationSystem&, const RotationSystem&) = default;
};

/// Face walk: the directed edges traversed, in order. `length()` counts edge
/// traversals, so a bridge inside a face contributes twice.
struct Face {
  std::vector<std::pair<Vertex, Vertex>> walk;

  int length() const { return static_cast<int>(walk.size()); }

  /// Vertices in walk order, one entry per corner (repeats allowed).
  std::vector<Vertex> corners() const {
    std::vector<Vertex> out;
    out.reserve(walk.size());
    for (const auto& [u, v] : walk) out.push_back(u);
    return out;
  }
};

/// Traces the faces of the embedding: the successor of dart (u,v) is (v,w)
/// with w following u in the rotation at v. Faces are emitted in order of
/// their lexicographically least starting dart.
inline std::vector<Face> faces(const Graph& g, const RotationSystem& rotation) {
  for (Vertex v : g.vertices())
    if (!rotation.order.count(v))
      throw Error(ErrorCode::embedding_incomplete, "no rotation entry for vertex " + std::to_string(v));
  if (!rotation.covers(g))
    throw Error(ErrorCode::embedding_incomplete, "rotation does not match adjacency");

  std::vector<Face> out;
  if (g.size() == 0) {
    // An edgeless connected graph (at most one vertex) has the single outer face.
    if (g.order() > 0) out.push_back(Face{});
    return out;
  }
  std::set<std::pair<Vertex, Vertex>> used;
  for (Vertex u : g.vertices()) {
    for (Vertex v : g.neighbors(u)) {
      if (used.count({u, v})) continue;
      Face f;
      Vertex a = u, b = v;
      while (used.insert({a, b}).second) {
        f.walk.emplace_back(a, b);
        Vertex c = rotation.successor(b, a);
        a = b;
        b = c;
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

/// True when the rotation system is a plane embedding of a connected graph
/// (Euler: |V| - |E| + |F| = 2).
inline bool is_plane_embedding(const Graph& g, const RotationSystem& rotation) {
  if (!is_connected(g) || !rotation.covers(g)) return false;
  const auto fs = faces(g, rotation);
  return static_cast<long>(g.order()) - static_cast<long>(g.size()) + static_cast<long>(fs.size()) == 2;
}

// ---------------------------------------------------------------------------
// Degeneracy

struct Degeneracy {
  int d = 0;
  std::vector<Vertex> order;  // elimination order
};

/// Repeatedly deletes a minimum-degree vertex (lowest id on ties).
inline Degeneracy degeneracy(const Graph& g) {
  Degeneracy result;
  std::map<Vertex, int> deg;
  std::set<std::pair<int, Vertex>> queue;
  for (Vertex v : g.vertices()) {
    deg[v] = g.degree(v);
    queue.emplace(deg[v], v);
  }
  std::set<Vertex> removed;
  while (!queue.empty()) {
    auto [dv, v] = *queue.begin();
    queue.erase(queue.begin());
    result.d = std::max(result.d, dv);
    result.order.push_back(v);
    removed.insert(v);
    for (Vertex w : g.neighbors(v)) {
      if (removed.count(w)) continue;
      queue.erase({deg[w], w});
      queue.emplace(--deg[w], w);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Ordinary (not induced) subgraph matching

/// Per-pattern-vertex admissibility test on a candidate host vertex.
using CandidateFilter = std::function<bool(Vertex pattern_vertex, Vertex host_vertex)>;

namespace detail {

// Pattern vertices in matching order: maximize already-ordered neighbors, then
// degree, then lowest id. Keeps each new vertex anchored to a placed neighbor.
inline std::vector<Vertex> matching_order(const Graph& pattern) {
  std::vector<Vertex> order;
  std::set<Vertex> placed;
  const auto vs = pattern.vertices();
  while (order.size() < vs.size()) {
    Vertex best = 0;
    int best_links = -1, best_deg = -1;
    for (Vertex v : vs) {
      if (placed.count(v)) continue;
      int links = 0;
      for (Vertex w : pattern.neighbors(v)) links += placed.count(w) ? 1 : 0;
      int deg = pattern.degree(v);
      if (links > best_links || (links == best_links && deg > best_deg)) {
        best = v;
        best_links = links;
        best_deg = deg;
      }
    }
    order.push_back(best);
    placed.insert(best);
  }
  return order;
}

}  // namespace detail

/// Visits every injective map pattern -> host that carries pattern edges onto
/// host edges. The map is passed keyed by pattern vertex. Enumeration is in
/// lexicographic order of host images along the matching order, so the first
/// match reported is deterministic. The visitor returns false to stop.
inline void for_each_subgraph_match(const Graph& host, const Graph& pattern,
                                    const std::function<bool(const std::map<Vertex, Vertex>&)>& visit,
                                    const CandidateFilter& filter = {}) {
  const auto order = detail::matching_order(pattern);
  const auto host_vertices = host.vertices();
  std::map<Vertex, Vertex> image;
  std::set<Vertex> used;
  bool stop = false;

  std::function<void(std::size_t)> extend = [&](std::size_t depth) {
    if (stop) return;
    if (depth == order.size()) {
      if (!visit(image)) stop = true;
      return;
    }
    const Vertex p = order[depth];
    // Anchor on the first already-placed pattern neighbor if there is one.
    const std::vector<Vertex>* candidates = &host_vertices;
    for (Vertex q : pattern.neighbors(p)) {
      auto it = image.find(q);
      if (it != image.end()) {
        candidates = &host.neighbors(it->second);
        break;
      }
    }
    const int need = pattern.degree(p);
    for (Vertex h : *candidates) {
      if (used.count(h) || host.degree(h) < need) continue;
      bool ok = true;
      for (Vertex q : pattern.neighbors(p)) {
        auto it = image.find(q);
        if (it != image.end() && !host.has_edge(h, it->second)) {
          ok = false;
          break;
        }
      }
      if (!ok || (filter && !filter(p, h))) continue;
      image[p] = h;
      used.insert(h);
      extend(depth + 1);
      used.erase(h);
      image.erase(p);
      if (stop) return;
    }
  };
  extend(0);
}

/// Witness injection pattern -> host when the pattern occurs as an ordinary subgraph.
inline std::optional<std::map<Vertex, Vertex>> find_subgraph(const Graph& host, const Graph& pattern) {
  std::optional<std::map<Vertex, Vertex>> found;
  if (pattern.order() > host.order() || pattern.size() > host.size()) return found;
  for_each_subgraph_match(host, pattern, [&](const std::map<Vertex, Vertex>& m) {
    found = m;
    return false;
  });
  return found;
}

inline bool contains_subgraph(const Graph& host, const Graph& pattern) {
  return find_subgraph(host, pattern).has_value();
}

// ---------------------------------------------------------------------------
// Small named graphs used as patterns and fixtures

inline Graph from_edges(std::initializer_list<std::pair<Vertex, Vertex>> edges) {
  Graph g;
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

inline Graph cycle_graph(int n) {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

inline Graph path_graph(int n) {
  Graph g;
  g.add_vertex(0);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph complete_graph(int n) {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

/// K4 minus an edge (the diamond).
inline Graph diamond_graph() { return from_edges({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}); }

/// A triangle and a 4-cycle sharing an edge.
inline Graph house_graph() { return from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {1, 4}}); }

inline Graph complete_bipartite_graph(int a, int b) {
  Graph g;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) g.add_edge(i, a + j);
  return g;
}

inline Graph petersen_graph() {
  Graph g;
  for (int i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  return g;
}

}  // namespace flexcolor
