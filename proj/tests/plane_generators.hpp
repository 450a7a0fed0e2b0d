#pragma once

// Random connected plane graphs for tests: a stacked triangulation (each new
// vertex dropped into a uniformly chosen triangular face) followed by random
// edge deletions that keep the graph connected.

#include <algorithm>
#include <random>

#include "flexcolor/graph.hpp"
#include "flexcolor/graph_io.hpp"
#include "flexcolor/polyhedra.hpp"
#include "flexcolor/reducibility.hpp"

namespace testing_support {

using namespace flexcolor;

inline void insert_after(std::vector<Vertex>& rot, Vertex after, Vertex x) {
  auto it = std::find(rot.begin(), rot.end(), after);
  rot.insert(it + 1, x);
}

inline GraphFile random_triangulation(std::mt19937_64& rng, int n) {
  GraphFile pg = cycle_embedded(3);
  for (Vertex x = 3; x < n; ++x) {
    auto fs = faces(pg.graph, pg.rotation);
    std::uniform_int_distribution<std::size_t> pick(0, fs.size() - 1);
    const auto& walk = fs[pick(rng)].walk;
    const Vertex a = walk[0].first, b = walk[1].first, c = walk[2].first;
    // At each corner p->q->r the new vertex goes right after p in q's rotation.
    insert_after(pg.rotation.order[b], a, x);
    insert_after(pg.rotation.order[c], b, x);
    insert_after(pg.rotation.order[a], c, x);
    pg.rotation.order[x] = {a, c, b};
    pg.graph.add_edge(x, a);
    pg.graph.add_edge(x, b);
    pg.graph.add_edge(x, c);
  }
  return pg;
}

inline void delete_edge(GraphFile& pg, Vertex u, Vertex v) {
  pg.graph.remove_edge(u, v);
  auto& ru = pg.rotation.order[u];
  ru.erase(std::find(ru.begin(), ru.end(), v));
  auto& rv = pg.rotation.order[v];
  rv.erase(std::find(rv.begin(), rv.end(), u));
}

/// Deletes each edge with probability `drop` unless that disconnects the graph.
inline GraphFile random_plane_graph(std::mt19937_64& rng, int n, double drop) {
  GraphFile pg = random_triangulation(rng, std::max(n, 3));
  auto edges = pg.graph.edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  std::bernoulli_distribution coin(drop);
  for (auto [u, v] : edges) {
    if (!coin(rng)) continue;
    GraphFile before = pg;
    delete_edge(pg, u, v);
    if (!is_connected(pg.graph)) pg = std::move(before);
  }
  return pg;
}

/// A random plane graph with edges of family occurrences deleted (one random
/// edge per occurrence) until none is left. Connectivity is not kept.
inline GraphFile family_free_plane_graph(std::mt19937_64& rng, int n, double drop, const ForbiddenFamily& family) {
  GraphFile pg = random_plane_graph(rng, n, drop);
  while (auto occ = family.find_occurrence(pg.graph)) {
    std::uniform_int_distribution<std::size_t> pick(0, occ->size() - 1);
    auto [u, v] = (*occ)[pick(rng)];
    delete_edge(pg, u, v);
  }
  return pg;
}

}  // namespace testing_support
