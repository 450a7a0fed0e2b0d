#include <gtest/gtest.h>

#include <map>
#include <random>

#include "flexcolor/graph.hpp"
#include "flexcolor/graph_io.hpp"
#include "flexcolor/polyhedra.hpp"
#include "plane_generators.hpp"

using namespace flexcolor;

namespace {

// Oracle: every injective map pattern -> host, checked edge by edge.
bool naive_contains(const Graph& host, const Graph& pattern) {
  const auto hv = host.vertices();
  const auto pv = pattern.vertices();
  std::vector<Vertex> image(pv.size());
  std::vector<bool> used(hv.size(), false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == pv.size()) {
      std::map<Vertex, Vertex> m;
      for (std::size_t j = 0; j < pv.size(); ++j) m[pv[j]] = image[j];
      for (auto [a, b] : pattern.edges())
        if (!host.has_edge(m[a], m[b])) return false;
      return true;
    }
    for (std::size_t h = 0; h < hv.size(); ++h) {
      if (used[h]) continue;
      used[h] = true;
      image[i] = hv[h];
      if (go(i + 1)) return true;
      used[h] = false;
    }
    return false;
  };
  return go(0);
}

std::map<int, int> face_length_histogram(const std::vector<Face>& fs) {
  std::map<int, int> hist;
  for (const auto& f : fs) ++hist[f.length()];
  return hist;
}

}  // namespace

TEST(Graph, RejectsLoopsAndParallelEdges) {
  Graph g;
  EXPECT_THROW(g.add_edge(1, 1), Error);
  g.add_edge(1, 2);
  EXPECT_THROW(g.add_edge(2, 1), Error);
  EXPECT_EQ(g.size(), 1u);
}

TEST(Faces, CyclesBoundTwoFaces) {
  for (int n : {3, 5}) {
    auto c = cycle_embedded(n);
    auto fs = faces(c.graph, c.rotation);
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(fs[0].length(), n);
    EXPECT_EQ(fs[1].length(), n);
  }
}

TEST(Faces, TriangleWithAnyRotation) {
  Graph t = cycle_graph(3);
  RotationSystem r;
  r.order = {{0, {2, 1}}, {1, {2, 0}}, {2, {0, 1}}};
  auto fs = faces(t, r);
  // Euler forces two faces for any rotation of a triangle.
  EXPECT_EQ(fs.size(), 2u);
}

TEST(Faces, CubeHasSixSquares) {
  auto cube = cube_embedded();
  auto fs = faces(cube.graph, cube.rotation);
  EXPECT_EQ(face_length_histogram(fs), (std::map<int, int>{{4, 6}}));
  EXPECT_EQ(8 - 12 + static_cast<int>(fs.size()), 2);
}

TEST(Faces, PolyhedraFaceCensus) {
  EXPECT_EQ(face_length_histogram(faces(dodecahedron_embedded().graph, dodecahedron_embedded().rotation)),
            (std::map<int, int>{{5, 12}}));
  EXPECT_EQ(face_length_histogram(faces(icosahedron_embedded().graph, icosahedron_embedded().rotation)),
            (std::map<int, int>{{3, 20}}));
  auto id = icosidodecahedron_embedded();
  EXPECT_EQ(face_length_histogram(faces(id.graph, id.rotation)), (std::map<int, int>{{3, 20}, {5, 12}}));
  auto tc = truncated_cube_embedded();
  EXPECT_EQ(face_length_histogram(faces(tc.graph, tc.rotation)), (std::map<int, int>{{3, 8}, {8, 6}}));
}

TEST(Faces, MissingRotationEntryIsAnError) {
  auto c = cycle_embedded(5);
  c.rotation.order.erase(3);
  try {
    faces(c.graph, c.rotation);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::embedding_incomplete);
  }
}

TEST(Faces, EveryDartOnExactlyOneFace) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto pg = testing_support::random_plane_graph(rng, 6 + trial % 15, 0.3);
    auto fs = faces(pg.graph, pg.rotation);
    std::map<std::pair<Vertex, Vertex>, int> seen;
    long total = 0;
    for (const auto& f : fs) {
      total += f.length();
      for (auto d : f.walk) ++seen[d];
    }
    EXPECT_EQ(total, 2 * static_cast<long>(pg.graph.size()));
    for (auto& [d, c] : seen) EXPECT_EQ(c, 1);
    EXPECT_TRUE(is_plane_embedding(pg.graph, pg.rotation));
  }
}

TEST(Degeneracy, Basics) {
  Graph single;
  single.add_vertex(0);
  EXPECT_EQ(degeneracy(single).d, 0);
  EXPECT_EQ(degeneracy(cycle_graph(5)).d, 2);
  EXPECT_EQ(degeneracy(complete_graph(5)).d, 4);
}

TEST(Degeneracy, PolyhedraFacts) {
  EXPECT_EQ(degeneracy(dodecahedron_embedded().graph).d, 3);
  EXPECT_EQ(degeneracy(icosidodecahedron_embedded().graph).d, 4);
  EXPECT_EQ(degeneracy(truncated_cube_embedded().graph).d, 3);
  EXPECT_EQ(degeneracy(icosahedron_embedded().graph).d, 5);
}

TEST(Degeneracy, RecursiveWitness) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = testing_support::random_plane_graph(rng, 5 + trial % 12, 0.25).graph;
    auto dg = degeneracy(g);
    EXPECT_LE(dg.d, g.max_degree());
    ASSERT_EQ(dg.order.size(), g.order());
    // The first eliminated vertex has minimum degree, and the rest of the order
    // is again a valid elimination of what remains.
    const Vertex first = dg.order.front();
    for (Vertex v : g.vertices()) EXPECT_LE(g.degree(first), g.degree(v));
    auto rest = degeneracy(g.without(std::vector<Vertex>{first}));
    EXPECT_EQ(std::max(g.degree(first), rest.d), dg.d);
  }
}

TEST(Subgraph, Examples) {
  Graph house_host = house_graph();
  EXPECT_TRUE(contains_subgraph(house_host, house_graph()));
  auto ico = icosahedron_embedded().graph;
  auto witness = find_subgraph(ico, diamond_graph());
  ASSERT_TRUE(witness.has_value());
  for (auto [a, b] : diamond_graph().edges()) EXPECT_TRUE(ico.has_edge(witness->at(a), witness->at(b)));
  EXPECT_FALSE(contains_subgraph(petersen_graph(), cycle_graph(4)));
  EXPECT_TRUE(contains_subgraph(petersen_graph(), cycle_graph(5)));
}

TEST(Subgraph, AgreesWithNaiveEnumeration) {
  std::mt19937_64 rng(3);
  const std::vector<Graph> patterns = {cycle_graph(3), cycle_graph(4), cycle_graph(5), diamond_graph(),
                                       house_graph(), complete_bipartite_graph(2, 3), path_graph(4)};
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 5;
    Graph host;
    for (int v = 0; v < n; ++v) host.add_vertex(v);
    std::bernoulli_distribution coin(0.45);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (coin(rng)) host.add_edge(u, v);
    for (const auto& p : patterns) EXPECT_EQ(contains_subgraph(host, p), naive_contains(host, p));
  }
}

TEST(FlexgraphFormat, RoundTripAndErrors) {
  for (const auto& name : named_graph_names()) {
    auto g = named_graph(name);
    auto text = serialize_flexgraph(g);
    auto back = parse_flexgraph(text);
    EXPECT_EQ(back.graph, g.graph) << name;
    EXPECT_EQ(serialize_flexgraph(back), text) << name;
  }
  EXPECT_THROW(parse_flexgraph("flexgraph v1\nv 0: 0\n"), Error);
  EXPECT_THROW(parse_flexgraph("flexgraph v1\nv 0: 1 1\nv 1: 0 0\n"), Error);
  EXPECT_THROW(parse_flexgraph("flexgraph v1\nv 0: 1\nv 1:\n"), Error);
  EXPECT_THROW(parse_flexgraph("flexgraph v2\nv 0:\n"), Error);
  EXPECT_THROW(parse_flexgraph("flexgraph v1\nv 0: 7\n"), Error);
}
