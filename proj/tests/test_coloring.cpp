#include <gtest/gtest.h>

#include <random>

#include "flexcolor/coloring.hpp"
#include "flexcolor/graph.hpp"

using namespace flexcolor;

namespace {

// Oracle: every map V -> colors, filtered for properness.
std::vector<Coloring> brute_force(const Graph& g, const ListAssignment& L) {
  std::vector<Coloring> out;
  auto vs = g.vertices();
  Coloring phi;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == vs.size()) {
      for (auto [u, v] : g.edges())
        if (phi[u] == phi[v]) return;
      out.push_back(phi);
      return;
    }
    for (Color c : L.at(vs[i])) {
      phi[vs[i]] = c;
      go(i + 1);
    }
    phi.erase(vs[i]);
  };
  go(0);
  return out;
}

Graph random_graph(std::mt19937_64& rng, int n, double p) {
  Graph g;
  for (int v = 0; v < n; ++v) g.add_vertex(v);
  std::bernoulli_distribution coin(p);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

ListAssignment random_lists(std::mt19937_64& rng, const Graph& g, int palette, int max_size) {
  ListAssignment L;
  std::uniform_int_distribution<int> size(1, max_size);
  for (Vertex v : g.vertices()) {
    std::vector<Color> all(palette);
    for (int c = 0; c < palette; ++c) all[c] = c + 1;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(palette, size(rng)));
    std::sort(all.begin(), all.end());
    L[v] = all;
  }
  return L;
}

}  // namespace

TEST(Coloring, SingleVertexThreeColors) {
  Graph g;
  g.add_vertex(0);
  EXPECT_EQ(all_colorings(g, {{0, {1, 2, 3}}}).size(), 3u);
}

TEST(Coloring, TriangleOnTwoColorsHasNone) {
  Graph t = cycle_graph(3);
  ListAssignment L{{0, {1, 2}}, {1, {1, 2}}, {2, {1, 2}}};
  EXPECT_TRUE(all_colorings(t, L).empty());
  EXPECT_FALSE(is_colorable(t, L));
  Request r;
  r.wanted = {{0, 1}};
  try {
    max_satisfaction(t, L, r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_colorable);
  }
}

TEST(Coloring, TriangleRequestingOneEverywhere) {
  Graph t = cycle_graph(3);
  ListAssignment L{{0, {1, 2, 3}}, {1, {1, 2, 3}}, {2, {1, 2, 3}}};
  Request r;
  r.kind = RequestKind::widespread;
  r.wanted = {{0, 1}, {1, 1}, {2, 1}};
  EXPECT_EQ(max_satisfaction(t, L, r).score, Rational(1, 3));
}

TEST(Coloring, EnumerationMatchesBruteForceInCanonicalOrder) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 80; ++trial) {
    Graph g = random_graph(rng, 2 + trial % 6, 0.5);
    auto L = random_lists(rng, g, 4, 3);
    auto expected = brute_force(g, L);
    auto got = all_colorings(g, L);
    // Brute force visits maps in the same lexicographic order.
    EXPECT_EQ(got, expected);
    EXPECT_EQ(is_colorable(g, L), !expected.empty());
    auto witness = find_coloring(g, L);
    if (witness) {
      EXPECT_TRUE(is_proper_list_coloring(g, L, *witness));
    }
  }
}

TEST(Coloring, EnumerationStopsWhenAsked) {
  Graph g;
  g.add_vertex(0);
  g.add_vertex(1);
  std::size_t seen = 0;
  enumerate_colorings(g, {{0, {1, 2}}, {1, {1, 2}}}, [&](const Coloring&) { return ++seen < 2; });
  EXPECT_EQ(seen, 2u);
}

TEST(Coloring, MaxSatisfactionMatchesBruteForce) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    Graph g = random_graph(rng, 2 + trial % 6, 0.4);
    auto L = random_lists(rng, g, 4, 3);
    auto colorings = brute_force(g, L);
    if (colorings.empty()) continue;
    Request r;
    if (trial % 2) {
      r.kind = RequestKind::weighted;
      std::uniform_int_distribution<int> w(0, 5);
      for (const auto& [v, list] : L)
        for (Color c : list) r.weights[{v, c}] = Rational(w(rng), 1 + w(rng));
      if (r.total_weight() == 0) continue;
    } else {
      for (const auto& [v, list] : L)
        if (v % 2 == 0) r.wanted[v] = list.back();
    }
    Rational best = -1;
    for (const auto& phi : colorings) best = std::max(best, satisfaction(phi, r));
    auto opt = max_satisfaction(g, L, r);
    EXPECT_EQ(opt.score, best);
    EXPECT_TRUE(is_proper_list_coloring(g, L, opt.best));
  }
}

TEST(Coloring, EmptyRequestIsUndefined) {
  Graph g;
  g.add_vertex(0);
  Request r;
  try {
    max_satisfaction(g, {{0, {1}}}, r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::undefined_ratio);
  }
}

TEST(Coloring, RequestOutsideListIsRejected) {
  Graph g;
  g.add_vertex(0);
  Request r;
  r.wanted = {{0, 9}};
  EXPECT_THROW(max_satisfaction(g, {{0, {1, 2}}}, r), Error);
}

TEST(EpsilonBound, Values) {
  auto a = epsilon_bound(3, 1);
  EXPECT_EQ(a.p, Rational(1, 3));
  EXPECT_EQ(a.epsilon, Rational(1, 9));
  auto b = epsilon_bound(5, 6);
  EXPECT_EQ(b.epsilon, power(Rational(1, 5), 24));
  auto c = epsilon_bound(4, 3);
  EXPECT_EQ(c.weak_epsilon, power(Rational(1, 4), 9) / 3);
  EXPECT_THROW(epsilon_bound(2, 1), Error);
  EXPECT_THROW(epsilon_bound(3, 0), Error);
}

TEST(EpsilonBound, DecreasesInK) {
  for (int b = 1; b <= 4; ++b)
    for (int k = 3; k < 8; ++k) EXPECT_GT(epsilon_bound(k, b).epsilon, epsilon_bound(k + 1, b).epsilon);
}

TEST(FlexlistsFormat, RoundTrip) {
  const std::string text =
      "flexlists v1\n# comment\nL 0: 3 1 2\nL 1: 1 2\nW 0 1 1/2\nW 1 2 3\n";
  auto f = parse_flexlists(text);
  EXPECT_EQ(f.lists.at(0), (std::vector<Color>{1, 2, 3}));
  ASSERT_TRUE(f.request.has_value());
  EXPECT_EQ(f.request->kind, RequestKind::weighted);
  EXPECT_EQ(f.request->total_weight(), Rational(7, 2));
  auto again = parse_flexlists(serialize_flexlists(f.lists, &*f.request));
  EXPECT_EQ(again.lists, f.lists);
  EXPECT_EQ(again.request->weights, f.request->weights);
}

TEST(FlexlistsFormat, WidespreadClassification) {
  auto f = parse_flexlists("flexlists v1\nL 0: 1 2\nL 1: 1 2\nR 0 1\nR 1 2\n");
  Graph g = path_graph(2);
  EXPECT_EQ(classify_request(g, *f.request).kind, RequestKind::widespread);
  auto h = parse_flexlists("flexlists v1\nL 0: 1 2\nL 1: 1 2\nR 0 1\n");
  EXPECT_EQ(classify_request(g, *h.request).kind, RequestKind::plain);
}

TEST(FlexlistsFormat, Errors) {
  EXPECT_THROW(parse_flexlists("flexlists v1\nL 0: 1 1\n"), Error);
  EXPECT_THROW(parse_flexlists("flexlists v1\nL 0: 1\nR 0 1\nW 0 1 1\n"), Error);
  EXPECT_THROW(parse_flexlists("flexlists v1\nL 0 1\n"), Error);
  EXPECT_THROW(parse_flexlists("flexlists v1\nW 0 1 1/0\n"), Error);
  EXPECT_THROW(parse_flexlists("flexlist v1\n"), Error);
}
