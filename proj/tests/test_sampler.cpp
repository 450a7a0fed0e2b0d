#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flexcolor/library.hpp"
#include "flexcolor/polyhedra.hpp"
#include "flexcolor/resolution.hpp"
#include "flexcolor/sampler.hpp"
#include "plane_generators.hpp"

using namespace flexcolor;

namespace {

// Colorings of g[q] under lists by plain Cartesian product.
std::vector<Coloring> naive_colorings(const Graph& g, const std::vector<Vertex>& q, const ListAssignment& lists) {
  std::vector<Coloring> out{{}};
  for (Vertex v : q) {
    std::vector<Coloring> next;
    for (const auto& partial : out)
      for (Color c : lists.at(v)) {
        auto phi = partial;
        phi[v] = c;
        next.push_back(phi);
      }
    out = std::move(next);
  }
  std::erase_if(out, [&](const Coloring& phi) {
    for (Vertex u : q)
      for (Vertex w : q)
        if (u < w && g.has_edge(u, w) && phi.at(u) == phi.at(w)) return true;
    return false;
  });
  return out;
}

// The two-stage uniform process written out directly.
ColoringDistribution naive_distribution(const Graph& g, const ListAssignment& lists, const Resolution& r) {
  std::vector<std::vector<Vertex>> blocks;
  if (!r.residue.empty()) blocks.push_back(r.residue);
  for (auto it = r.steps.rbegin(); it != r.steps.rend(); ++it) blocks.push_back(it->peeled);
  std::map<Coloring, Rational> dist{{Coloring{}, Rational(1)}};
  for (const auto& q : blocks) {
    std::map<Coloring, Rational> next;
    for (const auto& [psi, p] : dist) {
      ListAssignment reduced;
      for (Vertex y : q)
        for (Color c : lists.at(y)) {
          bool blocked = false;
          for (const auto& [w, cw] : psi) blocked = blocked || (g.has_edge(y, w) && cw == c);
          if (!blocked) reduced[y].push_back(c);
        }
      for (Vertex y : q) reduced.try_emplace(y);
      const auto ext = naive_colorings(g, q, reduced);
      for (const auto& e : ext) {
        auto phi = psi;
        phi.insert(e.begin(), e.end());
        next[phi] += p / static_cast<long>(ext.size());
      }
    }
    dist = std::move(next);
  }
  return dist;
}

ListAssignment random_lists(std::mt19937_64& rng, const Graph& g, int k, int palette) {
  ListAssignment lists;
  std::vector<Color> colors(palette);
  for (int c = 0; c < palette; ++c) colors[c] = c + 1;
  for (Vertex v : g.vertices()) {
    std::shuffle(colors.begin(), colors.end(), rng);
    std::vector<Color> l(colors.begin(), colors.begin() + k);
    std::sort(l.begin(), l.end());
    lists[v] = l;
  }
  return lists;
}

ListAssignment uniform_lists(const Graph& g, std::vector<Color> l) {
  ListAssignment lists;
  for (Vertex v : g.vertices()) lists[v] = l;
  return lists;
}

Resolution residue_only(const Graph& g, int k) {
  Resolution r;
  r.k = k;
  r.b = static_cast<int>(g.order());
  r.family = "none";
  r.residue = g.vertices();
  r.residue_fix = r.residue;
  return r;
}

Graph edge_graph() { return from_edges({{0, 1}}); }

// Residue {1}, then u = 0 peeled.
Resolution path_resolution() {
  Resolution r;
  r.k = 3;
  r.b = 1;
  r.family = "none";
  r.steps.push_back({"rc1", {{0, 0}}, {0}, {}, {0}});
  r.residue = {1};
  r.residue_fix = {1};
  return r;
}

Rational sum(const ColoringDistribution& d) {
  Rational s = 0;
  for (const auto& [phi, p] : d) s += p;
  return s;
}

struct Instance {
  Graph graph;
  ListAssignment lists;
  Resolution resolution;
};

std::vector<Instance> random_instances(std::uint64_t seed, const std::string& library, int count, int n) {
  std::mt19937_64 rng(seed);
  auto lib = builtin_library(library);
  auto family = resolve_family(lib.family);
  std::vector<Instance> out;
  while (static_cast<int>(out.size()) < count) {
    auto pg = testing_support::family_free_plane_graph(rng, n, 0.3, family);
    auto res = build_resolution(pg.graph, lib, &pg.rotation);
    if (!res.ok()) continue;
    out.push_back({pg.graph, random_lists(rng, pg.graph, lib.k, lib.k + 2), *res.resolution});
  }
  return out;
}

}  // namespace

TEST(SplitMix64, ReferenceOutputs) {
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(g.next(), 0x06c45d188009454fULL);
}

TEST(SplitMix64, BoundedDrawsAreInRangeAndKeyed) {
  auto a = SplitMix64::keyed(7, 1, 2);
  auto b = SplitMix64::keyed(7, 1, 2);
  auto c = SplitMix64::keyed(7, 2, 1);
  std::vector<int> hits(5);
  bool differs = false;
  for (int i = 0; i < 5000; ++i) {
    const auto x = a.below(5);
    ASSERT_LT(x, 5u);
    ASSERT_EQ(x, b.below(5));
    differs = differs || x != c.below(5);
    ++hits[x];
  }
  EXPECT_TRUE(differs);
  for (int h : hits) EXPECT_NEAR(h, 1000, 4 * std::sqrt(5000 * 0.2 * 0.8));
}

TEST(Exact, SingleVertex) {
  Graph g;
  g.add_vertex(0);
  auto d = exact_distribution(g, {{0, {1, 2, 3}}}, residue_only(g, 3));
  ASSERT_EQ(d.size(), 3u);
  for (const auto& [phi, p] : d) EXPECT_EQ(p, Rational(1, 3));
}

TEST(Exact, EdgeAsResidue) {
  auto g = edge_graph();
  auto d = exact_distribution(g, uniform_lists(g, {1, 2}), residue_only(g, 3));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ((d[Coloring{{0, 1}, {1, 2}}]), Rational(1, 2));
  EXPECT_EQ((d[Coloring{{0, 2}, {1, 1}}]), Rational(1, 2));
}

TEST(Exact, PathPeelingOneEnd) {
  auto g = edge_graph();
  auto d = exact_distribution(g, uniform_lists(g, {1, 2}), path_resolution());
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ((d[Coloring{{0, 2}, {1, 1}}]), Rational(1, 2));
  EXPECT_EQ((d[Coloring{{0, 1}, {1, 2}}]), Rational(1, 2));
}

TEST(Exact, UnevenStagesAreNotUniformOverColorings) {
  // Residue {1}, then 0; lists {1,2,3} at 0 and {1,2} at 1.
  auto g = edge_graph();
  auto d = exact_distribution(g, {{0, {1, 2, 3}}, {1, {1, 2}}}, path_resolution());
  EXPECT_EQ(d.size(), 4u);
  EXPECT_EQ((d[Coloring{{0, 2}, {1, 1}}]), Rational(1, 4));
  EXPECT_EQ((d[Coloring{{0, 3}, {1, 1}}]), Rational(1, 4));
  EXPECT_EQ(sum(d), 1);
}

TEST(Exact, MatchesDirectProcess) {
  for (const auto& library : {"c4c5c6", "diamond", "house-k23", "c4-near-triangles"})
    for (const auto& inst : random_instances(11, library, 4, 7)) {
      auto d = exact_distribution(inst.graph, inst.lists, inst.resolution);
      EXPECT_EQ(d, naive_distribution(inst.graph, inst.lists, inst.resolution)) << library;
      EXPECT_EQ(sum(d), 1);
      for (const auto& [phi, p] : d) EXPECT_TRUE(is_proper_list_coloring(inst.graph, inst.lists, phi));
    }
}

TEST(Exact, BudgetExceeded) {
  auto g = cycle_embedded(5);
  auto r = *build_resolution(g.graph, builtin_library("low-degree-k4")).resolution;
  auto lists = uniform_lists(g.graph, {1, 2, 3, 4});
  try {
    exact_distribution(g.graph, lists, r, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::budget_exceeded);
  }
}

TEST(Sample, CycleSamplesAreProper) {
  auto g = cycle_embedded(5);
  auto r = *build_resolution(g.graph, builtin_library("low-degree-k4")).resolution;
  auto lists = uniform_lists(g.graph, {1, 2, 3, 4});
  for (std::uint64_t t = 0; t < 10000; ++t) ASSERT_TRUE(is_proper_list_coloring(g.graph, lists, sample_coloring(g.graph, lists, r, 3, t)));
}

TEST(Sample, CorruptResolution) {
  auto g = edge_graph();
  auto r = path_resolution();
  // Both lists {1}: the peeled vertex cannot be extended.
  try {
    sample_coloring(g, {{0, {1}}, {1, {1}}}, r, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::corrupt_certificate);
  }
  r.residue.clear();
  try {
    exact_distribution(g, uniform_lists(g, {1, 2}), r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::corrupt_certificate);
  }
}

TEST(Estimate, SingleVertexFrequencies) {
  Graph g;
  g.add_vertex(0);
  ListAssignment lists{{0, {1, 2, 3}}};
  auto m = estimate_marginals(g, lists, residue_only(g, 3), 30000, 9);
  Rational total = 0;
  for (const auto& [key, q] : m) {
    EXPECT_NEAR(q.get_d(), 1.0 / 3, 0.02);
    total += q;
  }
  EXPECT_EQ(total, 1);
  EXPECT_EQ(m, estimate_marginals(g, lists, residue_only(g, 3), 30000, 9));
}

TEST(Estimate, AgreesWithExactWithinFourSigma) {
  auto insts = random_instances(23, "c4c5c6", 1, 6);
  const auto& inst = insts.front();
  const std::size_t n = 100000;
  auto exact = marginals(exact_distribution(inst.graph, inst.lists, inst.resolution), inst.lists);
  auto est = estimate_marginals(inst.graph, inst.lists, inst.resolution, n, 77);
  std::map<Vertex, Rational> per_vertex;
  for (const auto& [key, q] : est) {
    const double p = exact.at(key).get_d();
    EXPECT_NEAR(q.get_d(), p, 4 * std::sqrt(p * (1 - p) / n) + 1e-12) << key.first << ":" << key.second;
    per_vertex[key.first] += q;
  }
  for (const auto& [v, s] : per_vertex) EXPECT_EQ(s, 1);
}

TEST(Bounds, SmallExamples) {
  Graph g;
  g.add_vertex(0);
  auto rep = verify_bounds(g, {{0, {1, 2, 3}}}, exact_distribution(g, {{0, {1, 2, 3}}}, residue_only(g, 3)),
                           builtin_family("none"), 3, 1, {0});
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.epsilon, Rational(1, 9));
  EXPECT_EQ(rep.min_marginal, Rational(1, 3));

  auto e = edge_graph();
  auto lists = uniform_lists(e, {1, 2});
  auto d = exact_distribution(e, lists, residue_only(e, 3));
  auto rep2 = verify_bounds(e, lists, d, builtin_family("none"), 3, 1, {0, 1});
  EXPECT_TRUE(rep2.ok());
  EXPECT_EQ(rep2.min_marginal, Rational(1, 2));
  EXPECT_EQ(avoidance(d, {}, 1), 1);
  // Sets of size at most k-2 = 1: the empty set and both singletons.
  EXPECT_EQ(rep2.forbidding_sets_checked, 3u);
}

TEST(Bounds, ViolationIsReported) {
  auto g = edge_graph();
  auto lists = uniform_lists(g, {1, 2});
  ColoringDistribution skewed{{Coloring{{0, 1}, {1, 2}}, Rational(1)}};
  auto rep = verify_bounds(g, lists, skewed, builtin_family("none"), 3, 1, {0, 1});
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.min_marginal, 0);
  bool avoid = false;
  for (const auto& v : rep.violations) avoid = avoid || v.claim == "avoidance";
  EXPECT_TRUE(avoid);
}

TEST(Bounds, HoldOnBuiltResolutions) {
  for (const auto& library : {"c4c5c6", "diamond", "house-k23", "c4-near-triangles"})
    for (const auto& inst : random_instances(29, library, 3, 7)) {
      auto d = exact_distribution(inst.graph, inst.lists, inst.resolution);
      auto rep = verify_bounds(inst.graph, inst.lists, d, inst.resolution);
      EXPECT_TRUE(rep.ok()) << library;
      EXPECT_GE(rep.min_marginal, rep.epsilon);
      if (inst.resolution.kind == ReducibilityMode::strong) {
        EXPECT_EQ(rep.marginals_checked, inst.graph.order() * inst.resolution.k);
      }
    }
}

TEST(Satisfaction, WeakAccountingAndOracleDominance) {
  std::mt19937_64 rng(31);
  for (const auto& library : {"house-k23", "c4c5c6"})
    for (const auto& inst : random_instances(37, library, 4, 7)) {
      Request r;
      r.kind = RequestKind::widespread;
      for (const auto& [v, l] : inst.lists) r.wanted[v] = l[rng() % l.size()];
      auto d = exact_distribution(inst.graph, inst.lists, inst.resolution);
      auto acc = weak_accounting(inst.graph, d, inst.resolution, r);
      EXPECT_TRUE(acc.ok()) << library;
      const auto expected = expected_satisfaction(d, r);
      EXPECT_GE(max_satisfaction(inst.graph, inst.lists, r).score, expected);
      EXPECT_GE(expected * static_cast<long>(inst.graph.order()), acc.expected_matched);

      Request w;
      w.kind = RequestKind::weighted;
      for (const auto& [v, l] : inst.lists) w.weights[{v, l.front()}] = Rational(static_cast<long>(rng() % 5 + 1), 3);
      EXPECT_GE(max_satisfaction(inst.graph, inst.lists, w).score, expected_satisfaction(d, w));
    }
}
