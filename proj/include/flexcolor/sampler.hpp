#pragma once

// The randomized coloring process driven by a resolution: color the residue
// uniformly, then extend over the peeled sets from the last step back to the
// first, each time uniformly among the colorings of G[Q] that agree with the
// colors already placed.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flexcolor/coloring.hpp"
#include "flexcolor/reducibility.hpp"
#include "flexcolor/resolution.hpp"

namespace flexcolor {

/// SplitMix64 stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix(z);
  }

  /// Uniform in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw Error(ErrorCode::domain, "empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      const std::uint64_t x = next();
      if (x < limit) return x % n;
    }
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Independent stream for one (seed, stage, trial) triple.
  static SplitMix64 keyed(std::uint64_t seed, std::uint64_t stage, std::uint64_t trial) {
    std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
    h = mix(h ^ (stage + 0x632be59bd9b4e019ULL));
    h = mix(h ^ (trial + 0x85157af5a2a4b0c3ULL));
    return SplitMix64(h);
  }

 private:
  std::uint64_t state_;
};

using ColoringDistribution = std::map<Coloring, Rational>;
using MarginalTable = std::map<std::pair<Vertex, Color>, Rational>;

namespace detail {

/// One extension block: the residue first, then Q_M, ..., Q_1.
struct Stage {
  std::vector<Vertex> vertices;
  Graph block;  // G[Q]
};

inline std::vector<Stage> sampling_stages(const Graph& g, const Resolution& r) {
  std::vector<Stage> out;
  auto add = [&](const std::vector<Vertex>& q) {
    for (Vertex v : q)
      if (!g.has_vertex(v)) throw Error(ErrorCode::corrupt_certificate, "resolution names unknown vertex " + std::to_string(v));
    out.push_back({q, g.induced(q)});
  };
  if (!r.residue.empty()) add(r.residue);
  for (auto it = r.steps.rbegin(); it != r.steps.rend(); ++it) add(it->peeled);
  std::set<Vertex> seen;
  for (const auto& s : out)
    for (Vertex v : s.vertices)
      if (!seen.insert(v).second) throw Error(ErrorCode::corrupt_certificate, "vertex " + std::to_string(v) + " is peeled twice");
  if (seen.size() != g.order()) throw Error(ErrorCode::corrupt_certificate, "resolution does not cover the graph");
  return out;
}

/// L'(y): L(y) minus the colors psi already placed on neighbors outside the block.
inline ListAssignment extension_lists(const Graph& g, const ListAssignment& lists, const Stage& s, const Coloring& psi) {
  ListAssignment out;
  for (Vertex y : s.vertices) {
    auto list = lists.at(y);
    for (Vertex w : g.neighbors(y)) {
      auto it = psi.find(w);
      if (it == psi.end()) continue;
      auto pos = std::lower_bound(list.begin(), list.end(), it->second);
      if (pos != list.end() && *pos == it->second) list.erase(pos);
    }
    out[y] = std::move(list);
  }
  return out;
}

inline std::vector<Coloring> extensions(const Graph& g, const ListAssignment& lists, const Stage& s, const Coloring& psi) {
  auto ext = all_colorings(s.block, extension_lists(g, lists, s, psi));
  if (ext.empty()) throw Error(ErrorCode::corrupt_certificate, "a peeled set has no extension of the partial coloring");
  return ext;
}

}  // namespace detail

/// One draw of the process; trial selects an independent stream under seed.
inline Coloring sample_coloring(const Graph& g, const ListAssignment& lists, const Resolution& r, std::uint64_t seed,
                                std::uint64_t trial = 0) {
  validate_lists(g, lists);
  const auto stages = detail::sampling_stages(g, r);
  Coloring psi;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto ext = detail::extensions(g, lists, stages[i], psi);
    auto rng = SplitMix64::keyed(seed, i, trial);
    for (const auto& [v, c] : ext[rng.below(ext.size())]) psi[v] = c;
  }
  if (!is_proper_list_coloring(g, lists, psi)) throw Error(ErrorCode::corrupt_certificate, "sampled coloring is not proper");
  return psi;
}

/// Exact law of sample_coloring. Throws budget_exceeded once more than
/// `budget` partial colorings have been expanded.
inline ColoringDistribution exact_distribution(const Graph& g, const ListAssignment& lists, const Resolution& r,
                                               std::size_t budget = 10'000'000) {
  validate_lists(g, lists);
  const auto stages = detail::sampling_stages(g, r);
  ColoringDistribution dist;
  std::size_t expanded = 0;
  std::function<void(std::size_t, Coloring&, const Rational&)> go = [&](std::size_t i, Coloring& psi, const Rational& prob) {
    if (i == stages.size()) {
      dist[psi] += prob;
      return;
    }
    const auto ext = detail::extensions(g, lists, stages[i], psi);
    expanded += ext.size();
    if (expanded > budget) throw Error(ErrorCode::budget_exceeded, "exact distribution exceeds the enumeration budget");
    const Rational share = prob / static_cast<long>(ext.size());
    for (const auto& e : ext) {
      for (const auto& [v, c] : e) psi[v] = c;
      go(i + 1, psi, share);
      for (const auto& [v, c] : e) psi.erase(v);
    }
  };
  Coloring psi;
  go(0, psi, Rational(1));
  return dist;
}

inline MarginalTable marginals(const ColoringDistribution& dist, const ListAssignment& lists) {
  MarginalTable out;
  for (const auto& [v, list] : lists)
    for (Color c : list) out[{v, c}] = 0;
  for (const auto& [phi, p] : dist)
    for (const auto& [v, c] : phi) out[{v, c}] += p;
  return out;
}

/// Prob[phi(v) != c for all v in I].
inline Rational avoidance(const ColoringDistribution& dist, const std::vector<Vertex>& I, Color c) {
  Rational total = 0;
  for (const auto& [phi, p] : dist)
    if (std::none_of(I.begin(), I.end(), [&](Vertex v) { return phi.at(v) == c; })) total += p;
  return total;
}

inline Rational expected_satisfaction(const ColoringDistribution& dist, const Request& r) {
  Rational total = 0;
  for (const auto& [phi, p] : dist) total += p * satisfaction(phi, r);
  return total;
}

/// Empirical frequencies over n_samples independent draws.
inline MarginalTable estimate_marginals(const Graph& g, const ListAssignment& lists, const Resolution& r,
                                        std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw Error(ErrorCode::domain, "need at least one sample");
  std::map<std::pair<Vertex, Color>, std::size_t> counts;
  for (const auto& [v, list] : lists)
    for (Color c : list) counts[{v, c}] = 0;
  for (std::size_t t = 0; t < n_samples; ++t)
    for (const auto& [v, c] : sample_coloring(g, lists, r, seed, t)) ++counts[{v, c}];
  MarginalTable out;
  for (const auto& [key, n] : counts) {
    Rational q(static_cast<long>(n), static_cast<long>(n_samples));
    q.canonicalize();
    out[key] = q;
  }
  return out;
}

/// Fix(G): the fixed vertices of every step and of the residue.
inline std::vector<Vertex> fixed_vertices(const Resolution& r) {
  std::set<Vertex> out(r.residue_fix.begin(), r.residue_fix.end());
  for (const auto& s : r.steps) out.insert(s.fix.begin(), s.fix.end());
  return {out.begin(), out.end()};
}

struct BoundViolation {
  std::string claim;  // "marginal" or "avoidance"
  std::vector<Vertex> vertices;
  Color color = 0;
  Rational probability;
  Rational bound;
};

struct BoundReport {
  int k = 0;
  int b = 0;
  Rational p;
  Rational epsilon;
  Rational min_marginal;   // over Fix(G) x L(v); 1 when Fix(G) is empty
  std::size_t marginals_checked = 0;
  std::size_t forbidding_sets_checked = 0;
  std::size_t avoidance_checked = 0;
  std::vector<BoundViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks the marginal bound on Fix(G) and the avoidance bound for every
/// forbidding set of G with at most k-2 vertices.
inline BoundReport verify_bounds(const Graph& g, const ListAssignment& lists, const ColoringDistribution& dist,
                                 const ForbiddenFamily& family, int k, int b, const std::vector<Vertex>& fix) {
  BoundReport rep;
  rep.k = k;
  rep.b = b;
  const auto eb = epsilon_bound(k, std::max(b, 1));
  rep.p = eb.p;
  rep.epsilon = eb.epsilon;
  rep.min_marginal = 1;
  const auto table = marginals(dist, lists);
  for (Vertex v : fix)
    for (Color c : lists.at(v)) {
      const Rational& m = table.at({v, c});
      ++rep.marginals_checked;
      if (m < rep.min_marginal) rep.min_marginal = m;
      if (m < rep.epsilon) rep.violations.push_back({"marginal", {v}, c, m, rep.epsilon});
    }

  std::set<Color> colors;
  for (const auto& [v, list] : lists) colors.insert(list.begin(), list.end());
  const auto verts = g.vertices();
  std::vector<Vertex> I;
  std::function<void(std::size_t)> subsets = [&](std::size_t from) {
    if (is_forbidding(g, I, family)) {
      ++rep.forbidding_sets_checked;
      const Rational bound = power(rep.p, static_cast<unsigned long>(I.size()));
      std::map<Color, Rational> hit;
      std::vector<Color> used;
      for (const auto& [phi, prob] : dist) {
        used.clear();
        for (Vertex v : I) used.push_back(phi.at(v));
        std::sort(used.begin(), used.end());
        used.erase(std::unique(used.begin(), used.end()), used.end());
        for (Color c : used) hit[c] += prob;
      }
      for (Color c : colors) {
        ++rep.avoidance_checked;
        const Rational a = 1 - hit[c];
        if (a < bound) rep.violations.push_back({"avoidance", I, c, a, bound});
      }
    }
    if (static_cast<int>(I.size()) >= k - 2) return;
    for (std::size_t i = from; i < verts.size(); ++i) {
      I.push_back(verts[i]);
      subsets(i + 1);
      I.pop_back();
    }
  };
  subsets(0);
  return rep;
}

inline BoundReport verify_bounds(const Graph& g, const ListAssignment& lists, const ColoringDistribution& dist,
                                 const Resolution& r) {
  return verify_bounds(g, lists, dist, resolve_family(r.family), r.k, r.effective_b(), fixed_vertices(r));
}

/// Accounting behind weak flexibility for a widespread request.
struct WeakAccounting {
  std::size_t order = 0;
  std::size_t fix_size = 0;
  int b = 0;
  Rational expected_matched;  // E[#v in Fix(G) with phi(v) = r(v)]
  Rational bound;             // epsilon |V| / b
  bool fix_large_enough = false;
  bool expectation_ok = false;

  bool ok() const { return fix_large_enough && expectation_ok; }
};

inline WeakAccounting weak_accounting(const Graph& g, const ColoringDistribution& dist, const Resolution& r,
                                      const Request& request) {
  WeakAccounting out;
  out.order = g.order();
  const auto fix = fixed_vertices(r);
  out.fix_size = fix.size();
  out.b = std::max(r.effective_b(), 1);
  out.fix_large_enough = static_cast<std::size_t>(out.b) * out.fix_size >= out.order;
  const Rational eps = epsilon_bound(r.k, out.b).epsilon;
  out.bound = eps * static_cast<long>(out.order) / out.b;
  out.expected_matched = 0;
  for (const auto& [phi, p] : dist)
    for (Vertex v : fix) {
      auto want = request.wanted.find(v);
      if (want != request.wanted.end() && phi.at(v) == want->second) out.expected_matched += p;
    }
  out.expectation_ok = out.expected_matched >= out.bound;
  return out;
}

}  // namespace flexcolor
