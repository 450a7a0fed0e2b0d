#pragma once

// Boundary-reducibility of small configurations, decided exhaustively.
//
// A core of n vertices with list sizes f is f-choosable iff every f-assignment
// admits a coloring. The decision works over vertex subsets S of the core:
//  * a vertex with f(v) > deg_S(v) can always be colored last, so S reduces
//    to S - v;
//  * otherwise S is choosable iff every S - v is, and every assignment in
//    which each color lies in at least two lists is colorable (a color owned
//    by a single vertex can be saved for it after coloring the rest).
// Assignments are enumerated once per color-renaming class.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "flexcolor/coloring.hpp"
#include "flexcolor/graph.hpp"
#include "flexcolor/graph_io.hpp"

namespace flexcolor {

/// Largest core handled by the exhaustive checker.
inline constexpr int max_core_vertices = 20;

struct Configuration {
  std::string name;
  Graph pattern;                      // H, boundary included
  std::set<Vertex> boundary;          // B
  std::map<Vertex, int> host_degree;  // deg_G(v) for core vertices
  std::optional<std::set<Vertex>> declared_fix;

  std::vector<Vertex> core() const {
    std::vector<Vertex> out;
    for (Vertex v : pattern.vertices())
      if (!boundary.count(v)) out.push_back(v);
    return out;
  }

  /// H - B.
  Graph core_graph() const { return pattern.induced(core()); }
};

inline void validate_configuration(const Configuration& c) {
  for (Vertex b : c.boundary)
    if (!c.pattern.has_vertex(b)) throw Error(ErrorCode::invalid_graph, "boundary vertex " + std::to_string(b) + " not in H");
  const auto core = c.core();
  if (core.empty()) throw Error(ErrorCode::invalid_graph, c.name + ": boundary must be a proper subset of V(H)");
  if (static_cast<int>(core.size()) > max_core_vertices)
    throw Error(ErrorCode::size_guard, c.name + ": more than " + std::to_string(max_core_vertices) + " core vertices");
  for (const auto& [v, d] : c.host_degree) {
    if (c.boundary.count(v)) throw Error(ErrorCode::invalid_graph, "boundary vertex " + std::to_string(v) + " has a degree");
    if (!c.pattern.has_vertex(v)) throw Error(ErrorCode::invalid_graph, "degree for unknown vertex " + std::to_string(v));
  }
  for (Vertex v : core) {
    auto it = c.host_degree.find(v);
    if (it == c.host_degree.end()) throw Error(ErrorCode::invalid_graph, "core vertex " + std::to_string(v) + " has no degree");
    if (it->second < c.pattern.degree(v))
      throw Error(ErrorCode::invalid_graph, "core vertex " + std::to_string(v) + " has more drawn edges than its degree");
  }
  if (c.declared_fix)
    for (Vertex v : *c.declared_fix)
      if (!c.pattern.has_vertex(v) || c.boundary.count(v))
        throw Error(ErrorCode::invalid_graph, "fix vertex " + std::to_string(v) + " is not a core vertex");
}

using SizeMap = std::map<Vertex, int>;

/// f(v) = k - deg_G(v) + deg_{H-B}(v) on the core.
inline SizeMap residual_list_sizes(const Configuration& c, int k) {
  validate_configuration(c);
  const Graph core = c.core_graph();
  SizeMap f;
  for (Vertex v : core.vertices()) {
    const int size = k - c.host_degree.at(v) + core.degree(v);
    if (size <= 0)
      throw Error(ErrorCode::infeasible_configuration,
                  c.name + ": vertex " + std::to_string(v) + " has " + std::to_string(size) + " available colors");
    f[v] = size;
  }
  return f;
}

namespace detail {

// Enumerates list assignments with |L(i)| = f[i] up to renaming of colors.
// Colors with the same membership among the vertices seen so far form a
// class; each vertex takes some number of colors from every class plus some
// fresh ones, so every renaming class is produced exactly once. Lists are
// bitmasks over color indices 0..63.
class AssignmentEnumerator {
 public:
  using Visit = std::function<bool(const std::vector<std::uint64_t>&)>;

  AssignmentEnumerator(std::vector<int> f, bool private_free) : f_(std::move(f)), private_free_(private_free) {
    const int total = std::accumulate(f_.begin(), f_.end(), 0);
    max_colors_ = private_free_ ? total / 2 : total;
    if (max_colors_ > 64) throw Error(ErrorCode::size_guard, "more than 64 colors in the assignment universe");
    suffix_.assign(f_.size() + 1, 0);
    for (int i = static_cast<int>(f_.size()) - 1; i >= 0; --i) suffix_[i] = suffix_[i + 1] + f_[i];
  }

  /// Returns false if the visitor stopped the enumeration.
  bool run(const Visit& visit) {
    visit_ = &visit;
    stop_ = false;
    lists_.assign(f_.size(), 0);
    count_.assign(64, 0);
    colors_ = 0;
    classes_.clear();
    vertex(0);
    return !stop_;
  }

 private:
  void vertex(std::size_t i) {
    if (stop_) return;
    if (i == f_.size()) {
      if (private_free_)
        for (int c = 0; c < colors_; ++c)
          if (count_[c] < 2) return;
      if (!(*visit_)(lists_)) stop_ = true;
      return;
    }
    if (private_free_) {
      int lonely = 0;
      for (int c = 0; c < colors_; ++c) lonely += count_[c] == 1 ? 1 : 0;
      if (lonely > suffix_[i]) return;
    }
    std::vector<std::vector<int>> next;
    take(i, 0, f_[i], 0, next);
  }

  void take(std::size_t i, std::size_t j, int remaining, std::uint64_t mask, std::vector<std::vector<int>>& next) {
    if (stop_) return;
    if (j == classes_.size()) {
      // Fresh colors would stay private at the last vertex.
      if (remaining > 0 && private_free_ && i + 1 == f_.size()) return;
      if (colors_ + remaining > max_colors_) return;
      const int first = colors_;
      std::vector<int> fresh;
      for (int c = 0; c < remaining; ++c) {
        fresh.push_back(first + c);
        mask |= std::uint64_t{1} << (first + c);
      }
      auto saved_classes = classes_;
      auto saved_next_size = next.size();
      if (!fresh.empty()) next.push_back(fresh);
      colors_ += remaining;
      lists_[i] = mask;
      for (std::uint64_t m = mask; m; m &= m - 1) ++count_[std::countr_zero(m)];
      classes_ = next;
      vertex(i + 1);
      classes_ = saved_classes;
      for (std::uint64_t m = mask; m; m &= m - 1) --count_[std::countr_zero(m)];
      lists_[i] = 0;
      colors_ = first;
      next.resize(saved_next_size);
      return;
    }
    const std::vector<int> cls = classes_[j];
    const int limit = std::min<int>(remaining, static_cast<int>(cls.size()));
    for (int t = 0; t <= limit && !stop_; ++t) {
      const auto saved = next.size();
      std::vector<int> taken(cls.begin(), cls.begin() + t), rest(cls.begin() + t, cls.end());
      std::uint64_t m = mask;
      for (int c : taken) m |= std::uint64_t{1} << c;
      if (!taken.empty()) next.push_back(taken);
      if (!rest.empty()) next.push_back(rest);
      take(i, j + 1, remaining - t, m, next);
      next.resize(saved);
    }
  }

  std::vector<int> f_;
  bool private_free_;
  int max_colors_ = 0;
  std::vector<int> suffix_;
  const Visit* visit_ = nullptr;
  bool stop_ = false;
  std::vector<std::uint64_t> lists_;
  std::vector<int> count_;
  int colors_ = 0;
  std::vector<std::vector<int>> classes_;
};

// Subset-memoized choosability of a dense core graph (n <= 20).
class ChoosabilityOracle {
 public:
  ChoosabilityOracle(int n, std::vector<std::uint32_t> adj, std::vector<int> f)
      : n_(n), adj_(std::move(adj)), f_(std::move(f)) {}

  bool choosable() { return decide(full()); }

  /// An f-assignment on all vertices with no coloring; colors are 1-based.
  std::vector<std::vector<Color>> witness() {
    std::vector<std::vector<Color>> lists(n_);
    Color next = 1;
    build_witness(full(), lists, next);
    return lists;
  }

 private:
  struct Entry {
    bool ok = true;
    int drop = -1;                               // failure inherited from S - drop
    std::vector<std::uint64_t> bad;              // failing assignment on S (dense)
  };

  std::uint32_t full() const { return n_ == 32 ? ~0u : (std::uint32_t{1} << n_) - 1; }

  bool decide(std::uint32_t S) {
    if (S == 0) return true;
    auto it = memo_.find(S);
    if (it != memo_.end()) return it->second.ok;
    Entry e;
    for (std::uint32_t m = S; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      if (f_[v] > std::popcount(adj_[v] & S)) {
        if (!decide(S & ~(std::uint32_t{1} << v))) {
          e.ok = false;
          e.drop = v;
        }
        memo_[S] = e;
        return e.ok;
      }
    }
    for (std::uint32_t m = S; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      if (!decide(S & ~(std::uint32_t{1} << v))) {
        e.ok = false;
        e.drop = v;
        memo_[S] = e;
        return false;
      }
    }
    std::vector<int> members, sizes;
    for (std::uint32_t m = S; m; m &= m - 1) {
      members.push_back(std::countr_zero(m));
      sizes.push_back(f_[members.back()]);
    }
    std::vector<std::uint32_t> local_adj(members.size(), 0);
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = 0; b < members.size(); ++b)
        if (adj_[members[a]] >> members[b] & 1u) local_adj[a] |= std::uint32_t{1} << b;
    const std::uint32_t all = (members.size() == 32) ? ~0u : (std::uint32_t{1} << members.size()) - 1;
    AssignmentEnumerator en(sizes, true);
    std::vector<std::uint64_t> scratch(members.size());
    en.run([&](const std::vector<std::uint64_t>& lists) {
      scratch = lists;
      if (small_colorable(static_cast<int>(members.size()), local_adj.data(), scratch.data(), all)) return true;
      e.ok = false;
      e.bad.assign(n_, 0);
      for (std::size_t a = 0; a < members.size(); ++a) e.bad[members[a]] = lists[a];
      return false;
    });
    memo_[S] = e;
    return e.ok;
  }

  void build_witness(std::uint32_t S, std::vector<std::vector<Color>>& lists, Color& next) {
    if (S == 0) return;
    decide(S);
    const Entry& e = memo_.at(S);
    if (e.drop >= 0) {
      const std::uint32_t rest = S & ~(std::uint32_t{1} << e.drop);
      build_witness(rest, lists, next);
      // Fresh colors: any coloring of S would restrict to one of S - drop.
      for (int c = 0; c < f_[e.drop]; ++c) lists[e.drop].push_back(next++);
      return;
    }
    const Color base = next;
    int used = 0;
    for (std::uint32_t m = S; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      for (std::uint64_t cs = e.bad[v]; cs; cs &= cs - 1) {
        const int c = std::countr_zero(cs);
        lists[v].push_back(base + c);
        used = std::max(used, c + 1);
      }
    }
    next = base + used;
  }

  int n_;
  std::vector<std::uint32_t> adj_;
  std::vector<int> f_;
  std::unordered_map<std::uint32_t, Entry> memo_;
};

struct DenseCore {
  std::vector<Vertex> vertex;
  std::vector<std::uint32_t> adj;

  explicit DenseCore(const Graph& g) : vertex(g.vertices()), adj(vertex.size(), 0) {
    if (vertex.size() > static_cast<std::size_t>(max_core_vertices))
      throw Error(ErrorCode::size_guard, "core too large for exhaustive checking");
    for (std::size_t i = 0; i < vertex.size(); ++i)
      for (std::size_t j = 0; j < vertex.size(); ++j)
        if (g.has_edge(vertex[i], vertex[j])) adj[i] |= std::uint32_t{1} << j;
  }
  int index(Vertex v) const {
    return static_cast<int>(std::lower_bound(vertex.begin(), vertex.end(), v) - vertex.begin());
  }
};

}  // namespace detail

/// One representative per color-renaming class of assignments with |L(v)| = f(v),
/// colors drawn from 1..sum f. The visitor returns false to stop; returns the
/// number of representatives visited.
inline std::size_t enumerate_f_assignments(const SizeMap& f, const std::function<bool(const ListAssignment&)>& visit) {
  std::vector<Vertex> ids;
  std::vector<int> sizes;
  for (const auto& [v, s] : f) {
    if (s < 1) throw Error(ErrorCode::infeasible_configuration, "list size below 1 at vertex " + std::to_string(v));
    ids.push_back(v);
    sizes.push_back(s);
  }
  std::size_t count = 0;
  detail::AssignmentEnumerator en(sizes, false);
  en.run([&](const std::vector<std::uint64_t>& lists) {
    ++count;
    ListAssignment L;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto& out = L[ids[i]];
      for (std::uint64_t m = lists[i]; m; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
    }
    return visit(L);
  });
  return count;
}

struct ChoosabilityResult {
  bool choosable = true;
  std::optional<ListAssignment> witness;  // an uncolorable assignment with the given sizes
};

/// Whether `g` is L-colorable for every L with |L(v)| >= f(v). Sizes of 0 are
/// allowed and make the graph non-choosable.
inline ChoosabilityResult check_choosable(const Graph& g, const SizeMap& f) {
  detail::DenseCore core(g);
  std::vector<int> sizes;
  for (Vertex v : core.vertex) sizes.push_back(std::max(0, f.at(v)));
  detail::ChoosabilityOracle oracle(static_cast<int>(core.vertex.size()), core.adj, sizes);
  ChoosabilityResult out;
  out.choosable = oracle.choosable();
  if (!out.choosable) {
    auto lists = oracle.witness();
    ListAssignment L;
    for (std::size_t i = 0; i < core.vertex.size(); ++i) {
      std::sort(lists[i].begin(), lists[i].end());
      L[core.vertex[i]] = lists[i];
    }
    out.witness = std::move(L);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forbidden families

struct ForbiddenFamily {
  std::string name;
  std::vector<std::pair<std::string, Graph>> patterns;
  std::optional<int> triangles_within_distance;  // two distinct triangles this close

  /// Name of some member found in `g` as an ordinary subgraph.
  std::optional<std::string> find_member(const Graph& g) const {
    for (const auto& [pname, p] : patterns)
      if (contains_subgraph(g, p)) return pname;
    if (triangles_within_distance) {
      const auto ts = triangles(g);
      for (std::size_t a = 0; a < ts.size(); ++a) {
        const auto dist = distances_from(g, std::vector<Vertex>(ts[a].begin(), ts[a].end()));
        for (std::size_t b = a + 1; b < ts.size(); ++b)
          for (Vertex x : ts[b]) {
            auto it = dist.find(x);
            if (it != dist.end() && it->second <= *triangles_within_distance)
              return "triangles_within_distance " + std::to_string(*triangles_within_distance);
          }
      }
    }
    return std::nullopt;
  }

  bool contains_member(const Graph& g) const { return find_member(g).has_value(); }

  /// Edges of some member occurrence; for a close pair of triangles, the
  /// edges of the first triangle.
  std::optional<std::vector<std::pair<Vertex, Vertex>>> find_occurrence(const Graph& g) const {
    for (const auto& [pname, p] : patterns)
      if (auto m = find_subgraph(g, p)) {
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (auto [u, v] : p.edges()) edges.emplace_back(m->at(u), m->at(v));
        return edges;
      }
    if (triangles_within_distance) {
      const auto ts = triangles(g);
      for (std::size_t a = 0; a < ts.size(); ++a) {
        const auto dist = distances_from(g, std::vector<Vertex>(ts[a].begin(), ts[a].end()));
        for (std::size_t b = a + 1; b < ts.size(); ++b)
          for (Vertex x : ts[b]) {
            auto it = dist.find(x);
            if (it != dist.end() && it->second <= *triangles_within_distance)
              return std::vector<std::pair<Vertex, Vertex>>{
                  {ts[a][0], ts[a][1]}, {ts[a][1], ts[a][2]}, {ts[a][0], ts[a][2]}};
          }
      }
    }
    return std::nullopt;
  }
  bool empty() const { return patterns.empty() && !triangles_within_distance; }
};

inline std::vector<std::string> builtin_family_names() { return {"none", "diamond", "c4-near-triangles", "c4c5c6", "house-k23", "c4", "c4c5", "house"}; }

inline ForbiddenFamily builtin_family(const std::string& name) {
  ForbiddenFamily f;
  f.name = name;
  if (name == "none" || name == "empty") {
    f.name = "none";
  } else if (name == "diamond") {
    f.patterns = {{"k4-minus-edge", diamond_graph()}};
  } else if (name == "c4-near-triangles") {
    f.patterns = {{"c4", cycle_graph(4)}};
    f.triangles_within_distance = 1;
  } else if (name == "c4c5c6") {
    f.patterns = {{"c4", cycle_graph(4)}, {"c5", cycle_graph(5)}, {"c6", cycle_graph(6)}};
  } else if (name == "house-k23") {
    f.patterns = {{"house", house_graph()}, {"k23", complete_bipartite_graph(2, 3)}};
  } else if (name == "c4") {
    f.patterns = {{"c4", cycle_graph(4)}};
  } else if (name == "c4c5") {
    f.patterns = {{"c4", cycle_graph(4)}, {"c5", cycle_graph(5)}};
  } else if (name == "house") {
    f.patterns = {{"house", house_graph()}};
  } else {
    throw Error(ErrorCode::unknown_name, "no builtin family '" + name + "'");
  }
  return f;
}

/// H plus an apex adjacent exactly to I contains no member of the family.
inline bool is_forbidding(const Graph& h, const std::vector<Vertex>& I, const ForbiddenFamily& family) {
  Graph g = h;
  const Vertex apex = h.empty() ? 0 : h.vertices().back() + 1;
  g.add_vertex(apex);
  for (Vertex v : I) g.add_edge(apex, v);
  return !family.contains_member(g);
}

// ---------------------------------------------------------------------------
// (FIX), (FORB) and the combined verdict

enum class ReducibilityMode { strong, weak };

struct Witness {
  std::string clause;            // "fix" or "forb"
  std::vector<Vertex> vertices;  // the fixed vertex, or the set I
  ListAssignment lists;          // assignment of H - B with no coloring
};

struct ReducibilityReport {
  std::string name;
  int k = 0;
  std::string family;
  SizeMap sizes;
  bool strong = false;
  bool weak = false;
  bool forb_ok = false;
  std::set<Vertex> fix_set;
  std::vector<std::vector<Vertex>> forbidding_sets;
  std::vector<Witness> witnesses;
  bool fix_discrepancy = false;
};

namespace detail {

class ChoosabilityCache {
 public:
  explicit ChoosabilityCache(const Graph& core) : core_(core) {}
  const ChoosabilityResult& get(const SizeMap& f) {
    auto it = cache_.find(f);
    if (it == cache_.end()) it = cache_.emplace(f, check_choosable(core_, f)).first;
    return it->second;
  }

 private:
  const Graph& core_;
  std::map<SizeMap, ChoosabilityResult> cache_;
};

inline SizeMap fix_sizes(SizeMap f, Vertex v) {
  f[v] = 1;
  return f;
}

inline SizeMap forb_sizes(SizeMap f, const std::vector<Vertex>& I) {
  for (Vertex v : I) f[v] -= 1;
  return f;
}

}  // namespace detail

/// Core vertices v for which H - B is colorable from every (f with v set to 1)-assignment.
inline std::set<Vertex> check_fix(const Configuration& c, int k, std::vector<Witness>* witnesses = nullptr) {
  const SizeMap f = residual_list_sizes(c, k);
  const Graph core = c.core_graph();
  detail::ChoosabilityCache cache(core);
  std::set<Vertex> out;
  for (const auto& [v, size] : f) {
    const auto& r = cache.get(detail::fix_sizes(f, v));
    if (r.choosable) {
      out.insert(v);
    } else if (witnesses) {
      witnesses->push_back({"fix", {v}, *r.witness});
    }
  }
  return out;
}

/// Forbidding sets I of the core with 1 <= |I| <= k-2, in order of size then lexicographically.
inline std::vector<std::vector<Vertex>> forbidding_sets(const Configuration& c, int k, const ForbiddenFamily& family) {
  const auto core = c.core();
  std::vector<std::vector<Vertex>> out;
  const int n = static_cast<int>(core.size());
  for (int size = 1; size <= std::min(n, k - 2); ++size) {
    std::vector<int> pick(size);
    for (int i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      std::vector<Vertex> I;
      for (int i : pick) I.push_back(core[i]);
      if (is_forbidding(c.pattern, I, family)) out.push_back(I);
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

/// Colorability at full f (the empty set) and at f - 1_I for every forbidding I.
inline bool check_forb(const Configuration& c, int k, const ForbiddenFamily& family,
                       std::vector<Witness>* witnesses = nullptr,
                       std::vector<std::vector<Vertex>>* sets = nullptr) {
  const SizeMap f = residual_list_sizes(c, k);
  const Graph core = c.core_graph();
  detail::ChoosabilityCache cache(core);
  bool ok = true;
  const auto& base = cache.get(f);
  if (!base.choosable) {
    ok = false;
    if (witnesses) witnesses->push_back({"forb", {}, *base.witness});
  }
  const auto Is = forbidding_sets(c, k, family);
  if (sets) *sets = Is;
  for (const auto& I : Is) {
    const auto& r = cache.get(detail::forb_sizes(f, I));
    if (!r.choosable) {
      ok = false;
      if (witnesses) witnesses->push_back({"forb", I, *r.witness});
    }
  }
  return ok;
}

inline ReducibilityReport check_reducible(const Configuration& c, int k, const ForbiddenFamily& family,
                                          ReducibilityMode mode = ReducibilityMode::strong) {
  ReducibilityReport rep;
  rep.name = c.name;
  rep.k = k;
  rep.family = family.name;
  rep.sizes = residual_list_sizes(c, k);
  rep.fix_set = check_fix(c, k, &rep.witnesses);
  rep.forb_ok = check_forb(c, k, family, &rep.witnesses, &rep.forbidding_sets);
  rep.strong = rep.forb_ok && rep.fix_set.size() == rep.sizes.size();
  rep.weak = rep.forb_ok && !rep.fix_set.empty();
  if (mode == ReducibilityMode::weak && c.declared_fix)
    rep.fix_discrepancy = !std::includes(rep.fix_set.begin(), rep.fix_set.end(), c.declared_fix->begin(),
                                         c.declared_fix->end());
  return rep;
}

// ---------------------------------------------------------------------------
// "flexconfig v1" and "flexfamily v1"

namespace detail {

enum class DegreeOp { eq, le, ge };

struct DegreeBound {
  DegreeOp op = DegreeOp::eq;
  int value = 0;
  bool admits(int d) const {
    switch (op) {
      case DegreeOp::eq: return d == value;
      case DegreeOp::le: return d <= value;
      case DegreeOp::ge: return d >= value;
    }
    return false;
  }
};

inline std::string to_string(const DegreeBound& b) {
  const char* op = b.op == DegreeOp::eq ? "=" : b.op == DegreeOp::le ? "<=" : ">=";
  return std::string("deg") + op + std::to_string(b.value);
}

inline DegreeBound parse_degree_bound(const std::string& token, const std::string& where) {
  for (auto [prefix, op] : {std::pair{"deg<=", DegreeOp::le}, {"deg>=", DegreeOp::ge}, {"deg=", DegreeOp::eq}}) {
    const std::string p = prefix;
    if (token.rfind(p, 0) == 0) return {op, parse_int(token.substr(p.size()), where)};
  }
  throw Error(ErrorCode::parse, where + ": expected deg=<n>, deg<=<n> or deg>=<n>, got '" + token + "'");
}

// Shared body of configuration and template files. Lines other than core,
// boundary, edge, fix and name are handed to `extra`.
struct ConfigBody {
  std::string name;
  Graph pattern;
  std::set<Vertex> boundary;
  std::map<Vertex, DegreeBound> degree;
  std::optional<std::set<Vertex>> fix;
};

inline ConfigBody parse_config_body(
    const std::vector<std::pair<int, std::string>>& lines,
    const std::function<bool(const std::vector<std::string>&, const std::string&)>& extra = nullptr) {
  ConfigBody out;
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (const auto& [number, line] : lines) {
    const std::string where = "line " + std::to_string(number);
    const auto tok = split_ws(line);
    if (tok[0] == "name" && tok.size() == 2) {
      out.name = tok[1];
    } else if (tok[0] == "core" && tok.size() == 3) {
      Vertex v = parse_int(tok[1], where);
      if (out.pattern.has_vertex(v)) throw Error(ErrorCode::parse, where + ": vertex " + tok[1] + " declared twice");
      out.pattern.add_vertex(v);
      out.degree[v] = parse_degree_bound(tok[2], where);
    } else if (tok[0] == "boundary" && tok.size() == 2) {
      Vertex v = parse_int(tok[1], where);
      if (out.pattern.has_vertex(v)) throw Error(ErrorCode::parse, where + ": vertex " + tok[1] + " declared twice");
      out.pattern.add_vertex(v);
      out.boundary.insert(v);
    } else if (tok[0] == "edge" && tok.size() == 3) {
      edges.emplace_back(parse_int(tok[1], where), parse_int(tok[2], where));
    } else if (tok[0] == "fix" && tok.size() >= 2) {
      std::set<Vertex> fix;
      for (std::size_t i = 1; i < tok.size(); ++i) fix.insert(parse_int(tok[i], where));
      out.fix = fix;
    } else if (!extra || !extra(tok, where)) {
      throw Error(ErrorCode::parse, where + ": unrecognized line '" + line + "'");
    }
  }
  for (auto [u, v] : edges) {
    if (!out.pattern.has_vertex(u) || !out.pattern.has_vertex(v))
      throw Error(ErrorCode::parse, "edge " + std::to_string(u) + " " + std::to_string(v) + " uses an undeclared vertex");
    if (u == v || out.pattern.has_edge(u, v))
      throw Error(ErrorCode::parse, "edge " + std::to_string(u) + " " + std::to_string(v) + " is a loop or repeated");
    out.pattern.add_edge(u, v);
  }
  return out;
}

inline void write_config_body(std::ostream& out, const std::string& name, const Graph& pattern,
                              const std::set<Vertex>& boundary, const std::map<Vertex, DegreeBound>& degree,
                              const std::optional<std::set<Vertex>>& fix) {
  if (!name.empty()) out << "name " << name << '\n';
  for (Vertex v : pattern.vertices()) {
    if (boundary.count(v))
      out << "boundary " << v << '\n';
    else
      out << "core " << v << ' ' << to_string(degree.at(v)) << '\n';
  }
  for (auto [u, v] : pattern.edges()) out << "edge " << u << ' ' << v << '\n';
  if (fix) {
    out << "fix";
    for (Vertex v : *fix) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace detail

inline Configuration parse_flexconfig(std::istream& in) {
  auto body = detail::parse_config_body(detail::content_lines(in, "flexconfig v1"));
  Configuration c;
  c.name = body.name;
  c.pattern = body.pattern;
  c.boundary = body.boundary;
  c.declared_fix = body.fix;
  for (const auto& [v, b] : body.degree) {
    if (b.op != detail::DegreeOp::eq)
      throw Error(ErrorCode::parse, "configuration vertex " + std::to_string(v) + " needs an exact degree");
    c.host_degree[v] = b.value;
  }
  try {
    validate_configuration(c);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::size_guard) throw;
    throw Error(ErrorCode::parse, e.what());
  }
  return c;
}

inline Configuration parse_flexconfig(const std::string& text) {
  std::istringstream in(text);
  return parse_flexconfig(in);
}

inline Configuration load_flexconfig(const std::string& path) { return parse_flexconfig(detail::read_file(path)); }

inline std::string serialize_flexconfig(const Configuration& c) {
  std::ostringstream out;
  out << "flexconfig v1\n";
  std::map<Vertex, detail::DegreeBound> degree;
  for (const auto& [v, d] : c.host_degree) degree[v] = {detail::DegreeOp::eq, d};
  detail::write_config_body(out, c.name, c.pattern, c.boundary, degree, c.declared_fix);
  return out.str();
}

inline ForbiddenFamily parse_flexfamily(std::istream& in) {
  ForbiddenFamily f;
  std::optional<std::pair<std::string, std::vector<std::pair<Vertex, Vertex>>>> open;
  auto close = [&] {
    if (!open) return;
    Graph g;
    for (auto [u, v] : open->second) {
      if (u == v || g.has_edge(u, v)) throw Error(ErrorCode::parse, "pattern " + open->first + " has a loop or repeated edge");
      g.add_edge(u, v);
    }
    f.patterns.emplace_back(open->first, g);
    open.reset();
  };
  for (const auto& [number, line] : detail::content_lines(in, "flexfamily v1")) {
    const std::string where = "line " + std::to_string(number);
    const auto tok = detail::split_ws(line);
    if (tok[0] == "name" && tok.size() == 2) {
      f.name = tok[1];
    } else if (tok[0] == "pattern" && tok.size() == 2) {
      close();
      open.emplace(tok[1], std::vector<std::pair<Vertex, Vertex>>{});
    } else if (tok[0] == "edge" && tok.size() == 3) {
      if (!open) throw Error(ErrorCode::parse, where + ": edge outside a pattern block");
      open->second.emplace_back(detail::parse_int(tok[1], where), detail::parse_int(tok[2], where));
    } else if (tok[0] == "predicate" && tok.size() == 3 && tok[1] == "triangles_within_distance") {
      close();
      f.triangles_within_distance = detail::parse_int(tok[2], where);
    } else if (tok[0] == "predicate" && tok.size() == 2 && tok[1] == "none") {
      close();
    } else {
      throw Error(ErrorCode::parse, where + ": unrecognized line '" + line + "'");
    }
  }
  close();
  return f;
}

inline ForbiddenFamily parse_flexfamily(const std::string& text) {
  std::istringstream in(text);
  return parse_flexfamily(in);
}

/// A builtin family name, or otherwise a path to a flexfamily file.
inline ForbiddenFamily resolve_family(const std::string& name_or_path) {
  const auto names = builtin_family_names();
  if (name_or_path == "empty" || std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_family(name_or_path);
  return parse_flexfamily(detail::read_file(name_or_path));
}

inline std::string serialize_flexfamily(const ForbiddenFamily& f) {
  std::ostringstream out;
  out << "flexfamily v1\n";
  if (!f.name.empty()) out << "name " << f.name << '\n';
  for (const auto& [name, g] : f.patterns) {
    out << "pattern " << name << '\n';
    for (auto [u, v] : g.edges()) out << "edge " << u << ' ' << v << '\n';
  }
  if (f.triangles_within_distance) out << "predicate triangles_within_distance " << *f.triangles_within_distance << '\n';
  if (f.empty()) out << "predicate none\n";
  return out.str();
}

}  // namespace flexcolor
