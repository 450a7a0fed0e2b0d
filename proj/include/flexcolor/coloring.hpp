#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flexcolor/graph.hpp"
#include "flexcolor/graph_io.hpp"
#include "flexcolor/rational.hpp"

namespace flexcolor {

using Color = int;
using ListAssignment = std::map<Vertex, std::vector<Color>>;  // each list sorted, no repeats
using Coloring = std::map<Vertex, Color>;

enum class RequestKind { plain, widespread, weighted };

inline const char* to_string(RequestKind kind) {
  switch (kind) {
    case RequestKind::plain: return "plain";
    case RequestKind::widespread: return "widespread";
    case RequestKind::weighted: return "weighted";
  }
  return "plain";
}

struct Request {
  RequestKind kind = RequestKind::plain;
  std::map<Vertex, Color> wanted;                        // plain / widespread
  std::map<std::pair<Vertex, Color>, Rational> weights;  // weighted

  /// w(G,L); weights are only ever keyed on list colors.
  Rational total_weight() const {
    Rational total = 0;
    for (const auto& [key, w] : weights) total += w;
    return total;
  }
};

inline void validate_lists(const Graph& g, const ListAssignment& lists) {
  for (const auto& [v, list] : lists) {
    if (!g.has_vertex(v)) throw Error(ErrorCode::invalid_graph, "list for unknown vertex " + std::to_string(v));
    if (!std::is_sorted(list.begin(), list.end()) || std::adjacent_find(list.begin(), list.end()) != list.end())
      throw Error(ErrorCode::invalid_graph, "list of vertex " + std::to_string(v) + " is not a set");
  }
  for (Vertex v : g.vertices())
    if (!lists.count(v)) throw Error(ErrorCode::invalid_graph, "no list for vertex " + std::to_string(v));
}

inline void validate_request(const Graph& g, const ListAssignment& lists, const Request& r) {
  auto in_list = [&](Vertex v, Color c) {
    auto it = lists.find(v);
    return it != lists.end() && std::binary_search(it->second.begin(), it->second.end(), c);
  };
  if (r.kind == RequestKind::weighted) {
    for (const auto& [key, w] : r.weights) {
      if (w < 0) throw Error(ErrorCode::domain, "negative weight at vertex " + std::to_string(key.first));
      if (!in_list(key.first, key.second))
        throw Error(ErrorCode::domain, "weight on color outside L(" + std::to_string(key.first) + ")");
    }
    return;
  }
  for (const auto& [v, c] : r.wanted)
    if (!in_list(v, c))
      throw Error(ErrorCode::domain, "requested color " + std::to_string(c) + " not in L(" + std::to_string(v) + ")");
  if (r.kind == RequestKind::widespread && r.wanted.size() != g.order())
    throw Error(ErrorCode::domain, "widespread request must cover every vertex");
}

inline bool is_proper_list_coloring(const Graph& g, const ListAssignment& lists, const Coloring& phi) {
  if (phi.size() != g.order()) return false;
  for (Vertex v : g.vertices()) {
    auto it = phi.find(v);
    if (it == phi.end()) return false;
    const auto& list = lists.at(v);
    if (!std::binary_search(list.begin(), list.end(), it->second)) return false;
  }
  for (auto [u, v] : g.edges())
    if (phi.at(u) == phi.at(v)) return false;
  return true;
}

namespace detail {

// Dense re-indexing of a (graph, lists) pair: vertices in ascending id order,
// colors in ascending value order.
struct DenseInstance {
  std::vector<Vertex> vertex;               // index -> id
  std::vector<Color> color;                 // index -> color
  std::vector<std::vector<int>> adj;        // by index
  std::vector<std::vector<int>> lists;      // color indices, ascending

  DenseInstance(const Graph& g, const ListAssignment& L) {
    vertex = g.vertices();
    std::set<Color> all;
    for (Vertex v : vertex)
      for (Color c : L.at(v)) all.insert(c);
    color.assign(all.begin(), all.end());
    std::map<Vertex, int> vi;
    for (std::size_t i = 0; i < vertex.size(); ++i) vi[vertex[i]] = static_cast<int>(i);
    adj.resize(vertex.size());
    lists.resize(vertex.size());
    for (std::size_t i = 0; i < vertex.size(); ++i) {
      for (Vertex w : g.neighbors(vertex[i])) adj[i].push_back(vi.at(w));
      for (Color c : L.at(vertex[i]))
        lists[i].push_back(static_cast<int>(std::lower_bound(color.begin(), color.end(), c) - color.begin()));
    }
  }

  int n() const { return static_cast<int>(vertex.size()); }
  int num_colors() const { return static_cast<int>(color.size()); }
};

// Bitmask backtracking for up to 32 vertices over up to 64 colors, choosing the
// most constrained vertex first. `lists` is consumed as scratch state.
inline bool small_colorable(int n, const std::uint32_t* adj, std::uint64_t* lists, std::uint32_t open,
                            int* out = nullptr) {
  if (open == 0) return true;
  int best = -1;
  int best_count = 65;
  for (std::uint32_t m = open; m; m &= m - 1) {
    const int v = std::countr_zero(m);
    const int c = std::popcount(lists[v]);
    if (c == 0) return false;
    if (c < best_count) {
      best = v;
      best_count = c;
    }
  }
  const std::uint32_t rest = open & ~(std::uint32_t{1} << best);
  const std::uint32_t touched = adj[best] & rest;
  std::uint64_t saved[32];
  for (std::uint64_t cs = lists[best]; cs; cs &= cs - 1) {
    const std::uint64_t bit = cs & (~cs + 1);
    for (std::uint32_t m = touched; m; m &= m - 1) {
      const int w = std::countr_zero(m);
      saved[w] = lists[w];
      lists[w] &= ~bit;
    }
    if (small_colorable(n, adj, lists, rest, out)) {
      if (out) out[best] = std::countr_zero(bit);
      return true;
    }
    for (std::uint32_t m = touched; m; m &= m - 1) {
      const int w = std::countr_zero(m);
      lists[w] = saved[w];
    }
  }
  return false;
}

// General backtracking with per-vertex blocked-color counters.
class GeneralSolver {
 public:
  explicit GeneralSolver(const DenseInstance& d)
      : d_(d), assigned_(d.n(), -1), blocked_(d.n(), std::vector<int>(d.num_colors(), 0)) {}

  bool solve() { return search(0); }
  const std::vector<int>& assignment() const { return assigned_; }

  // Canonical-order enumeration: vertices by index, colors ascending, with
  // forward checking on later neighbors.
  void enumerate(const std::function<bool(const std::vector<int>&)>& visit) {
    bool stop = false;
    enumerate_from(0, visit, stop);
  }

 private:
  int available(int v) const {
    int count = 0;
    for (int c : d_.lists[v]) count += blocked_[v][c] == 0 ? 1 : 0;
    return count;
  }

  void place(int v, int c, int delta) {
    for (int w : d_.adj[v]) blocked_[w][c] += delta;
  }

  bool search(int placed) {
    if (placed == d_.n()) return true;
    int best = -1, best_count = 1 << 30;
    for (int v = 0; v < d_.n(); ++v) {
      if (assigned_[v] >= 0) continue;
      int c = available(v);
      if (c < best_count) {
        best = v;
        best_count = c;
      }
    }
    if (best_count == 0) return false;
    for (int c : d_.lists[best]) {
      if (blocked_[best][c]) continue;
      assigned_[best] = c;
      place(best, c, +1);
      if (search(placed + 1)) return true;
      place(best, c, -1);
      assigned_[best] = -1;
    }
    return false;
  }

  void enumerate_from(int v, const std::function<bool(const std::vector<int>&)>& visit, bool& stop) {
    if (stop) return;
    if (v == d_.n()) {
      if (!visit(assigned_)) stop = true;
      return;
    }
    for (int c : d_.lists[v]) {
      if (blocked_[v][c]) continue;
      assigned_[v] = c;
      place(v, c, +1);
      bool dead = false;
      for (int w : d_.adj[v])
        if (w > v && available(w) == 0) {
          dead = true;
          break;
        }
      if (!dead) enumerate_from(v + 1, visit, stop);
      place(v, c, -1);
      assigned_[v] = -1;
      if (stop) return;
    }
  }

  const DenseInstance& d_;
  std::vector<int> assigned_;
  std::vector<std::vector<int>> blocked_;
};

inline Coloring to_coloring(const DenseInstance& d, const std::vector<int>& a) {
  Coloring phi;
  for (int i = 0; i < d.n(); ++i) phi[d.vertex[i]] = d.color[a[i]];
  return phi;
}

}  // namespace detail

/// Visits every L-coloring exactly once, in lexicographic order of the color
/// vector read in ascending vertex order. The visitor returns false to stop.
/// Returns the number of colorings visited.
inline std::size_t enumerate_colorings(const Graph& g, const ListAssignment& lists,
                                       const std::function<bool(const Coloring&)>& visit) {
  validate_lists(g, lists);
  detail::DenseInstance d(g, lists);
  detail::GeneralSolver solver(d);
  std::size_t count = 0;
  solver.enumerate([&](const std::vector<int>& a) {
    ++count;
    return visit(detail::to_coloring(d, a));
  });
  return count;
}

inline std::vector<Coloring> all_colorings(const Graph& g, const ListAssignment& lists) {
  std::vector<Coloring> out;
  enumerate_colorings(g, lists, [&](const Coloring& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

/// Some L-coloring, if one exists.
inline std::optional<Coloring> find_coloring(const Graph& g, const ListAssignment& lists) {
  validate_lists(g, lists);
  detail::DenseInstance d(g, lists);
  if (d.n() <= 32 && d.num_colors() <= 64) {
    std::uint32_t adj[32] = {};
    std::uint64_t masks[32] = {};
    int out[32] = {};
    for (int v = 0; v < d.n(); ++v) {
      for (int w : d.adj[v]) adj[v] |= std::uint32_t{1} << w;
      for (int c : d.lists[v]) masks[v] |= std::uint64_t{1} << c;
    }
    const std::uint32_t all = d.n() == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << d.n()) - 1;
    if (!detail::small_colorable(d.n(), adj, masks, all, out)) return std::nullopt;
    return detail::to_coloring(d, std::vector<int>(out, out + d.n()));
  }
  detail::GeneralSolver solver(d);
  if (!solver.solve()) return std::nullopt;
  return detail::to_coloring(d, solver.assignment());
}

inline bool is_colorable(const Graph& g, const ListAssignment& lists) { return find_coloring(g, lists).has_value(); }

/// Fraction of the request met by `phi`: matched/|dom(r)| for plain and
/// widespread requests, sum of w(v, phi(v)) over w(G,L) for weighted ones.
inline Rational satisfaction(const Coloring& phi, const Request& r) {
  if (r.kind == RequestKind::weighted) {
    const Rational total = r.total_weight();
    if (total == 0) throw Error(ErrorCode::undefined_ratio, "w(G,L) = 0");
    Rational got = 0;
    for (const auto& [key, w] : r.weights) {
      auto it = phi.find(key.first);
      if (it != phi.end() && it->second == key.second) got += w;
    }
    return got / total;
  }
  if (r.wanted.empty()) throw Error(ErrorCode::undefined_ratio, "empty request domain");
  long matched = 0;
  for (const auto& [v, c] : r.wanted) {
    auto it = phi.find(v);
    matched += (it != phi.end() && it->second == c) ? 1 : 0;
  }
  return Rational(matched, static_cast<long>(r.wanted.size()));
}

struct SatisfactionOptimum {
  Coloring best;
  Rational score;
};

/// Exact maximum of `satisfaction` over all L-colorings, by branch and bound in
/// ascending vertex order. The bound adds, for every unplaced vertex, its
/// heaviest list weight. Ties keep the first optimum in canonical order.
inline SatisfactionOptimum max_satisfaction(const Graph& g, const ListAssignment& lists, const Request& r) {
  validate_lists(g, lists);
  validate_request(g, lists, r);
  if (r.kind == RequestKind::weighted ? r.total_weight() == 0 : r.wanted.empty())
    throw Error(ErrorCode::undefined_ratio, r.kind == RequestKind::weighted ? "w(G,L) = 0" : "empty request domain");

  detail::DenseInstance d(g, lists);
  const int n = d.n();
  // Integer weights over a common denominator keep the search in mpz.
  Integer lcm = 1;
  for (const auto& [key, w] : r.weights) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), w.get_den().get_mpz_t());
  std::vector<std::vector<Integer>> weight(n);
  for (int v = 0; v < n; ++v) {
    weight[v].assign(d.lists[v].size(), 0);
    for (std::size_t j = 0; j < d.lists[v].size(); ++j) {
      const Vertex id = d.vertex[v];
      const Color c = d.color[d.lists[v][j]];
      if (r.kind == RequestKind::weighted) {
        auto it = r.weights.find({id, c});
        if (it != r.weights.end()) weight[v][j] = Integer(it->second * lcm);
      } else {
        auto it = r.wanted.find(id);
        if (it != r.wanted.end() && it->second == c) weight[v][j] = 1;
      }
    }
  }
  std::vector<Integer> suffix(n + 1, 0);
  for (int v = n - 1; v >= 0; --v) {
    Integer best = 0;
    for (const auto& w : weight[v]) best = std::max(best, w);
    suffix[v] = suffix[v + 1] + best;
  }

  std::vector<int> assigned(n, -1), best_assignment;
  std::vector<std::vector<int>> blocked(n, std::vector<int>(d.num_colors(), 0));
  Integer best_score = -1;
  std::function<void(int, const Integer&)> go = [&](int v, const Integer& score) {
    if (score + suffix[v] <= best_score) return;
    if (v == n) {
      best_score = score;
      best_assignment = assigned;
      return;
    }
    for (std::size_t j = 0; j < d.lists[v].size(); ++j) {
      const int c = d.lists[v][j];
      if (blocked[v][c]) continue;
      assigned[v] = c;
      for (int w : d.adj[v]) ++blocked[w][c];
      bool dead = false;
      for (int w : d.adj[v]) {
        if (w < v) continue;
        bool any = false;
        for (int cc : d.lists[w])
          if (!blocked[w][cc]) {
            any = true;
            break;
          }
        if (!any) {
          dead = true;
          break;
        }
      }
      if (!dead) go(v + 1, score + weight[v][j]);
      for (int w : d.adj[v]) --blocked[w][c];
      assigned[v] = -1;
    }
  };
  go(0, 0);
  if (best_score < 0) throw Error(ErrorCode::not_colorable, "graph is not L-colorable");

  SatisfactionOptimum out;
  out.best = detail::to_coloring(d, best_assignment);
  out.score = satisfaction(out.best, r);
  return out;
}

struct EpsilonBound {
  Rational p;             // k^-b
  Rational epsilon;       // p^(k-1)
  Rational weak_epsilon;  // epsilon / b
};

inline EpsilonBound epsilon_bound(int k, int b) {
  if (k < 3 || b < 1) throw Error(ErrorCode::domain, "epsilon_bound needs k >= 3 and b >= 1");
  EpsilonBound e;
  e.p = power(Rational(1, k), static_cast<unsigned long>(b));
  e.epsilon = power(e.p, static_cast<unsigned long>(k - 1));
  e.weak_epsilon = e.epsilon / b;
  return e;
}

// ---------------------------------------------------------------------------
// "flexlists v1":  L <v>: <colors>   R <v> <color>   W <v> <color> <num>/<den>

struct ListsFile {
  ListAssignment lists;
  std::optional<Request> request;
};

inline ListsFile parse_flexlists(std::istream& in) {
  ListsFile out;
  Request req;
  bool plain = false, weighted = false;
  for (const auto& [number, line] : detail::content_lines(in, "flexlists v1")) {
    const std::string where = "line " + std::to_string(number);
    if (line.rfind("L ", 0) == 0) {
      auto colon = line.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::parse, where + ": expected 'L <vertex>: <colors>'");
      Vertex v = detail::parse_int(detail::strip_comment(line.substr(2, colon - 2)), where);
      if (out.lists.count(v)) throw Error(ErrorCode::parse, where + ": second list for vertex " + std::to_string(v));
      std::vector<Color> colors;
      for (const auto& tok : detail::split_ws(line.substr(colon + 1))) colors.push_back(detail::parse_int(tok, where));
      std::sort(colors.begin(), colors.end());
      if (std::adjacent_find(colors.begin(), colors.end()) != colors.end())
        throw Error(ErrorCode::parse, where + ": repeated color");
      out.lists[v] = colors;
      continue;
    }
    auto tok = detail::split_ws(line);
    if (tok[0] == "R" && tok.size() == 3) {
      plain = true;
      Vertex v = detail::parse_int(tok[1], where);
      if (!req.wanted.emplace(v, detail::parse_int(tok[2], where)).second)
        throw Error(ErrorCode::parse, where + ": second request at vertex " + std::to_string(v));
    } else if (tok[0] == "W" && tok.size() == 4) {
      weighted = true;
      Vertex v = detail::parse_int(tok[1], where);
      Color c = detail::parse_int(tok[2], where);
      if (!req.weights.emplace(std::make_pair(v, c), parse_rational(tok[3])).second)
        throw Error(ErrorCode::parse, where + ": repeated weight");
    } else {
      throw Error(ErrorCode::parse, where + ": unrecognized line '" + line + "'");
    }
  }
  if (plain && weighted) throw Error(ErrorCode::parse, "file mixes R and W lines");
  if (plain || weighted) {
    req.kind = weighted ? RequestKind::weighted : RequestKind::plain;
    out.request = req;
  }
  return out;
}

inline ListsFile parse_flexlists(const std::string& text) {
  std::istringstream in(text);
  return parse_flexlists(in);
}

inline ListsFile load_flexlists(const std::string& path) { return parse_flexlists(detail::read_file(path)); }

/// A plain request covering every vertex of `g` is reclassified as widespread.
inline Request classify_request(const Graph& g, Request r) {
  if (r.kind == RequestKind::plain && r.wanted.size() == g.order()) {
    bool total = true;
    for (Vertex v : g.vertices()) total = total && r.wanted.count(v);
    if (total) r.kind = RequestKind::widespread;
  }
  return r;
}

inline std::string serialize_flexlists(const ListAssignment& lists, const Request* r = nullptr) {
  std::ostringstream out;
  out << "flexlists v1\n";
  for (const auto& [v, list] : lists) {
    out << "L " << v << ":";
    for (Color c : list) out << ' ' << c;
    out << '\n';
  }
  if (r) {
    if (r->kind == RequestKind::weighted) {
      for (const auto& [key, w] : r->weights) out << "W " << key.first << ' ' << key.second << ' ' << to_string(w) << '\n';
    } else {
      for (const auto& [v, c] : r->wanted) out << "R " << v << ' ' << c << '\n';
    }
  }
  return out.str();
}

}  // namespace flexcolor
