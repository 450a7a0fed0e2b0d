#pragma once

// Peeling a graph into reducible configurations, and checking the result.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flexcolor/graph.hpp"
#include "flexcolor/graph_io.hpp"
#include "flexcolor/library.hpp"
#include "flexcolor/reducibility.hpp"

namespace flexcolor {

using Match = std::map<Vertex, Vertex>;  // pattern vertex -> host vertex

/// Where face predicates are evaluated.
enum class FaceMode {
  current,  // the embedding inherited by the current peeled graph
  original  // the embedding of the input graph only
};

namespace detail {

struct FaceIndex {
  std::set<std::array<Vertex, 3>> triangles;  // vertex sets of 3-faces
  std::set<Vertex> on_triangle;

  FaceIndex(const Graph& g, const RotationSystem& rotation) {
    for (const auto& f : faces(g, rotation)) {
      if (f.length() != 3) continue;
      auto c = f.corners();
      std::array<Vertex, 3> t{c[0], c[1], c[2]};
      std::sort(t.begin(), t.end());
      if (t[0] == t[1] || t[1] == t[2]) continue;
      triangles.insert(t);
      on_triangle.insert(t.begin(), t.end());
    }
  }

  bool admits(const FacePredicates& p, const Match& m) const {
    for (const auto& tri : p.triangle_faces) {
      std::array<Vertex, 3> t{m.at(tri[0]), m.at(tri[1]), m.at(tri[2])};
      std::sort(t.begin(), t.end());
      if (!triangles.count(t)) return false;
    }
    for (Vertex v : p.on_triangle_face)
      if (!on_triangle.count(m.at(v))) return false;
    return true;
  }
};

}  // namespace detail

/// Every match of the template in `g`: injective, edge-preserving, with the
/// core degree bounds met in `g` and face predicates met in the embedding
/// inherited by `g`.
inline std::vector<Match> match_configuration(const Graph& g, const Template& t,
                                              const RotationSystem* embedding = nullptr,
                                              std::size_t limit = static_cast<std::size_t>(-1)) {
  std::optional<detail::FaceIndex> index;
  if (!t.faces.empty()) {
    if (!embedding) throw Error(ErrorCode::embedding_incomplete, "template " + t.name + " needs an embedding");
    index.emplace(g, embedding->restricted_to(g));
  }
  std::vector<Match> out;
  for_each_subgraph_match(
      g, t.config.pattern,
      [&](const Match& m) {
        if (index && !index->admits(t.faces, m)) return true;
        out.push_back(m);
        return out.size() < limit;
      },
      [&](Vertex p, Vertex h) {
        auto it = t.degree.find(p);
        return it == t.degree.end() || it->second.admits(g.degree(h));
      });
  return out;
}

/// The configuration induced in `g` by a match, relabeled to pattern ids:
/// edges are those of g among the images, core degrees are degrees in g.
inline Configuration instantiate(const Graph& g, const Template& t, const Match& m) {
  Configuration c;
  c.name = t.name;
  for (const auto& [p, h] : m) c.pattern.add_vertex(p);
  for (const auto& [p, hp] : m)
    for (const auto& [q, hq] : m)
      if (p < q && g.has_edge(hp, hq)) c.pattern.add_edge(p, q);
  c.boundary = t.config.boundary;
  for (const auto& [p, h] : m)
    if (!c.boundary.count(p)) c.host_degree[p] = g.degree(h);
  c.declared_fix = t.config.declared_fix;
  return c;
}

struct ResolutionStep {
  std::string template_name;
  Match map;
  std::vector<Vertex> peeled;    // Q_i
  std::vector<Vertex> boundary;  // image of B_i
  std::vector<Vertex> fix;       // image of Fix(H_i)
};

struct Resolution {
  int k = 0;
  int b = 0;
  std::string family;
  std::string library;
  ReducibilityMode kind = ReducibilityMode::strong;
  std::vector<ResolutionStep> steps;
  std::vector<Vertex> residue;      // G_M; empty when peeling exhausts the graph
  std::vector<Vertex> residue_fix;

  /// max |Q_i| and |V(G_M)|.
  int effective_b() const {
    std::size_t b_eff = residue.size();
    for (const auto& s : steps) b_eff = std::max(b_eff, s.peeled.size());
    return static_cast<int>(b_eff);
  }
};

struct BuildOptions {
  int b_cap = 16;
  FaceMode face_mode = FaceMode::current;
};

struct BuildResult {
  std::optional<Resolution> resolution;
  Graph stuck;                          // the graph in which nothing matched
  std::vector<ResolutionStep> partial;  // steps taken before getting stuck

  bool ok() const { return resolution.has_value(); }
};

namespace detail {

inline std::string instance_key(const Template& t, const Configuration& c) {
  std::ostringstream key;
  key << t.name << '|';
  for (const auto& [v, d] : c.host_degree) key << v << ':' << d << ',';
  key << '|';
  for (auto [u, v] : c.pattern.edges()) key << u << '-' << v << ',';
  return key.str();
}

/// Reducibility verdicts of instantiated configurations, keyed by template
/// and induced structure.
class InstanceCache {
 public:
  InstanceCache(int k, ForbiddenFamily family, ReducibilityMode kind) : k_(k), family_(std::move(family)), kind_(kind) {}

  /// The fix set (pattern ids) when the instance qualifies.
  std::optional<std::set<Vertex>> qualifies(const Template& t, const Configuration& c) {
    const auto key = instance_key(t, c);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::optional<std::set<Vertex>> verdict;
    try {
      auto rep = check_reducible(c, k_, family_, kind_);
      if (kind_ == ReducibilityMode::strong ? rep.strong : rep.weak) verdict = rep.fix_set;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::infeasible_configuration) throw;
    }
    cache_.emplace(key, verdict);
    return verdict;
  }

 private:
  int k_;
  ForbiddenFamily family_;
  ReducibilityMode kind_;
  std::map<std::string, std::optional<std::set<Vertex>>> cache_;
};

}  // namespace detail

/// Greedy peeling: repeatedly take the first template, in library order, with
/// a qualifying match (matches in deterministic order), and delete its core.
/// The graph must not contain a member of the library's family.
inline BuildResult build_resolution(const Graph& graph, const Library& lib, const RotationSystem* embedding = nullptr,
                                    const BuildOptions& options = {}) {
  const auto family = resolve_family(lib.family);
  if (auto member = family.find_member(graph))
    throw Error(ErrorCode::family_violation, "graph contains " + *member + " from family " + family.name);

  std::optional<detail::FaceIndex> original;
  if (options.face_mode == FaceMode::original) {
    bool needs = false;
    for (const auto& t : lib.templates) needs = needs || !t.faces.empty();
    if (needs) {
      if (!embedding) throw Error(ErrorCode::embedding_incomplete, "library " + lib.name + " needs an embedding");
      original.emplace(graph, *embedding);
    }
  }

  detail::InstanceCache cache(lib.k, family, lib.kind);
  BuildResult out;
  Graph current = graph;
  std::vector<ResolutionStep> steps;
  while (!current.empty()) {
    std::optional<ResolutionStep> found;
    for (const auto& t : lib.templates) {
      std::optional<detail::FaceIndex> live;
      if (!t.faces.empty() && options.face_mode == FaceMode::current) {
        if (!embedding) throw Error(ErrorCode::embedding_incomplete, "template " + t.name + " needs an embedding");
        live.emplace(current, embedding->restricted_to(current));
      }
      const auto core = t.config.core();
      if (static_cast<int>(core.size()) > options.b_cap) continue;
      for_each_subgraph_match(
          current, t.config.pattern,
          [&](const Match& m) {
            if (live && !live->admits(t.faces, m)) return true;
            if (original && !original->admits(t.faces, m)) return true;
            auto c = instantiate(current, t, m);
            auto fix = cache.qualifies(t, c);
            if (!fix || fix->empty()) return true;
            ResolutionStep step;
            step.template_name = t.name;
            step.map = m;
            for (Vertex p : core) step.peeled.push_back(m.at(p));
            for (Vertex p : t.config.boundary) step.boundary.push_back(m.at(p));
            for (Vertex p : *fix) step.fix.push_back(m.at(p));
            std::sort(step.peeled.begin(), step.peeled.end());
            std::sort(step.boundary.begin(), step.boundary.end());
            std::sort(step.fix.begin(), step.fix.end());
            found = std::move(step);
            return false;
          },
          [&](Vertex p, Vertex h) {
            auto it = t.degree.find(p);
            return it == t.degree.end() || it->second.admits(current.degree(h));
          });
      if (found) break;
    }
    if (!found) {
      out.stuck = current;
      out.partial = std::move(steps);
      return out;
    }
    current = current.without(found->peeled);
    steps.push_back(std::move(*found));
  }
  Resolution r;
  r.k = lib.k;
  r.family = family.name;
  r.library = lib.name;
  r.kind = lib.kind;
  r.steps = std::move(steps);
  r.b = r.effective_b();
  out.resolution = std::move(r);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
  std::string clause;  // partition, map, degree, reducible, size, fix, residue, header
  int step = -1;       // -1 for whole-certificate issues
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool valid() const { return issues.empty(); }
  bool has(const std::string& clause) const {
    return std::any_of(issues.begin(), issues.end(), [&](const ValidationIssue& i) { return i.clause == clause; });
  }
};

/// Re-checks every clause of the certificate against `graph`, independently of
/// the builder. Violations are collected, never thrown.
inline ValidationReport validate_resolution(const Graph& graph, const Resolution& r, const Library& lib) {
  ValidationReport rep;
  auto issue = [&](std::string clause, int step, std::string what) {
    rep.issues.push_back({std::move(clause), step, std::move(what)});
  };
  ForbiddenFamily family;
  try {
    family = resolve_family(r.family);
  } catch (const Error& e) {
    issue("header", -1, e.what());
    return rep;
  }
  if (r.k != lib.k) issue("header", -1, "k differs from the library's k");
  if (r.kind != lib.kind) issue("header", -1, "kind differs from the library's kind");
  if (family.contains_member(graph)) issue("header", -1, "graph contains a member of the family");

  std::set<Vertex> seen;
  Graph current = graph;
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& s = r.steps[i];
    const int at = static_cast<int>(i);
    const Template* t = lib.find(s.template_name);
    if (!t) {
      issue("map", at, "unknown template " + s.template_name);
      current = current.without(s.peeled);
      continue;
    }
    // Partition.
    for (Vertex v : s.peeled) {
      if (!graph.has_vertex(v)) issue("partition", at, "vertex " + std::to_string(v) + " not in the graph");
      else if (!seen.insert(v).second) issue("partition", at, "vertex " + std::to_string(v) + " peeled twice");
    }
    // Map: injective, onto current vertices, edge-preserving, roles consistent.
    std::set<Vertex> images;
    bool map_ok = s.map.size() == t->config.pattern.order();
    for (Vertex p : t->config.pattern.vertices()) {
      auto it = s.map.find(p);
      if (it == s.map.end()) {
        map_ok = false;
        continue;
      }
      if (!current.has_vertex(it->second)) map_ok = false;
      if (!images.insert(it->second).second) map_ok = false;
    }
    if (map_ok)
      for (auto [p, q] : t->config.pattern.edges())
        if (!current.has_edge(s.map.at(p), s.map.at(q))) map_ok = false;
    std::vector<Vertex> core_image, boundary_image;
    if (map_ok) {
      for (Vertex p : t->config.core()) core_image.push_back(s.map.at(p));
      for (Vertex p : t->config.boundary) boundary_image.push_back(s.map.at(p));
      std::sort(core_image.begin(), core_image.end());
      std::sort(boundary_image.begin(), boundary_image.end());
      if (core_image != s.peeled || boundary_image != s.boundary) map_ok = false;
    }
    if (!map_ok) issue("map", at, "map is not an embedding of " + t->name + " with Q and B as its core and boundary images");
    // Degrees: every peeled vertex is a core image meeting its bound in G_{i-1}.
    std::map<Vertex, Vertex> preimage;
    for (const auto& [p, h] : s.map) preimage[h] = p;
    for (Vertex v : s.peeled) {
      auto it = preimage.find(v);
      if (it == preimage.end() || t->config.boundary.count(it->second) || !t->degree.count(it->second)) {
        issue("degree", at, "peeled vertex " + std::to_string(v) + " carries no core degree constraint");
        continue;
      }
      if (!current.has_vertex(v) || !t->degree.at(it->second).admits(current.degree(v)))
        issue("degree", at, "vertex " + std::to_string(v) + " violates " + detail::to_string(t->degree.at(it->second)));
    }
    for (Vertex v : s.boundary)
      if (std::find(s.peeled.begin(), s.peeled.end(), v) != s.peeled.end())
        issue("degree", at, "vertex " + std::to_string(v) + " is both peeled and boundary");
    // Reducibility of the induced configuration.
    std::set<Vertex> fix_computed;
    if (map_ok) {
      auto c = instantiate(current, *t, s.map);
      try {
        auto check = check_reducible(c, r.k, family, r.kind);
        const bool ok = r.kind == ReducibilityMode::weak ? check.weak : check.strong;
        if (!ok) issue("reducible", at, "instantiated " + t->name + " is not reducible");
        for (Vertex p : check.fix_set) fix_computed.insert(s.map.at(p));
      } catch (const Error& e) {
        issue("reducible", at, e.what());
      }
    }
    // Size.
    if (static_cast<int>(s.peeled.size()) > r.b) issue("size", at, "|Q| exceeds b");
    // Fix.
    if (s.fix.empty()) issue("fix", at, "empty fix set");
    for (Vertex v : s.fix) {
      if (std::find(s.peeled.begin(), s.peeled.end(), v) == s.peeled.end())
        issue("fix", at, "fix vertex " + std::to_string(v) + " not peeled");
      else if (map_ok && !fix_computed.count(v))
        issue("fix", at, "vertex " + std::to_string(v) + " fails (FIX)");
    }
    if (r.kind == ReducibilityMode::strong && s.fix != s.peeled) issue("fix", at, "strong step must fix all of Q");
    current = current.without(s.peeled);
  }
  // Residue: the rest of the graph, boundary-free and reducible.
  std::vector<Vertex> rest = current.vertices();
  std::vector<Vertex> residue = r.residue;
  std::sort(residue.begin(), residue.end());
  if (rest != residue) issue("partition", -1, "peeled sets and residue do not partition the vertex set");
  if (static_cast<int>(residue.size()) > r.b) issue("size", -1, "residue larger than b");
  if (!residue.empty() && rest == residue) {
    Configuration c;
    c.name = "residue";
    c.pattern = current;
    for (Vertex v : rest) c.host_degree[v] = current.degree(v);
    try {
      auto check = check_reducible(c, r.k, family, r.kind);
      if (!(r.kind == ReducibilityMode::weak ? check.weak : check.strong)) issue("residue", -1, "residue is not reducible");
      if (r.residue_fix.empty()) issue("fix", -1, "residue has an empty fix set");
      for (Vertex v : r.residue_fix)
        if (!check.fix_set.count(v)) issue("fix", -1, "residue vertex " + std::to_string(v) + " fails (FIX)");
    } catch (const Error& e) {
      issue("residue", -1, e.what());
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// "flexres v1"
//
//   flexres v1
//   k <n>
//   b <n>
//   family <name>
//   library <name>
//   kind strong|weak
//   step <template> map <p>:<h> ... Q <ids> B <ids> fix <ids>
//   residue <ids> [fix <ids>]

inline std::string serialize_flexres(const Resolution& r) {
  std::ostringstream out;
  out << "flexres v1\n";
  out << "k " << r.k << "\nb " << r.b << "\nfamily " << r.family << "\nlibrary " << r.library << "\nkind "
      << to_string(r.kind) << '\n';
  auto list = [&](const char* tag, const std::vector<Vertex>& vs) {
    out << ' ' << tag;
    for (Vertex v : vs) out << ' ' << v;
  };
  for (const auto& s : r.steps) {
    out << "step " << s.template_name << " map";
    for (const auto& [p, h] : s.map) out << ' ' << p << ':' << h;
    list("Q", s.peeled);
    list("B", s.boundary);
    list("fix", s.fix);
    out << '\n';
  }
  out << "residue";
  for (Vertex v : r.residue) out << ' ' << v;
  if (!r.residue_fix.empty()) list("fix", r.residue_fix);
  out << '\n';
  return out.str();
}

inline Resolution parse_flexres(std::istream& in) {
  Resolution r;
  bool residue_seen = false;
  std::set<std::string> header;
  for (const auto& [number, line] : detail::content_lines(in, "flexres v1")) {
    const std::string where = "line " + std::to_string(number);
    auto tok = detail::split_ws(line);
    if (residue_seen) throw Error(ErrorCode::corrupt_certificate, where + ": content after the residue line");
    const std::string head = tok[0];
    if (head == "k" || head == "b" || head == "family" || head == "library" || head == "kind") {
      if (tok.size() != 2 || !header.insert(head).second)
        throw Error(ErrorCode::corrupt_certificate, where + ": malformed or repeated header '" + head + "'");
      try {
        if (head == "k") r.k = detail::parse_int(tok[1], where);
        if (head == "b") r.b = detail::parse_int(tok[1], where);
      } catch (const Error& e) {
        throw Error(ErrorCode::corrupt_certificate, e.what());
      }
      if (head == "family") r.family = tok[1];
      if (head == "library") r.library = tok[1];
      if (head == "kind") {
        if (tok[1] != "strong" && tok[1] != "weak") throw Error(ErrorCode::corrupt_certificate, where + ": bad kind");
        r.kind = tok[1] == "weak" ? ReducibilityMode::weak : ReducibilityMode::strong;
      }
      continue;
    }
    // Sections of a step or residue line are introduced by keywords.
    std::map<std::string, std::vector<std::string>> section;
    std::string current;
    std::size_t start = head == "step" ? 2 : 1;
    if (head != "step" && head != "residue") throw Error(ErrorCode::corrupt_certificate, where + ": unrecognized line");
    if (head == "step" && tok.size() < 2) throw Error(ErrorCode::corrupt_certificate, where + ": step without template");
    current = head == "step" ? "" : "residue";
    for (std::size_t i = start; i < tok.size(); ++i) {
      if (tok[i] == "map" || tok[i] == "Q" || tok[i] == "B" || tok[i] == "fix") {
        current = tok[i];
        if (section.count(current)) throw Error(ErrorCode::corrupt_certificate, where + ": repeated " + current);
        section[current];
        continue;
      }
      if (current.empty()) throw Error(ErrorCode::corrupt_certificate, where + ": stray token '" + tok[i] + "'");
      section[current].push_back(tok[i]);
    }
    auto ids = [&](const std::string& key) {
      std::vector<Vertex> out;
      for (const auto& t : section[key]) {
        try {
          out.push_back(detail::parse_int(t, where));
        } catch (const Error& e) {
          throw Error(ErrorCode::corrupt_certificate, e.what());
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    if (head == "residue") {
      residue_seen = true;
      r.residue = ids("residue");
      r.residue_fix = ids("fix");
      continue;
    }
    for (const char* key : {"map", "Q", "B", "fix"})
      if (!section.count(key)) throw Error(ErrorCode::corrupt_certificate, where + ": step lacks '" + key + "'");
    ResolutionStep s;
    s.template_name = tok[1];
    for (const auto& pair : section["map"]) {
      auto colon = pair.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::corrupt_certificate, where + ": bad map pair '" + pair + "'");
      try {
        Vertex p = detail::parse_int(pair.substr(0, colon), where);
        Vertex h = detail::parse_int(pair.substr(colon + 1), where);
        if (!s.map.emplace(p, h).second) throw Error(ErrorCode::corrupt_certificate, where + ": repeated map key");
      } catch (const Error& e) {
        throw Error(ErrorCode::corrupt_certificate, e.what());
      }
    }
    s.peeled = ids("Q");
    s.boundary = ids("B");
    s.fix = ids("fix");
    r.steps.push_back(std::move(s));
  }
  for (const char* key : {"k", "b", "family", "library", "kind"})
    if (!header.count(key)) throw Error(ErrorCode::corrupt_certificate, std::string("missing header '") + key + "'");
  if (!residue_seen) throw Error(ErrorCode::corrupt_certificate, "missing residue line");
  return r;
}

inline Resolution parse_flexres(const std::string& text) {
  std::istringstream in(text);
  try {
    return parse_flexres(in);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw Error(ErrorCode::corrupt_certificate, e.what());
    throw;
  }
}

inline Resolution load_flexres(const std::string& path) { return parse_flexres(detail::read_file(path)); }

}  // namespace flexcolor
