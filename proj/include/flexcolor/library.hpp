#pragma once

// Configuration libraries: ordered templates matched during peeling.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flexcolor/corpus.hpp"
#include "flexcolor/reducibility.hpp"

namespace flexcolor {

/// Embedding constraints on matched vertices.
struct FacePredicates {
  std::vector<std::array<Vertex, 3>> triangle_faces;  // these pattern triangles bound faces
  std::set<Vertex> on_triangle_face;                  // these pattern vertices lie on a 3-face

  bool empty() const { return triangle_faces.empty() && on_triangle_face.empty(); }
};

struct Template {
  std::string name;
  Configuration config;                           // degrees: the case checked when the library loads
  std::map<Vertex, detail::DegreeBound> degree;   // constraint on each core vertex when matching
  FacePredicates faces;
};

struct Library {
  std::string name;
  int k = 0;
  std::string family;
  ReducibilityMode kind = ReducibilityMode::strong;
  std::vector<Template> templates;

  const Template* find(const std::string& template_name) const {
    for (const auto& t : templates)
      if (t.name == template_name) return &t;
    return nullptr;
  }
};

inline const char* to_string(ReducibilityMode m) { return m == ReducibilityMode::weak ? "weak" : "strong"; }

/// Template whose degree constraints are exactly the configuration's degrees.
inline Template exact_template(std::string name, Configuration c) {
  Template t;
  t.name = std::move(name);
  for (const auto& [v, d] : c.host_degree) t.degree[v] = {detail::DegreeOp::eq, d};
  t.config = std::move(c);
  return t;
}

/// A vertex of degree at most k-2.
inline Template low_degree_template(std::string name, int k) {
  Template t;
  t.name = std::move(name);
  t.config = single_vertex(k);
  t.degree[0] = {detail::DegreeOp::le, k - 2};
  return t;
}

inline std::vector<std::string> builtin_library_names() {
  return {"diamond", "c4-near-triangles", "c4c5c6", "house-k23", "low-degree-k3", "low-degree-k4", "low-degree-k5"};
}

/// Libraries by the theorem they serve.
inline std::string library_for_theorem(const std::string& name) {
  if (name == "thm2") return "diamond";
  if (name == "thm3") return "c4-near-triangles";
  if (name == "thm4") return "c4c5c6";
  if (name == "thm5") return "house-k23";
  return name;
}

inline Library builtin_library(const std::string& name, int d_max = 8) {
  Library lib;
  lib.name = name;
  if (name == "diamond") {
    lib.k = 5;
    lib.family = "diamond";
    lib.templates = {low_degree_template("rc1", 5), exact_template("rc2", heavy_triangle(5))};
  } else if (name == "c4-near-triangles") {
    lib.k = 4;
    lib.family = "c4-near-triangles";
    lib.templates = {low_degree_template("rc1", 4), exact_template("rc2", cubic_path())};
    for (int d = 3; d <= d_max; ++d)
      for (auto variant : star_triangle_variants()) {
        if (variant == StarTriangle::on_two_in_a && d < 4) continue;
        auto c = star_near_triangle(d, variant);
        lib.templates.push_back(exact_template("rc3-d" + std::to_string(d) + "-" + to_string(variant), c));
      }
  } else if (name == "c4c5c6") {
    lib.k = 4;
    lib.family = "c4c5c6";
    lib.templates = {low_degree_template("rc1", 4), exact_template("rc2", heavy_triangle(4)),
                     exact_template("rc3", bowtie()), exact_template("rc4", linked_triangles())};
  } else if (name == "house-k23") {
    lib.k = 5;
    lib.family = "house-k23";
    lib.kind = ReducibilityMode::weak;
    lib.templates = {low_degree_template("rc1", 5), exact_template("rc2", four_cycle("c4-44", {{1, 4}, {2, 4}})),
                     exact_template("rc3", four_cycle("c4-454", {{1, 4}, {2, 5}, {3, 4}})),
                     exact_template("rc4", four_cycle("c4-4555", {{1, 4}, {2, 5}, {3, 5}, {4, 5}}, std::set<Vertex>{2, 3, 4})),
                     exact_template("rc5", quartic_path())};
  } else if (name == "low-degree-k3" || name == "low-degree-k4" || name == "low-degree-k5") {
    lib.k = name.back() - '0';
    lib.family = "none";
    lib.templates = {low_degree_template("rc1", lib.k)};
  } else {
    throw Error(ErrorCode::unknown_name, "no builtin library '" + name + "'");
  }
  return lib;
}

/// Checks every template at the library's k and family; returns the reports.
inline std::vector<ReducibilityReport> verify_library(const Library& lib) {
  const auto family = resolve_family(lib.family);
  std::vector<ReducibilityReport> out;
  for (const auto& t : lib.templates) {
    auto rep = check_reducible(t.config, lib.k, family, lib.kind);
    const bool ok = lib.kind == ReducibilityMode::weak ? rep.weak : rep.strong;
    if (!ok)
      throw Error(ErrorCode::infeasible_configuration,
                  "template " + t.name + " of library " + lib.name + " is not " + to_string(lib.kind) + "ly reducible");
    out.push_back(std::move(rep));
  }
  return out;
}

// ---------------------------------------------------------------------------
// "flexlib v1": header lines, then template blocks in configuration syntax
// closed by `end`. Degree bounds may be deg=, deg<= or deg>=; a template is
// checked with the bound's value as the host degree.
//
//   flexlib v1
//   name <name>
//   k <n>
//   family <builtin name or path>
//   kind strong|weak
//   template <name>
//   core <id> deg<=<n>
//   boundary <id>
//   edge <u> <v>
//   face <a> <b> <c>
//   on-triangle-face <id>
//   end

inline Library parse_flexlib(std::istream& in) {
  Library lib;
  const auto lines = detail::content_lines(in, "flexlib v1");
  std::size_t i = 0;
  auto where = [&](std::size_t at) { return "line " + std::to_string(lines[at].first); };
  for (; i < lines.size(); ++i) {
    const auto tok = detail::split_ws(lines[i].second);
    if (tok[0] == "template") break;
    if (tok.size() != 2) throw Error(ErrorCode::parse, where(i) + ": malformed header line");
    if (tok[0] == "name") {
      lib.name = tok[1];
    } else if (tok[0] == "k") {
      lib.k = detail::parse_int(tok[1], where(i));
    } else if (tok[0] == "family") {
      lib.family = tok[1];
    } else if (tok[0] == "kind") {
      if (tok[1] != "strong" && tok[1] != "weak") throw Error(ErrorCode::parse, where(i) + ": kind must be strong or weak");
      lib.kind = tok[1] == "weak" ? ReducibilityMode::weak : ReducibilityMode::strong;
    } else {
      throw Error(ErrorCode::parse, where(i) + ": unrecognized header line");
    }
  }
  if (lib.k < 1) throw Error(ErrorCode::parse, "library needs a positive k");
  if (lib.family.empty()) lib.family = "none";
  while (i < lines.size()) {
    const auto head = detail::split_ws(lines[i].second);
    if (head[0] != "template" || head.size() != 2) throw Error(ErrorCode::parse, where(i) + ": expected 'template <name>'");
    Template t;
    t.name = head[1];
    std::vector<std::pair<int, std::string>> body;
    ++i;
    for (; i < lines.size() && lines[i].second != "end"; ++i) body.push_back(lines[i]);
    if (i == lines.size()) throw Error(ErrorCode::parse, "template " + t.name + " is missing 'end'");
    ++i;
    auto parsed = detail::parse_config_body(body, [&](const std::vector<std::string>& tok, const std::string& at) {
      if (tok[0] == "face" && tok.size() == 4) {
        t.faces.triangle_faces.push_back({detail::parse_int(tok[1], at), detail::parse_int(tok[2], at),
                                          detail::parse_int(tok[3], at)});
        return true;
      }
      if (tok[0] == "on-triangle-face" && tok.size() == 2) {
        t.faces.on_triangle_face.insert(detail::parse_int(tok[1], at));
        return true;
      }
      return false;
    });
    t.config.name = t.name;
    t.config.pattern = parsed.pattern;
    t.config.boundary = parsed.boundary;
    t.config.declared_fix = parsed.fix;
    t.degree = parsed.degree;
    for (const auto& [v, b] : parsed.degree) t.config.host_degree[v] = b.value;
    for (const auto& tri : t.faces.triangle_faces)
      for (std::size_t a = 0; a < 3; ++a)
        if (!t.config.pattern.has_edge(tri[a], tri[(a + 1) % 3]))
          throw Error(ErrorCode::parse, "face predicate of " + t.name + " is not a drawn triangle");
    for (Vertex v : t.faces.on_triangle_face)
      if (!t.config.pattern.has_vertex(v)) throw Error(ErrorCode::parse, "face predicate of " + t.name + " names an unknown vertex");
    try {
      validate_configuration(t.config);
    } catch (const Error& e) {
      throw Error(ErrorCode::parse, "template " + t.name + ": " + e.what());
    }
    lib.templates.push_back(std::move(t));
  }
  return lib;
}

inline Library parse_flexlib(const std::string& text) {
  std::istringstream in(text);
  return parse_flexlib(in);
}

/// "builtin:<name>", a bare builtin name or theorem alias (thm2..thm5), or
/// otherwise a path to a flexlib file.
inline Library resolve_library(const std::string& name_or_path, int d_max = 8) {
  if (name_or_path.rfind("builtin:", 0) == 0) return builtin_library(library_for_theorem(name_or_path.substr(8)), d_max);
  const auto names = builtin_library_names();
  const auto name = library_for_theorem(name_or_path);
  if (std::find(names.begin(), names.end(), name) != names.end()) return builtin_library(name, d_max);
  return parse_flexlib(detail::read_file(name_or_path));
}

inline std::string serialize_flexlib(const Library& lib) {
  std::ostringstream out;
  out << "flexlib v1\n";
  out << "name " << lib.name << "\nk " << lib.k << "\nfamily " << lib.family << "\nkind " << to_string(lib.kind) << '\n';
  for (const auto& t : lib.templates) {
    out << "template " << t.name << '\n';
    detail::write_config_body(out, "", t.config.pattern, t.config.boundary, t.degree, t.config.declared_fix);
    for (const auto& tri : t.faces.triangle_faces) out << "face " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
    for (Vertex v : t.faces.on_triangle_face) out << "on-triangle-face " << v << '\n';
    out << "end\n";
  }
  return out.str();
}

}  // namespace flexcolor
