#pragma once

// Discharging on a plane embedding with exact rational charges: affine
// initial charges, ordered transfer rules between vertices and faces, and an
// audit of the elements left negative.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "flexcolor/graph.hpp"
#include "flexcolor/graph_io.hpp"
#include "flexcolor/rational.hpp"
#include "flexcolor/reducibility.hpp"

namespace flexcolor {

enum class ElementKind { vertex, face };

inline const char* to_string(ElementKind k) { return k == ElementKind::vertex ? "vertex" : "face"; }

struct Element {
  ElementKind kind = ElementKind::vertex;
  int id = 0;  // vertex id, or index into faces()

  auto operator<=>(const Element&) const = default;
};

inline std::string to_string(const Element& e) { return (e.kind == ElementKind::vertex ? "v" : "f") + std::to_string(e.id); }

/// a * x + c, with x the degree of a vertex or the length of a face.
struct Affine {
  Rational a;
  Rational c;

  Rational operator()(int x) const { return a * x + c; }
};

namespace detail {

/// One entry of a face degree vector: exactly `value`, or at least it.
struct FacevecEntry {
  int value = 0;
  bool plus = false;
};

/// Degree multiset of a face walk matches the pattern under some bijection.
inline bool facevec_matches(std::vector<int> degrees, const std::vector<FacevecEntry>& pattern) {
  if (degrees.size() != pattern.size()) return false;
  // Exact entries first, then thresholds from the largest down, each taking
  // the smallest degree that still fits.
  std::vector<FacevecEntry> order = pattern;
  std::sort(order.begin(), order.end(), [](const FacevecEntry& x, const FacevecEntry& y) {
    if (x.plus != y.plus) return !x.plus;
    return x.value > y.value;
  });
  std::multiset<int> pool(degrees.begin(), degrees.end());
  for (const auto& e : order) {
    auto it = e.plus ? pool.lower_bound(e.value) : pool.find(e.value);
    if (it == pool.end()) return false;
    pool.erase(it);
  }
  return true;
}

inline std::string bound_string(const char* key, const DegreeBound& b) {
  const char* op = b.op == DegreeOp::eq ? "=" : b.op == DegreeOp::le ? "<=" : ">=";
  return std::string(key) + op + std::to_string(b.value);
}

inline std::optional<DegreeBound> parse_bound(const std::string& token, const std::string& key) {
  if (token.rfind(key, 0) != 0) return std::nullopt;
  std::string rest = token.substr(key.size());
  DegreeBound b;
  if (rest.rfind("<=", 0) == 0) {
    b.op = DegreeOp::le;
    rest = rest.substr(2);
  } else if (rest.rfind(">=", 0) == 0) {
    b.op = DegreeOp::ge;
    rest = rest.substr(2);
  } else if (rest.rfind("=", 0) == 0) {
    b.op = DegreeOp::eq;
    rest = rest.substr(1);
  } else {
    return std::nullopt;
  }
  b.value = parse_int(rest, "'" + token + "'");
  return b;
}

}  // namespace detail

/// Condition on a face: its length, its degree vector, and which vertex
/// degrees it must or must not carry.
struct FacePredicate {
  std::optional<detail::DegreeBound> length;
  std::optional<std::vector<detail::FacevecEntry>> facevec;
  std::vector<detail::DegreeBound> has;  // some incident vertex admits each
  std::vector<detail::DegreeBound> lacks;  // no incident vertex admits any
};

/// Faces a vertex must lie on: at least `count` distinct faces satisfying `face`.
struct OnFaces {
  int count = 1;
  FacePredicate face;
};

struct VertexPredicate {
  std::optional<detail::DegreeBound> degree;
  std::vector<OnFaces> on;
};

enum class Relation { incident, pendent };

struct DischargingRule {
  std::string label;
  ElementKind sender = ElementKind::vertex;
  VertexPredicate sender_vertex;
  FacePredicate sender_face;
  Relation relation = Relation::incident;
  VertexPredicate receiver_vertex;  // used when the receiver is a vertex
  FacePredicate receiver_face;      // used when the receiver is a face
  std::optional<Rational> amount;   // empty: split the sender's charge evenly
};

struct ChargeSpec {
  std::string name;
  Affine vertex;
  Affine face;
  Rational expected_total;
  std::vector<DischargingRule> rules;
};

/// Incidence data of one embedding.
class PlaneStructure {
 public:
  PlaneStructure(const Graph& g, const RotationSystem& rot) : g_(g), faces_(faces(g, rot)) {
    for (std::size_t f = 0; f < faces_.size(); ++f)
      for (Vertex v : faces_[f].corners()) corners_of_[v].push_back(static_cast<int>(f));
  }

  const Graph& graph() const { return g_; }
  const std::vector<Face>& face_list() const { return faces_; }
  int length(int f) const { return faces_[f].length(); }

  /// Faces at v, one entry per corner.
  const std::vector<int>& corner_faces(Vertex v) const {
    static const std::vector<int> none;
    auto it = corners_of_.find(v);
    return it == corners_of_.end() ? none : it->second;
  }

  std::vector<int> distinct_faces(Vertex v) const {
    auto fs = corner_faces(v);
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    return fs;
  }

  bool on_face(Vertex v, int f) const {
    const auto& fs = corner_faces(v);
    return std::find(fs.begin(), fs.end(), f) != fs.end();
  }

  /// 3-faces f with v not on f and f through a 3-vertex adjacent to v.
  std::vector<int> pendent_faces(Vertex v) const {
    std::set<int> out;
    for (Vertex w : g_.neighbors(v)) {
      if (g_.degree(w) != 3) continue;
      for (int f : corner_faces(w))
        if (length(f) == 3 && !on_face(v, f)) out.insert(f);
    }
    return {out.begin(), out.end()};
  }

  /// Vertices to which f is pendent.
  std::vector<Vertex> pendent_vertices(int f) const {
    std::set<Vertex> out;
    if (length(f) != 3) return {};
    for (Vertex w : faces_[f].corners()) {
      if (g_.degree(w) != 3) continue;
      for (Vertex v : g_.neighbors(w))
        if (!on_face(v, f)) out.insert(v);
    }
    return {out.begin(), out.end()};
  }

  bool admits(const FacePredicate& p, int f) const {
    if (p.length && !p.length->admits(length(f))) return false;
    const auto corners = faces_[f].corners();
    if (p.facevec) {
      std::vector<int> degrees;
      for (Vertex v : corners) degrees.push_back(g_.degree(v));
      if (!detail::facevec_matches(degrees, *p.facevec)) return false;
    }
    auto carries = [&](const detail::DegreeBound& b) {
      return std::any_of(corners.begin(), corners.end(), [&](Vertex v) { return b.admits(g_.degree(v)); });
    };
    for (const auto& b : p.has)
      if (!carries(b)) return false;
    for (const auto& b : p.lacks)
      if (carries(b)) return false;
    return true;
  }

  bool admits(const VertexPredicate& p, Vertex v) const {
    if (p.degree && !p.degree->admits(g_.degree(v))) return false;
    for (const auto& on : p.on) {
      int hits = 0;
      for (int f : distinct_faces(v))
        if (admits(on.face, f)) ++hits;
      if (hits < on.count) return false;
    }
    return true;
  }

 private:
  const Graph& g_;
  std::vector<Face> faces_;
  std::map<Vertex, std::vector<int>> corners_of_;
};

struct ChargeState {
  std::string phase;  // "initial", "after <label>"
  std::map<Element, Rational> charge;

  Rational total() const {
    Rational t = 0;
    for (const auto& [e, q] : charge) t += q;
    return t;
  }
};

/// Charges from the spec. Throws disconnected unless the graph is connected.
inline ChargeState initial_charges(const PlaneStructure& plane, const ChargeSpec& spec) {
  const Graph& g = plane.graph();
  if (!is_connected(g)) throw Error(ErrorCode::disconnected, "discharging needs a connected graph");
  ChargeState s;
  s.phase = "initial";
  for (Vertex v : g.vertices()) s.charge[{ElementKind::vertex, v}] = spec.vertex(g.degree(v));
  for (std::size_t f = 0; f < plane.face_list().size(); ++f)
    s.charge[{ElementKind::face, static_cast<int>(f)}] = spec.face(plane.length(static_cast<int>(f)));
  return s;
}

/// A split rule whose sender had nowhere to send.
struct InapplicableRule {
  std::string rule;
  Element sender;
};

struct DischargeResult {
  std::vector<ChargeState> phases;  // initial, then one per rule
  std::vector<InapplicableRule> inapplicable;

  const ChargeState& final_state() const { return phases.back(); }
};

namespace detail {

inline bool sender_admits(const PlaneStructure& plane, const DischargingRule& r, int id) {
  return r.sender == ElementKind::vertex ? plane.admits(r.sender_vertex, id) : plane.admits(r.sender_face, id);
}

/// Receivers of one sender; incident receivers repeat once per corner.
inline std::vector<Element> receivers(const PlaneStructure& plane, const DischargingRule& r, int id) {
  std::vector<Element> out;
  if (r.sender == ElementKind::vertex) {
    const auto fs = r.relation == Relation::incident ? plane.corner_faces(id) : plane.pendent_faces(id);
    for (int f : fs)
      if (plane.admits(r.receiver_face, f)) out.push_back({ElementKind::face, f});
  } else {
    const auto vs = r.relation == Relation::incident ? plane.face_list()[id].corners() : plane.pendent_vertices(id);
    for (Vertex v : vs)
      if (plane.admits(r.receiver_vertex, v)) out.push_back({ElementKind::vertex, v});
  }
  return out;
}

}  // namespace detail

/// Applies the rules in order; every sender of one rule reads the charge it
/// held before that rule.
inline DischargeResult apply_rules(const PlaneStructure& plane, const ChargeState& initial,
                                   const std::vector<DischargingRule>& rules) {
  DischargeResult out;
  out.phases.push_back(initial);
  for (const auto& r : rules) {
    const ChargeState& before = out.phases.back();
    ChargeState next = before;
    next.phase = "after " + r.label;
    for (const auto& [e, q] : before.charge) {
      if (e.kind != r.sender || !detail::sender_admits(plane, r, e.id)) continue;
      const auto to = detail::receivers(plane, r, e.id);
      if (to.empty()) {
        if (!r.amount) out.inapplicable.push_back({r.label, e});
        continue;
      }
      const Rational each = r.amount ? *r.amount : Rational(q / static_cast<long>(to.size()));
      for (const auto& x : to) {
        next.charge[e] -= each;
        next.charge[x] += each;
      }
    }
    out.phases.push_back(std::move(next));
  }
  out.phases.back().phase = "final";
  return out;
}

/// Elements with negative charge, in element order.
inline std::vector<Element> audit(const ChargeState& state) {
  std::vector<Element> out;
  for (const auto& [e, q] : state.charge)
    if (q < 0) out.push_back(e);
  return out;
}

// ---------------------------------------------------------------------------
// Rule syntax, one rule per line:
//
//   rule <label> <sender> <preds> -> <relation> <receiver> <preds> : <amount>
//
// sender/receiver: vertex | face (one of each); relation: incident | pendent;
// amount: a rational or uniform-remainder. Predicate tokens, all of which
// must hold:
//   vertex:  deg=n deg<=n deg>=n  face3  face4+  on:<face pred>  on2:<face pred>
//   face:    len=n len<=n len>=n  facevec{3,4,5+}  has:deg=n  no:deg=n
// where <face pred> is a len bound or a facevec.

namespace detail {

inline std::vector<FacevecEntry> parse_facevec(const std::string& token) {
  const std::string head = "facevec{";
  if (token.rfind(head, 0) != 0 || token.back() != '}') throw Error(ErrorCode::parse, "malformed facevec '" + token + "'");
  std::vector<FacevecEntry> out;
  std::stringstream body(token.substr(head.size(), token.size() - head.size() - 1));
  std::string item;
  while (std::getline(body, item, ',')) {
    FacevecEntry e;
    if (!item.empty() && item.back() == '+') {
      e.plus = true;
      item.pop_back();
    }
    e.value = parse_int(item, "'" + token + "'");
    out.push_back(e);
  }
  if (out.empty()) throw Error(ErrorCode::parse, "empty facevec");
  return out;
}

inline std::string facevec_string(const std::vector<FacevecEntry>& v) {
  std::string out = "facevec{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i].value) + (v[i].plus ? "+" : "");
  }
  return out + "}";
}

inline void parse_face_token(FacePredicate& p, const std::string& token) {
  if (auto b = parse_bound(token, "len")) {
    p.length = b;
  } else if (token.rfind("facevec{", 0) == 0) {
    p.facevec = parse_facevec(token);
  } else if (token.rfind("has:", 0) == 0 || token.rfind("no:", 0) == 0) {
    const bool has = token[0] == 'h';
    auto b = parse_bound(token.substr(has ? 4 : 3), "deg");
    if (!b) throw Error(ErrorCode::parse, "malformed face predicate '" + token + "'");
    (has ? p.has : p.lacks).push_back(*b);
  } else {
    throw Error(ErrorCode::parse, "unknown face predicate '" + token + "'");
  }
}

inline void parse_vertex_token(VertexPredicate& p, const std::string& token) {
  if (auto b = parse_bound(token, "deg")) {
    p.degree = b;
  } else if (token == "face3") {
    p.on.push_back({1, FacePredicate{DegreeBound{DegreeOp::eq, 3}, {}, {}, {}}});
  } else if (token == "face4+") {
    p.on.push_back({1, FacePredicate{DegreeBound{DegreeOp::ge, 4}, {}, {}, {}}});
  } else if (token.rfind("on:", 0) == 0 || token.rfind("on2:", 0) == 0) {
    OnFaces on;
    on.count = token[2] == '2' ? 2 : 1;
    const std::string inner = token.substr(on.count == 2 ? 4 : 3);
    if (inner.rfind("len", 0) != 0 && inner.rfind("facevec{", 0) != 0)
      throw Error(ErrorCode::parse, "malformed vertex predicate '" + token + "'");
    parse_face_token(on.face, inner);
    p.on.push_back(on);
  } else {
    throw Error(ErrorCode::parse, "unknown vertex predicate '" + token + "'");
  }
}

inline std::vector<std::string> face_tokens(const FacePredicate& p) {
  std::vector<std::string> out;
  if (p.length) out.push_back(bound_string("len", *p.length));
  if (p.facevec) out.push_back(facevec_string(*p.facevec));
  for (const auto& b : p.has) out.push_back("has:" + bound_string("deg", b));
  for (const auto& b : p.lacks) out.push_back("no:" + bound_string("deg", b));
  return out;
}

inline std::vector<std::string> vertex_tokens(const VertexPredicate& p) {
  std::vector<std::string> out;
  if (p.degree) out.push_back(bound_string("deg", *p.degree));
  for (const auto& on : p.on) {
    const auto inner = face_tokens(on.face);
    out.push_back((on.count == 2 ? "on2:" : "on:") + (inner.empty() ? std::string("len>=0") : inner.front()));
  }
  return out;
}

}  // namespace detail

inline DischargingRule parse_rule(const std::string& line) {
  const auto tok = detail::split_ws(line);
  auto fail = [&](const std::string& why) { return Error(ErrorCode::parse, "rule '" + line + "': " + why); };
  if (tok.size() < 7 || tok[0] != "rule") throw fail("too short");
  DischargingRule r;
  r.label = tok[1];
  if (tok[2] != "vertex" && tok[2] != "face") throw fail("sender must be vertex or face");
  r.sender = tok[2] == "vertex" ? ElementKind::vertex : ElementKind::face;
  std::size_t i = 3;
  for (; i < tok.size() && tok[i] != "->"; ++i) {
    if (r.sender == ElementKind::vertex)
      detail::parse_vertex_token(r.sender_vertex, tok[i]);
    else
      detail::parse_face_token(r.sender_face, tok[i]);
  }
  if (i + 2 >= tok.size()) throw fail("missing '-> <relation> <receiver>'");
  const std::string& rel = tok[i + 1];
  if (rel != "incident" && rel != "pendent") throw fail("relation must be incident or pendent");
  r.relation = rel == "incident" ? Relation::incident : Relation::pendent;
  const std::string& recv = tok[i + 2];
  const ElementKind receiver = recv == "vertex" ? ElementKind::vertex : ElementKind::face;
  if ((recv != "vertex" && recv != "face") || receiver == r.sender) throw fail("receiver must be the other element kind");
  for (i += 3; i < tok.size() && tok[i] != ":"; ++i) {
    if (receiver == ElementKind::vertex)
      detail::parse_vertex_token(r.receiver_vertex, tok[i]);
    else
      detail::parse_face_token(r.receiver_face, tok[i]);
  }
  if (i + 2 != tok.size()) throw fail("expected ': <amount>' at the end");
  if (tok[i + 1] != "uniform-remainder") r.amount = parse_rational(tok[i + 1]);
  return r;
}

inline std::string to_string(const DischargingRule& r) {
  std::string out = "rule " + r.label + " " + to_string(r.sender);
  for (const auto& t : r.sender == ElementKind::vertex ? detail::vertex_tokens(r.sender_vertex) : detail::face_tokens(r.sender_face))
    out += " " + t;
  out += std::string(" -> ") + (r.relation == Relation::incident ? "incident" : "pendent") + " ";
  const bool to_vertex = r.sender == ElementKind::face;
  out += to_vertex ? "vertex" : "face";
  for (const auto& t : to_vertex ? detail::vertex_tokens(r.receiver_vertex) : detail::face_tokens(r.receiver_face)) out += " " + t;
  out += " : " + (r.amount ? flexcolor::to_string(*r.amount) : std::string("uniform-remainder"));
  return out;
}

// ---------------------------------------------------------------------------
// "flexcharge v1":
//   name <name>
//   vertex <a> <c>      ch(v) = a deg(v) + c
//   face <a> <c>        ch(f) = a |f| + c
//   total <rational>    expected sum on a connected plane graph
//   rule ...            in order

inline ChargeSpec parse_flexcharge(std::istream& in) {
  ChargeSpec spec;
  bool have_vertex = false, have_face = false, have_total = false;
  for (const auto& [no, text] : detail::content_lines(in, "flexcharge v1")) {
    const auto tok = detail::split_ws(text);
    const std::string at = "line " + std::to_string(no);
    if (tok[0] == "rule") {
      spec.rules.push_back(parse_rule(text));
    } else if (tok[0] == "name" && tok.size() == 2) {
      spec.name = tok[1];
    } else if ((tok[0] == "vertex" || tok[0] == "face") && tok.size() == 3) {
      Affine f{parse_rational(tok[1]), parse_rational(tok[2])};
      (tok[0] == "vertex" ? spec.vertex : spec.face) = f;
      (tok[0] == "vertex" ? have_vertex : have_face) = true;
    } else if (tok[0] == "total" && tok.size() == 2) {
      spec.expected_total = parse_rational(tok[1]);
      have_total = true;
    } else {
      throw Error(ErrorCode::parse, at + ": unrecognized line");
    }
  }
  if (!have_vertex || !have_face || !have_total) throw Error(ErrorCode::parse, "flexcharge needs vertex, face and total lines");
  return spec;
}

inline ChargeSpec parse_flexcharge(const std::string& text) {
  std::istringstream in(text);
  return parse_flexcharge(in);
}

inline std::string serialize_flexcharge(const ChargeSpec& spec) {
  std::ostringstream out;
  out << "flexcharge v1\n";
  if (!spec.name.empty()) out << "name " << spec.name << '\n';
  out << "vertex " << to_string(spec.vertex.a) << ' ' << to_string(spec.vertex.c) << '\n';
  out << "face " << to_string(spec.face.a) << ' ' << to_string(spec.face.c) << '\n';
  out << "total " << to_string(spec.expected_total) << '\n';
  for (const auto& r : spec.rules) out << to_string(r) << '\n';
  return out.str();
}

inline std::vector<std::string> builtin_spec_names() { return {"thm2", "thm3", "thm4", "thm5", "obs9"}; }

inline ChargeSpec builtin_spec(const std::string& name) {
  std::string text;
  if (name == "thm2") {
    text =
        "vertex 1 -4\nface 1 -4\ntotal -8\n"
        "rule D1 vertex deg>=5 -> incident face len=3 : 1/2\n";
  } else if (name == "thm3") {
    text =
        "vertex 1 -2\nface 0 -2\ntotal -4\n"
        "rule D1 vertex deg=3 -> incident face : 1/3\n"
        "rule D2-incident vertex deg>=4 -> incident face len=3 : 2/3\n"
        "rule D2-pendent vertex deg>=4 -> pendent face len=3 : 1/3\n"
        "rule D2-remainder vertex deg>=4 -> incident face len>=4 : uniform-remainder\n";
  } else if (name == "thm4") {
    text =
        "vertex 0 -2\nface 1 -2\ntotal -4\n"
        "rule D1 face len>=6 -> incident vertex : uniform-remainder\n"
        "rule D2A-3 face len=3 has:deg=3 -> incident vertex deg=3 : 4/7\n"
        "rule D2A-4 face len=3 has:deg=3 -> incident vertex deg=4 : uniform-remainder\n"
        "rule D2B-344 face len=3 no:deg=3 -> incident vertex deg=4 on:facevec{3,4,4} : 3/7\n"
        "rule D2B-345 face len=3 no:deg=3 -> incident vertex deg=4 on:facevec{3,4,5+} : 1/7\n"
        "rule D2B-444 face len=3 no:deg=3 -> incident vertex deg=4 on2:facevec{4+,4+,4+} : 2/7\n";
  } else if (name == "thm5") {
    text =
        "vertex 1 -2\nface 0 -2\ntotal -4\n"
        "rule D1 vertex deg>=6 -> incident face : 2/3\n"
        "rule D2-3face vertex deg=5 -> incident face len=3 : 2/3\n"
        "rule D2-4face vertex deg=5 -> incident face len>=4 : 1/2\n"
        "rule D3-3face vertex deg=4 -> incident face len=3 : 2/3\n"
        "rule D3-4face vertex deg=4 -> incident face len>=4 : 1/3\n";
  } else if (name == "obs9") {
    text =
        "vertex 1 -4\nface 1 -4\ntotal -8\n"
        "rule R1 face len>=5 -> incident vertex : 1/5\n"
        "rule R2 vertex -> incident face len=3 : uniform-remainder\n";
  } else {
    throw Error(ErrorCode::unknown_name, "no builtin charge spec '" + name + "'");
  }
  auto spec = parse_flexcharge("flexcharge v1\nname " + name + "\n" + text);
  return spec;
}

/// "builtin:<name>" or a bare builtin name, otherwise a flexcharge path.
inline ChargeSpec resolve_spec(const std::string& name_or_path) {
  std::string name = name_or_path;
  if (name.rfind("builtin:", 0) == 0) return builtin_spec(name.substr(8));
  const auto names = builtin_spec_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) return builtin_spec(name);
  return parse_flexcharge(detail::read_file(name_or_path));
}

}  // namespace flexcolor
