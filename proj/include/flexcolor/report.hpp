#pragma once

// JSON renderings of every result type. Rationals are "num/den" strings and
// object keys follow a fixed insertion order, so equal inputs give equal bytes.

#include <string>
#include <vector>

#include <json.hpp>

#include "flexcolor/coloring.hpp"
#include "flexcolor/corpus.hpp"
#include "flexcolor/discharging.hpp"
#include "flexcolor/library.hpp"
#include "flexcolor/reducibility.hpp"
#include "flexcolor/resolution.hpp"
#include "flexcolor/sampler.hpp"

namespace flexcolor::report {

using Json = nlohmann::ordered_json;

inline Json rational(const Rational& q) { return to_string(q); }

inline Json vertices(const std::vector<Vertex>& vs) { return Json(vs); }

inline Json vertices(const std::set<Vertex>& vs) { return Json(std::vector<Vertex>(vs.begin(), vs.end())); }

inline Json coloring(const Coloring& phi) {
  Json out = Json::object();
  for (const auto& [v, c] : phi) out[std::to_string(v)] = c;
  return out;
}

inline Json lists(const ListAssignment& l) {
  Json out = Json::object();
  for (const auto& [v, colors] : l) out[std::to_string(v)] = colors;
  return out;
}

inline Json marginal_table(const MarginalTable& t) {
  Json out = Json::object();
  for (const auto& [key, q] : t) out[std::to_string(key.first)][std::to_string(key.second)] = rational(q);
  return out;
}

/// Every vertex's row sums to exactly 1.
inline bool rows_sum_to_one(const MarginalTable& t) {
  std::map<Vertex, Rational> sums;
  for (const auto& [key, q] : t) sums[key.first] += q;
  return std::all_of(sums.begin(), sums.end(), [](const auto& kv) { return kv.second == 1; });
}

inline Json epsilon(int k, int b) {
  const auto e = epsilon_bound(k, std::max(b, 1));
  return {{"p", rational(e.p)}, {"epsilon", rational(e.epsilon)}, {"weak_epsilon", rational(e.weak_epsilon)}};
}

inline Json reducibility(const ReducibilityReport& r, ReducibilityMode mode) {
  Json sizes = Json::object();
  for (const auto& [v, f] : r.sizes) sizes[std::to_string(v)] = f;
  Json sets = Json::array();
  for (const auto& I : r.forbidding_sets) sets.push_back(vertices(I));
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses)
    witnesses.push_back({{"clause", w.clause}, {"vertices", vertices(w.vertices)}, {"lists", lists(w.lists)}});
  const bool verdict = mode == ReducibilityMode::weak ? r.weak : r.strong;
  return {{"command", "check-config"},
          {"name", r.name},
          {"k", r.k},
          {"family", r.family},
          {"mode", to_string(mode)},
          {"residual_sizes", sizes},
          {"forb", r.forb_ok},
          {"fix_set", vertices(r.fix_set)},
          {"strong", r.strong},
          {"weak", r.weak},
          {"reducible", verdict},
          {"fix_discrepancy", r.fix_discrepancy},
          {"forbidding_sets", sets},
          {"witnesses", witnesses}};
}

inline Json resolution_summary(const Resolution& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"template", s.template_name}, {"peeled", vertices(s.peeled)}, {"boundary", vertices(s.boundary)},
                     {"fix", vertices(s.fix)}});
  return {{"k", r.k},
          {"b", r.b},
          {"effective_b", r.effective_b()},
          {"family", r.family},
          {"library", r.library},
          {"kind", to_string(r.kind)},
          {"steps", steps},
          {"residue", vertices(r.residue)},
          {"fix_count", fixed_vertices(r).size()}};
}

inline Json validation(const ValidationReport& v) {
  Json issues = Json::array();
  for (const auto& i : v.issues) issues.push_back({{"clause", i.clause}, {"step", i.step}, {"detail", i.detail}});
  return {{"valid", v.valid()}, {"issues", issues}};
}

inline Json bounds(const BoundReport& b) {
  Json violations = Json::array();
  for (const auto& v : b.violations)
    violations.push_back({{"claim", v.claim},
                          {"vertices", vertices(v.vertices)},
                          {"color", v.color},
                          {"probability", rational(v.probability)},
                          {"bound", rational(v.bound)}});
  return {{"k", b.k},
          {"b", b.b},
          {"p", rational(b.p)},
          {"epsilon", rational(b.epsilon)},
          {"min_marginal", rational(b.min_marginal)},
          {"marginals_checked", b.marginals_checked},
          {"forbidding_sets_checked", b.forbidding_sets_checked},
          {"avoidance_checked", b.avoidance_checked},
          {"ok", b.ok()},
          {"violations", violations}};
}

inline Json charges(const ChargeState& s) {
  Json out = Json::object();
  for (const auto& [e, q] : s.charge) out[to_string(e)] = rational(q);
  return out;
}

inline Json discharge(const std::string& spec_name, const PlaneStructure& plane, const ChargeSpec& spec,
                      const DischargeResult& result) {
  const Graph& g = plane.graph();
  Json phases = Json::array();
  bool conserved = true;
  const Rational start = result.phases.front().total();
  for (const auto& p : result.phases) {
    conserved = conserved && p.total() == start;
    phases.push_back({{"phase", p.phase}, {"total", rational(p.total())}, {"charges", charges(p)}});
  }
  Json inapplicable = Json::array();
  for (const auto& x : result.inapplicable) inapplicable.push_back({{"rule", x.rule}, {"sender", to_string(x.sender)}});
  Json negative = Json::array();
  for (const auto& e : audit(result.final_state())) negative.push_back(to_string(e));
  Json rules = Json::array();
  for (const auto& r : spec.rules) rules.push_back(to_string(r));
  return {{"command", "discharge"},
          {"spec", spec_name},
          {"vertices", g.order()},
          {"edges", g.size()},
          {"faces", plane.face_list().size()},
          {"expected_total", rational(spec.expected_total)},
          {"initial_total", rational(result.phases.front().total())},
          {"final_total", rational(result.final_state().total())},
          {"euler_ok", result.phases.front().total() == spec.expected_total},
          {"conserved", conserved},
          {"rules", rules},
          {"phases", phases},
          {"inapplicable", inapplicable},
          {"audit", negative}};
}

/// Plain text: one "path: value" line per scalar.
inline void render_text(const Json& j, const std::string& path, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& x) { return x.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out += path + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
  }
}

inline std::string render_text(const Json& j) {
  std::string out;
  render_text(j, "", out);
  return out;
}

}  // namespace flexcolor::report
