// flexcolor: reducibility checks, resolutions, sampling, discharging and
// request oracles from the command line.
//
// Exit codes: 0 success, 1 expectation mismatch / stuck / failed check,
// 2 parse or usage error, 3 infeasible configuration, 4 family violation,
// 5 corrupt certificate, 6 disconnected graph, 7 size guard, 8 budget exceeded.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "flexcolor/coloring.hpp"
#include "flexcolor/corpus.hpp"
#include "flexcolor/discharging.hpp"
#include "flexcolor/graph_io.hpp"
#include "flexcolor/library.hpp"
#include "flexcolor/polyhedra.hpp"
#include "flexcolor/reducibility.hpp"
#include "flexcolor/report.hpp"
#include "flexcolor/resolution.hpp"
#include "flexcolor/sampler.hpp"

namespace fs = std::filesystem;
using namespace flexcolor;
using report::Json;

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::infeasible_configuration: return 3;
    case ErrorCode::family_violation: return 4;
    case ErrorCode::corrupt_certificate: return 5;
    case ErrorCode::disconnected: return 6;
    case ErrorCode::size_guard: return 7;
    case ErrorCode::budget_exceeded: return 8;
    default: return 2;
  }
}

struct Outcome {
  Json body;
  int code = 0;
};

GraphFile load_graph(const std::string& arg) {
  if (arg.rfind("builtin:", 0) == 0) return named_graph(arg.substr(8));
  return load_flexgraph(arg);
}

ListAssignment load_lists(const std::string& arg, const Graph& g) {
  if (arg.rfind("uniform:", 0) == 0) {
    const int k = detail::parse_int(arg.substr(8), "--lists");
    if (k < 1) throw Error(ErrorCode::domain, "uniform lists need a positive size");
    ListAssignment out;
    std::vector<Color> colors;
    for (int c = 1; c <= k; ++c) colors.push_back(c);
    for (Vertex v : g.vertices()) out[v] = colors;
    return out;
  }
  auto lists = load_flexlists(arg).lists;
  validate_lists(g, lists);
  return lists;
}

const CorpusEntry* find_corpus_entry(const std::vector<CorpusEntry>& corpus, const std::string& name) {
  for (const auto& e : corpus)
    if (e.config.name == name) return &e;
  return nullptr;
}

Resolution load_valid_resolution(const std::string& path, const Graph& g, const std::string& library_override) {
  const Resolution r = load_flexres(path);
  const Library lib = resolve_library(library_override.empty() ? r.library : library_override);
  const auto v = validate_resolution(g, r, lib);
  if (!v.valid()) {
    std::string why;
    for (const auto& i : v.issues) why += " [" + i.clause + " step " + std::to_string(i.step) + ": " + i.detail + "]";
    throw Error(ErrorCode::corrupt_certificate, "certificate does not validate:" + why);
  }
  return r;
}

void require_list_size(const ListAssignment& lists, int k) {
  for (const auto& [v, l] : lists)
    if (static_cast<int>(l.size()) < k)
      throw Error(ErrorCode::domain, "vertex " + std::to_string(v) + " has fewer than k = " + std::to_string(k) + " colors");
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::domain, "cannot write " + path.string());
  out << text;
}

Json corpus_listing() {
  Json configs = Json::array();
  for (const auto& e : configuration_corpus()) {
    Json entry = {{"name", e.config.name}, {"k", e.k}, {"family", e.family}, {"strong", e.strong}, {"weak", e.weak}};
    entry["fix_set"] = e.fix_set ? report::vertices(*e.fix_set) : Json(nullptr);
    entry["file"] = "configs/" + e.config.name + ".flexconfig";
    configs.push_back(entry);
  }
  Json graphs = Json::array();
  for (const auto& e : graph_corpus()) {
    const auto g = named_graph(e.name);
    graphs.push_back({{"name", e.name},
                      {"order", g.graph.order()},
                      {"size", g.graph.size()},
                      {"degeneracy", degeneracy(g.graph).d},
                      {"free_of_cycles", e.free_of_cycles},
                      {"family", e.family},
                      {"library", e.library},
                      {"file", "graphs/" + e.name + ".flexgraph"}});
  }
  return {{"command", "corpus-list"},
          {"configurations", configs},
          {"graphs", graphs},
          {"libraries", builtin_library_names()},
          {"families", builtin_family_names()},
          {"specs", builtin_spec_names()}};
}

void export_corpus(const fs::path& dir) {
  for (const auto& e : configuration_corpus())
    write_file(dir / "configs" / (e.config.name + ".flexconfig"), serialize_flexconfig(e.config));
  for (const auto& e : graph_corpus()) write_file(dir / "graphs" / (e.name + ".flexgraph"), serialize_flexgraph(named_graph(e.name)));
  for (const auto& name : builtin_library_names())
    write_file(dir / "libraries" / (name + ".flexlib"), serialize_flexlib(builtin_library(name)));
  for (const auto& name : builtin_family_names())
    write_file(dir / "families" / (name + ".flexfamily"), serialize_flexfamily(builtin_family(name)));
  for (const auto& name : builtin_spec_names())
    write_file(dir / "specs" / (name + ".flexcharge"), serialize_flexcharge(builtin_spec(name)));
  write_file(dir / "index.json", corpus_listing().dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexcolor: flexible list coloring of planar graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  int jobs = 1;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--jobs", jobs, "Worker cap (all work runs on one thread)")->check(CLI::PositiveNumber);

  std::function<Outcome()> run;

  // check-config
  auto* cc = app.add_subcommand("check-config", "Decide (FIX)/(FORB) reducibility of one configuration");
  std::string cc_config, cc_builtin, cc_family, cc_mode = "strong", cc_expect;
  std::optional<int> cc_k;
  auto* cc_source = cc->add_option_group("source");
  cc_source->add_option("--config", cc_config, "flexconfig file");
  cc_source->add_option("--builtin", cc_builtin, "Bundled configuration name");
  cc_source->require_option(1);
  cc->add_option("--k", cc_k, "List size k");
  cc->add_option("--family", cc_family, "Forbidden family (builtin name or flexfamily file)");
  cc->add_option("--mode", cc_mode, "strong or weak")->check(CLI::IsMember({"strong", "weak"}));
  cc->add_option("--expect", cc_expect, "reducible or irreducible")->check(CLI::IsMember({"reducible", "irreducible"}));
  cc->callback([&] {
    run = [&]() -> Outcome {
      Configuration c;
      int k = 0;
      std::string family = cc_family;
      if (!cc_builtin.empty()) {
        const auto corpus = configuration_corpus();
        const auto* e = find_corpus_entry(corpus, cc_builtin);
        if (!e) throw Error(ErrorCode::unknown_name, "no bundled configuration '" + cc_builtin + "'");
        c = e->config;
        k = e->k;
        if (family.empty()) family = e->family;
      } else {
        c = load_flexconfig(cc_config);
      }
      if (cc_k) k = *cc_k;
      if (k < 1) throw Error(ErrorCode::domain, "--k is required for a configuration file");
      if (family.empty()) family = "none";
      const auto mode = cc_mode == "weak" ? ReducibilityMode::weak : ReducibilityMode::strong;
      const auto rep = check_reducible(c, k, resolve_family(family), mode);
      Json body = report::reducibility(rep, mode);
      int code = 0;
      if (!cc_expect.empty()) {
        const bool want = cc_expect == "reducible";
        body["expect"] = cc_expect;
        body["expect_met"] = want == body["reducible"].get<bool>();
        if (!body["expect_met"].get<bool>()) code = 1;
      }
      return {body, code};
    };
  });

  // resolve
  auto* rs = app.add_subcommand("resolve", "Peel a graph with a configuration library into a resolution certificate");
  std::string rs_graph, rs_library, rs_family, rs_out, rs_face_mode = "current";
  std::optional<int> rs_k;
  int rs_bcap = 16;
  rs->add_option("--graph", rs_graph, "flexgraph file or builtin:<name>")->required();
  rs->add_option("--library", rs_library, "builtin:thm2..thm5, a builtin library name, or a flexlib file")->required();
  rs->add_option("--k", rs_k, "Must match the library's k when given");
  rs->add_option("--family", rs_family, "Must match the library's family when given");
  rs->add_option("--bcap", rs_bcap, "Largest peeled set allowed")->check(CLI::PositiveNumber);
  rs->add_option("--out", rs_out, "Where to write the flexres certificate");
  rs->add_option("--face-mode", rs_face_mode, "Face predicates on the current or the original embedding")
      ->check(CLI::IsMember({"current", "original"}));
  rs->callback([&] {
    run = [&]() -> Outcome {
      const auto g = load_graph(rs_graph);
      const auto lib = resolve_library(rs_library);
      if (rs_k && *rs_k != lib.k) throw Error(ErrorCode::domain, "--k differs from the library's k");
      if (!rs_family.empty() && rs_family != lib.family) throw Error(ErrorCode::domain, "--family differs from the library's family");
      BuildOptions opt;
      opt.b_cap = rs_bcap;
      opt.face_mode = rs_face_mode == "original" ? FaceMode::original : FaceMode::current;
      const auto built = build_resolution(g.graph, lib, &g.rotation, opt);
      Json body = {{"command", "resolve"},
                   {"graph", {{"order", g.graph.order()}, {"size", g.graph.size()}}},
                   {"library", lib.name},
                   {"k", lib.k},
                   {"family", lib.family},
                   {"kind", to_string(lib.kind)},
                   {"ok", built.ok()}};
      if (!built.ok()) {
        body["stuck"] = {{"vertices", report::vertices(built.stuck.vertices())}, {"edges", built.stuck.edges()}};
        return {body, 1};
      }
      const auto& r = *built.resolution;
      body["resolution"] = report::resolution_summary(r);
      body["epsilon"] = report::epsilon(r.k, r.effective_b());
      body["validation"] = report::validation(validate_resolution(g.graph, r, lib));
      if (!rs_out.empty()) {
        write_file(rs_out, serialize_flexres(r));
        body["certificate"] = rs_out;
      }
      return {body, body["validation"]["valid"].get<bool>() ? 0 : 1};
    };
  });

  // sample / marginals / exact share their inputs.
  std::string sm_graph, sm_lists, sm_res, sm_library, sm_request;
  std::uint64_t sm_seed = 1;
  std::size_t sm_samples = 1, sm_budget = 10'000'000;
  auto add_sampling_inputs = [&](CLI::App* sub) {
    sub->add_option("--graph", sm_graph, "flexgraph file or builtin:<name>")->required();
    sub->add_option("--lists", sm_lists, "flexlists file or uniform:<k>")->required();
    sub->add_option("--resolution", sm_res, "flexres certificate")->required();
    sub->add_option("--library", sm_library, "Library to validate against (default: the one named in the certificate)");
  };
  auto* sp = app.add_subcommand("sample", "Draw colorings from the resolution's distribution");
  add_sampling_inputs(sp);
  sp->add_option("--samples", sm_samples, "Number of draws")->check(CLI::PositiveNumber);
  sp->add_option("--seed", sm_seed, "Seed");
  sp->callback([&] {
    run = [&]() -> Outcome {
      const auto g = load_graph(sm_graph);
      const auto lists = load_lists(sm_lists, g.graph);
      const auto r = load_valid_resolution(sm_res, g.graph, sm_library);
      require_list_size(lists, r.k);
      Json draws = Json::array();
      bool proper = true;
      for (std::size_t t = 0; t < sm_samples; ++t) {
        const auto phi = sample_coloring(g.graph, lists, r, sm_seed, t);
        proper = proper && is_proper_list_coloring(g.graph, lists, phi);
        draws.push_back(report::coloring(phi));
      }
      return {{{"command", "sample"}, {"seed", sm_seed}, {"samples", sm_samples}, {"all_proper", proper}, {"colorings", draws}},
              proper ? 0 : 1};
    };
  });
  auto* mg = app.add_subcommand("marginals", "Estimate marginals by sampling");
  add_sampling_inputs(mg);
  mg->add_option("--samples", sm_samples, "Number of draws")->check(CLI::PositiveNumber);
  mg->add_option("--seed", sm_seed, "Seed");
  mg->callback([&] {
    run = [&]() -> Outcome {
      const auto g = load_graph(sm_graph);
      const auto lists = load_lists(sm_lists, g.graph);
      const auto r = load_valid_resolution(sm_res, g.graph, sm_library);
      require_list_size(lists, r.k);
      const auto table = estimate_marginals(g.graph, lists, r, sm_samples, sm_seed);
      return {{{"command", "marginals"},
               {"seed", sm_seed},
               {"samples", sm_samples},
               {"rows_sum_to_one", report::rows_sum_to_one(table)},
               {"marginals", report::marginal_table(table)}},
              0};
    };
  });
  auto* ex = app.add_subcommand("exact", "Exact distribution, marginals and bound checks");
  add_sampling_inputs(ex);
  ex->add_option("--budget", sm_budget, "Enumeration budget")->check(CLI::PositiveNumber);
  ex->add_option("--request", sm_request, "flexlists file with R or W lines; reports expected satisfaction");
  ex->callback([&] {
    run = [&]() -> Outcome {
      const auto g = load_graph(sm_graph);
      const auto lists = load_lists(sm_lists, g.graph);
      const auto r = load_valid_resolution(sm_res, g.graph, sm_library);
      require_list_size(lists, r.k);
      const auto dist = exact_distribution(g.graph, lists, r, sm_budget);
      const auto table = marginals(dist, lists);
      const auto b = verify_bounds(g.graph, lists, dist, r);
      Rational total = 0;
      for (const auto& [phi, p] : dist) total += p;
      Json body = {{"command", "exact"},
                   {"support_size", dist.size()},
                   {"total", report::rational(total)},
                   {"rows_sum_to_one", report::rows_sum_to_one(table)},
                   {"marginals", report::marginal_table(table)},
                   {"bounds", report::bounds(b)}};
      if (!sm_request.empty()) {
        auto file = load_flexlists(sm_request);
        if (!file.request) throw Error(ErrorCode::parse, "request file has no R or W lines");
        const auto req = classify_request(g.graph, *file.request);
        validate_request(g.graph, lists, req);
        body["request"] = {{"kind", to_string(req.kind)}, {"expected_satisfaction", report::rational(expected_satisfaction(dist, req))}};
        if (req.kind == RequestKind::widespread) {
          const auto acc = weak_accounting(g.graph, dist, r, req);
          body["request"]["weak_accounting"] = {{"fix_size", acc.fix_size},
                                                {"expected_matched", report::rational(acc.expected_matched)},
                                                {"bound", report::rational(acc.bound)},
                                                {"ok", acc.ok()}};
        }
      }
      return {body, b.ok() ? 0 : 1};
    };
  });

  // discharge
  auto* dc = app.add_subcommand("discharge", "Run a discharging spec on an embedded graph");
  std::string dc_graph, dc_spec;
  bool dc_embedding_required = true;
  dc->add_option("--graph", dc_graph, "flexgraph file (neighbors in rotation order) or builtin:<name>")->required();
  dc->add_option("--spec", dc_spec, "builtin:thm2..thm5|obs9 or a flexcharge file")->required();
  dc->add_flag("--embedding-required,!--no-embedding-check", dc_embedding_required, "Reject rotations that are not plane");
  dc->callback([&] {
    run = [&]() -> Outcome {
      const auto g = load_graph(dc_graph);
      const auto spec = resolve_spec(dc_spec);
      if (dc_embedding_required && !is_plane_embedding(g.graph, g.rotation)) {
        if (!is_connected(g.graph)) throw Error(ErrorCode::disconnected, "discharging needs a connected graph");
        throw Error(ErrorCode::embedding_incomplete, "the rotation system is not a plane embedding");
      }
      PlaneStructure plane(g.graph, g.rotation);
      const auto initial = initial_charges(plane, spec);
      const auto result = apply_rules(plane, initial, spec.rules);
      Json body = report::discharge(spec.name.empty() ? dc_spec : spec.name, plane, spec, result);
      return {body, body["euler_ok"].get<bool>() && body["conserved"].get<bool>() ? 0 : 1};
    };
  });

  // oracle
  auto* oc = app.add_subcommand("oracle", "Exact best coloring for a request");
  std::string oc_graph, oc_lists, oc_request;
  std::size_t oc_max = 20;
  oc->add_option("--graph", oc_graph, "flexgraph file or builtin:<name>")->required();
  oc->add_option("--lists", oc_lists, "flexlists file or uniform:<k>")->required();
  oc->add_option("--request", oc_request, "flexlists file with R or W lines (default: the lists file)");
  oc->add_option("--max-vertices", oc_max, "Size guard");
  oc->callback([&] {
    run = [&]() -> Outcome {
      const auto g = load_graph(oc_graph);
      if (g.graph.order() > oc_max)
        throw Error(ErrorCode::size_guard, "graph has " + std::to_string(g.graph.order()) + " vertices, guard is " + std::to_string(oc_max));
      const auto lists = load_lists(oc_lists, g.graph);
      const std::string source = oc_request.empty() ? oc_lists : oc_request;
      auto file = load_flexlists(source);
      if (!file.request) throw Error(ErrorCode::parse, "no R or W lines in " + source);
      const auto req = classify_request(g.graph, *file.request);
      validate_request(g.graph, lists, req);
      const auto best = max_satisfaction(g.graph, lists, req);
      return {{{"command", "oracle"},
               {"kind", to_string(req.kind)},
               {"score", report::rational(best.score)},
               {"best", report::coloring(best.best)}},
              0};
    };
  });

  // info
  auto* in = app.add_subcommand("info", "Order, size, degeneracy and embedding facts of a graph");
  std::string in_graph;
  in->add_option("--graph", in_graph, "flexgraph file or builtin:<name>")->required();
  in->callback([&] {
    run = [&]() -> Outcome {
      const auto g = load_graph(in_graph);
      const auto d = degeneracy(g.graph);
      return {{{"command", "info"},
               {"order", g.graph.order()},
               {"size", g.graph.size()},
               {"connected", is_connected(g.graph)},
               {"plane_embedding", is_plane_embedding(g.graph, g.rotation)},
               {"degeneracy", d.d},
               {"elimination_order", d.order}},
              0};
    };
  });

  // corpus
  auto* cp = app.add_subcommand("corpus", "Bundled configurations, graphs, libraries and specs");
  cp->require_subcommand(1);
  auto* cl = cp->add_subcommand("list", "List the bundled corpus");
  cl->callback([&] { run = []() -> Outcome { return {corpus_listing(), 0}; }; });
  auto* ce = cp->add_subcommand("export", "Write the bundled corpus as files");
  std::string ce_dir;
  ce->add_option("--dir", ce_dir, "Target directory")->required();
  ce->callback([&] {
    run = [&]() -> Outcome {
      export_corpus(ce_dir);
      return {{{"command", "corpus-export"}, {"dir", ce_dir}}, 0};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto outcome = run();
    std::cout << (format == "text" ? report::render_text(outcome.body) : outcome.body.dump(2) + "\n");
    return outcome.code;
  } catch (const Error& e) {
    const Json err = {{"error", to_string(e.code())}, {"message", e.what()}};
    std::cerr << (format == "text" ? report::render_text(err) : err.dump(2) + "\n");
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
