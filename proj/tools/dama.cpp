// dama: command-line front end. Exit codes: 0 success or all checks pass,
// 1 a verdict failed, 2 bad input (a JSON error object goes to stdout).

#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dama/approx.hpp"
#include "dama/boundary.hpp"
#include "dama/characterize.hpp"
#include "dama/coxeter.hpp"
#include "dama/graph_of_groups.hpp"
#include "dama/io.hpp"
#include "dama/report.hpp"
#include "dama/simplicial.hpp"

using namespace dama;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string report, dot, out;
  std::optional<double> tol_boundary, tol_density, tol_separation, tol_null;
  double tol_iso = 1e-9;
  std::size_t cap_vertices = 16;
  int radius = 3;
  std::uint64_t seed = 0;
  std::string base;
  int depth = 2, branching = 2, max_depth = 3;
  double lambda = 1.0 / 3.0;
  std::optional<double> eps;

  ConditionTolerances tolerances() const {
    ConditionTolerances t;
    t.boundary_gap = tol_boundary;
    t.density_gap = tol_density;
    t.separation_gap = tol_separation;
    t.null_diameter = tol_null;
    t.iso = tol_iso;
    return t;
  }

  Json to_json() const {
    auto opt = [](const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); };
    return {{"command", command},
            {"inputs", inputs},
            {"outputs", {{"report", report}, {"dot", dot}, {"out", out}}},
            {"tolerances",
             {{"boundary", opt(tol_boundary)},
              {"density", opt(tol_density)},
              {"separation", opt(tol_separation)},
              {"null", opt(tol_null)},
              {"iso", tol_iso}}},
            {"caps", {{"vertices", cap_vertices}, {"radius", radius}}},
            {"seed", seed},
            {"base", base},
            {"depth", depth},
            {"branching", branching},
            {"lambda", lambda},
            {"max_depth", max_depth},
            {"eps", opt(eps)}};
  }
};

struct Outcome {
  int status = 0;
  std::string text;  // stdout
  Json result;
};

// Raised when a labelling cannot be built: a verdict, not an input error.
struct VerdictError {
  Json error;
  std::string message;
};

Json error_object(const std::string& kind, const std::string& where, const std::string& message) {
  return {{"error", {{"kind", kind}, {"where", where}, {"message", message}}}};
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

const std::string& input(const RunConfig& cfg, std::size_t i) {
  if (cfg.inputs.size() <= i) throw InputError("arguments", "missing input argument");
  return cfg.inputs[i];
}

void maybe_dot(const RunConfig& cfg, const std::string& text) {
  if (!cfg.dot.empty()) write_file(cfg.dot, text);
}

std::string faces_text(const SimplicialComplex& c, const std::vector<VertexSet>& sets) {
  std::string out;
  for (VertexSet f : sets) {
    std::string line;
    for (const auto& n : c.names_of(f)) line += (line.empty() ? "" : ",") + n;
    out += "{" + line + "}\n";
  }
  return out;
}

Outcome report_outcome(const ConditionReport& r) {
  return {r.all_pass() ? 0 : 1, render_text(r), to_json(r)};
}

// ---- coxeter / nerve ---------------------------------------------------------

Outcome coxeter_classify(const RunConfig& cfg) {
  const CoxeterSystem c = parse_coxeter(read_file(input(cfg, 0)));
  const bool finite = is_finite_type(c, c.all());
  const EndednessClass e = classify_endedness(c, cfg.cap_vertices);
  Outcome o;
  o.result = {{"generators", c.generators()},
              {"finite", finite},
              {"ends", to_string(e.tag)},
              {"virtually_free", e.virtually_free}};
  o.text = "finite: " + yes_no(finite) + "\nends: " + to_string(e.tag) + "\n";
  if (e.tag == Ends::InfinitelyMany) o.text += "virtually_free: " + yes_no(e.virtually_free) + "\n";
  return o;
}

Outcome coxeter_nerve(const RunConfig& cfg) {
  const CoxeterSystem c = parse_coxeter(read_file(input(cfg, 0)));
  const SimplicialComplex n = nerve(c, cfg.cap_vertices);
  maybe_dot(cfg, complex_dot(n));
  return {0, faces_text(n, n.maximal_faces()), to_json(n)};
}

Outcome coxeter_boundary(const RunConfig& cfg) {
  const CoxeterSystem c = parse_coxeter(read_file(input(cfg, 0)));
  const std::string b = to_string(boundary_expression(c, cfg.cap_vertices));
  return {0, b + "\n", {{"boundary", b}}};
}

Outcome nerve_decompose(const RunConfig& cfg) {
  const SimplicialComplex c = parse_simplicial_complex(read_file(input(cfg, 0)));
  if (c.size() > cfg.cap_vertices) {
    throw PreconditionError("complex has " + std::to_string(c.size()) + " vertices, cap is " +
                            std::to_string(cfg.cap_vertices));
  }
  maybe_dot(cfg, complex_dot(c));
  const auto factors = terminal_factors(c);
  std::mt19937_64 rng(cfg.seed);
  const bool agrees = terminal_factors(c, rng) == factors;
  const bool large = is_infinity_large(c);
  Json fs = Json::array();
  for (VertexSet f : factors) fs.push_back(c.names_of(f));
  Outcome o;
  o.result = {{"splittings", enumerate_splittings(c).size()},
              {"terminal_factors", std::move(fs)},
              {"randomized_order_agrees", agrees},
              {"flag", is_flag(c)},
              {"chordal", is_chordal(c)},
              {"infinity_large", large}};
  o.text = "terminal factors:\n" + faces_text(c, factors) + "infinity_large: " + yes_no(large) + "\n";
  o.status = agrees ? 0 : 1;
  return o;
}

// ---- graphs of groups ----------------------------------------------------------

int base_vertex(const RunConfig& cfg, const GraphOfGroups& g) {
  if (cfg.base.empty()) return 0;
  const int v = g.vertex_index(cfg.base);
  if (v < 0) throw InputError("--base", "unknown vertex '" + cfg.base + "'");
  return v;
}

std::string gog_text(const GraphOfGroups& g) {
  std::string out;
  for (const auto& v : g.vertices()) {
    out += "vertex " + v.name + " order " + (v.finite() ? std::to_string(v.order) : "inf") + "\n";
  }
  for (const auto& e : g.edges()) {
    out += "edge " + e.name + " " + g.vertices()[e.ends[0]].name + " -- " + g.vertices()[e.ends[1]].name +
           " edge_order " + std::to_string(e.edge_order) + "\n";
  }
  return out;
}

Outcome gog_reduce(const RunConfig& cfg) {
  const GraphOfGroups g = parse_graph_of_groups(read_file(input(cfg, 0)));
  const GraphOfGroups r = reduce(g);
  const bool ne = is_non_elementary(g);
  return {0, gog_text(r) + "non_elementary: " + yes_no(ne) + "\n",
          {{"reduced", to_json(r)}, {"non_elementary", ne}}};
}

Outcome gog_check(const RunConfig& cfg) {
  const GraphOfGroups g = parse_graph_of_groups(read_file(input(cfg, 0)));
  const bool ne = is_non_elementary(g);
  Outcome o;
  o.result["non_elementary"] = ne;
  o.text = "non_elementary: " + yes_no(ne) + "\n";
  try {
    const BassSerreBall ball = bass_serre_ball(g, base_vertex(cfg, g), cfg.radius);
    const SeparationReport sep = check_separation(ball, g);
    o.result["separation"] = to_json(sep);
    o.text += "separation: " + to_string(sep.all_edges) + "\nthree_way: " + to_string(sep.three_way_verdict) + "\n";
    if (sep.all_edges == Verdict::Fail || sep.three_way_verdict == Verdict::Fail) o.status = 1;
  } catch (const PreconditionError& e) {
    o.result["separation"] = {{"verdict", to_string(Verdict::Inconclusive)}, {"reason", e.what()}};
    o.text += std::string("separation: inconclusive (") + e.what() + ")\n";
  }
  return o;
}

Outcome gog_ball(const RunConfig& cfg) {
  const GraphOfGroups g = parse_graph_of_groups(read_file(input(cfg, 0)));
  const BassSerreBall ball = bass_serre_ball(g, base_vertex(cfg, g), cfg.radius);
  maybe_dot(cfg, ball_dot(ball, g));
  Json summary = ball_summary(ball);
  std::string text = "sizes:";
  for (const auto& s : summary["sizes"]) text += " " + std::to_string(s.get<std::size_t>());
  return {0, text + "\n", std::move(summary)};
}

Outcome gog_boundary(const RunConfig& cfg) {
  const GraphOfGroups g = parse_graph_of_groups(read_file(input(cfg, 0)));
  const std::string b = to_string(boundary_expression(g));
  return {0, b + "\n", {{"boundary", b}}};
}

// ---- boundary algebra ----------------------------------------------------------

Outcome amalgam_normalize(const RunConfig& cfg) {
  const BoundaryExpr e = parse_expr(input(cfg, 0));
  const std::string n = to_string(normalize(e));
  return {0, n + "\n", {{"input", to_string(e)}, {"normal_form", n}}};
}

// ---- approximations and characterization -----------------------------------------

AmalgamApprox build_from(const RunConfig& cfg) {
  std::vector<FiniteMetricSpace> xs;
  for (const auto& path : cfg.inputs) xs.push_back(parse_metric_space(read_file(path)));
  if (xs.empty()) throw InputError("arguments", "at least one metric space required");
  return build_approx(xs, cfg.depth, cfg.branching, cfg.lambda);
}

Outcome approx_build(const RunConfig& cfg) {
  const AmalgamApprox a = build_from(cfg);
  const RegularStructure s = to_regular_structure(a);
  if (!cfg.out.empty()) write_bundle(s, cfg.out);
  Outcome o;
  o.result = {{"points", a.space.size()},
              {"nodes", a.nodes.size()},
              {"subsets", s.subsets.size()},
              {"residual", s.residual().size()},
              {"r0", a.r0},
              {"mu", a.mu},
              {"separation", a.separation}};
  o.text = "points: " + std::to_string(a.space.size()) + "\nnodes: " + std::to_string(a.nodes.size()) +
           "\nsubsets: " + std::to_string(s.subsets.size()) + "\n";
  return o;
}

Outcome approx_check(const RunConfig& cfg) { return report_outcome(check_conditions(build_from(cfg), cfg.tolerances())); }

Outcome regular_check(const RunConfig& cfg) {
  const RegularStructure s = read_bundle(input(cfg, 0));
  Outcome o = report_outcome(check_regularity(s, cfg.tolerances()));
  if (cfg.eps) {
    const QuotientProfile q = quotient_profile(s, *cfg.eps);
    o.result["quotient"] = to_json(q);
    o.text += "quotient: " + std::to_string(q.points) + " points, cantor_like " + yes_no(q.cantor_like) + "\n";
  }
  return o;
}

Outcome regular_merge(const RunConfig& cfg) {
  const RegularStructure s = read_bundle(input(cfg, 0));
  const MergeResult m = merge_families(s);
  if (!cfg.out.empty()) write_bundle(m.merged, cfg.out);
  Json ratios = Json::array();
  for (double r : m.ratios) ratios.push_back(number(r));
  std::ostringstream os;
  os << "merged subsets: " << m.merged.subsets.size() << "\nratio: " << m.ratio << "\n";
  return {0, os.str(), {{"subsets", m.merged.subsets.size()}, {"ratio", number(m.ratio)}, {"ratios", ratios}}};
}

Outcome label_build(const RunConfig& cfg) {
  const RegularStructure s = read_bundle(input(cfg, 0));
  TLabelling l;
  try {
    l = build_t_labelling(s, cfg.max_depth, cfg.tolerances());
  } catch (const LabellingError& e) {
    Json err = error_object("labelling", e.condition(), e.what());
    throw VerdictError{std::move(err), e.what()};
  }
  if (!cfg.out.empty()) write_file(cfg.out, labelling_json(l));
  Json parents = Json::array();
  for (const auto& n : l.nodes) parents.push_back(n.parent);
  return {0, "nodes: " + std::to_string(l.nodes.size()) + "\n",
          {{"nodes", l.nodes.size()}, {"parents", parents}, {"eps", number(l.eps)}}};
}

Outcome label_verify(const RunConfig& cfg) {
  const RegularStructure s = read_bundle(input(cfg, 0));
  const TLabelling l = parse_labelling(read_file(input(cfg, 1)));
  return report_outcome(verify_labelling(l, s, cfg.tolerances()));
}

void add_common(CLI::App* app, RunConfig& cfg, bool tolerances) {
  app->add_option("--report", cfg.report, "Write the JSON report here");
  app->add_option("--seed", cfg.seed, "Seed for randomized steps (recorded in the report)");
  if (tolerances) {
    app->add_option("--tol-boundary", cfg.tol_boundary, "Boundary gap for (a3)");
    app->add_option("--tol-density", cfg.tol_density, "Density gap for (a4)");
    app->add_option("--tol-separation", cfg.tol_separation, "Separation gap / linkage scale");
    app->add_option("--tol-null", cfg.tol_null, "Null-family diameter threshold");
    app->add_option("--tol-iso", cfg.tol_iso, "Shape comparison tolerance");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundaries of groups as dense amalgams, and finite approximations of them"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  RunConfig cfg;
  std::function<Outcome(const RunConfig&)> run;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  Outcome (*fn)(const RunConfig&), const std::string& args_help, bool tolerances = false) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->add_option("inputs", cfg.inputs, args_help)->required();
    add_common(sub, cfg, tolerances);
    sub->callback([&, fn, parent, name] {
      cfg.command = parent->get_name() + " " + name;
      run = fn;
    });
    return sub;
  };

  CLI::App* cox = app.add_subcommand("coxeter", "Coxeter systems")->require_subcommand(1);
  for (auto* s : {leaf(cox, "classify", "Finiteness and number of ends", coxeter_classify, "Coxeter JSON"),
                  leaf(cox, "nerve", "Nerve of the system", coxeter_nerve, "Coxeter JSON"),
                  leaf(cox, "boundary", "Boundary expression", coxeter_boundary, "Coxeter JSON")}) {
    s->add_option("--cap-vertices", cfg.cap_vertices, "Largest generator count accepted")->check(CLI::PositiveNumber);
  }
  cox->get_subcommand("nerve")->add_option("--dot", cfg.dot, "Write the nerve's 1-skeleton as DOT");

  CLI::App* nrv = app.add_subcommand("nerve", "Simplicial complexes")->require_subcommand(1);
  auto* dec = leaf(nrv, "decompose", "Terminal factors and infinity-largeness", nerve_decompose, "complex JSON");
  dec->add_option("--cap-vertices", cfg.cap_vertices, "Largest vertex count accepted")->check(CLI::PositiveNumber);
  dec->add_option("--dot", cfg.dot, "Write the 1-skeleton as DOT");

  CLI::App* gog = app.add_subcommand("gog", "Graphs of groups")->require_subcommand(1);
  leaf(gog, "reduce", "Collapse trivial edges", gog_reduce, "graph-of-groups JSON");
  for (auto* s : {leaf(gog, "check", "Elementarity and separation in a tree ball", gog_check, "graph-of-groups JSON"),
                  leaf(gog, "ball", "Bass-Serre tree ball", gog_ball, "graph-of-groups JSON")}) {
    s->add_option("--radius", cfg.radius, "Ball radius")->check(CLI::NonNegativeNumber);
    s->add_option("--base", cfg.base, "Base vertex name (default: first vertex)");
  }
  gog->get_subcommand("ball")->add_option("--dot", cfg.dot, "Write the ball as DOT");
  leaf(gog, "boundary", "Boundary expression of a non-elementary graph of groups", gog_boundary,
       "graph-of-groups JSON");

  CLI::App* am = app.add_subcommand("amalgam", "Boundary expressions")->require_subcommand(1);
  leaf(am, "normalize", "Normal form of an expression", amalgam_normalize, "expression");

  CLI::App* apx = app.add_subcommand("approx", "Finite dense-amalgam approximations")->require_subcommand(1);
  for (auto* s : {leaf(apx, "build", "Build and optionally write a bundle", approx_build, "metric space JSON files"),
                  leaf(apx, "check", "Check (a1)-(a5)", approx_check, "metric space JSON files", true)}) {
    s->add_option("--depth", cfg.depth, "Tree depth")->check(CLI::NonNegativeNumber);
    s->add_option("--branching", cfg.branching, "Children per node")->check(CLI::PositiveNumber);
    s->add_option("--lambda", cfg.lambda, "Scale factor per level");
  }
  apx->get_subcommand("build")->add_option("--out", cfg.out, "Bundle sidecar path (.json)");

  CLI::App* reg = app.add_subcommand("regular", "Regular structures")->require_subcommand(1);
  leaf(reg, "check", "Check (a1)-(a5)", regular_check, "bundle JSON", true)
      ->add_option("--eps", cfg.eps, "Also profile the quotient at this scale");
  leaf(reg, "merge", "Merge class families into one", regular_merge, "bundle JSON")
      ->add_option("--out", cfg.out, "Merged bundle sidecar path (.json)");

  CLI::App* lab = app.add_subcommand("label", "T-labellings")->require_subcommand(1);
  auto* lb = leaf(lab, "build", "Greedy labelling", label_build, "bundle JSON", true);
  lb->add_option("--max-depth", cfg.max_depth, "Deepest tree level")->check(CLI::NonNegativeNumber);
  lb->add_option("--out", cfg.out, "Labelling JSON path");
  leaf(lab, "verify", "Check (L1)-(L6)", label_verify, "bundle JSON, labelling JSON", true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << dump(error_object("usage", "arguments", e.what()));
    return 2;
  }

  Json doc = {{"tool", "dama"}, {"version", kVersion}, {"config", cfg.to_json()}};
  auto finish = [&](int status, const std::string& text) {
    std::cout << text;
    if (!cfg.report.empty()) {
      try {
        write_file(cfg.report, dump(doc));
      } catch (const InputError& e) {
        std::cout << dump(error_object("input", e.where(), e.what()));
        return 2;
      }
    }
    return status;
  };
  try {
    Outcome o = run(cfg);
    doc["result"] = std::move(o.result);
    doc["status"] = o.status;
    return finish(o.status, o.text);
  } catch (const VerdictError& e) {
    doc["result"] = e.error;
    doc["status"] = 1;
    return finish(1, dump(e.error));
  } catch (const InputError& e) {
    Json err = error_object("input", e.where(), e.what());
    doc["result"] = err;
    doc["status"] = 2;
    return finish(2, dump(err));
  } catch (const PreconditionError& e) {
    Json err = error_object("precondition", "", e.what());
    doc["result"] = err;
    doc["status"] = 2;
    return finish(2, dump(err));
  }
}
