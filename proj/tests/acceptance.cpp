// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: acceptance <path-to-dama> <data-dir>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dama/approx.hpp"
#include "dama/boundary.hpp"
#include "dama/characterize.hpp"
#include "dama/coxeter.hpp"
#include "dama/graph_of_groups.hpp"
#include "dama/io.hpp"
#include "dama/simplicial.hpp"
#include "gen.hpp"

using namespace dama;
namespace fs = std::filesystem;

namespace {

struct Result {
  bool pass = true;
  std::string summary;
};

std::string g_dama;
fs::path g_data;

std::string data(const std::string& name) { return (g_data / name).string(); }

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: normalizer ------------------------------------------------------------

// Mutable mirror of BoundaryExpr for the small-step rewriting engine.
struct Term {
  Kind kind = Kind::Empty;
  std::string name;
  unsigned traits = 0;
  std::vector<Term> args;
};

Term term_of(const BoundaryExpr& e) {
  Term t{e.kind(), e.name(), e.traits(), {}};
  for (const auto& a : e.args()) t.args.push_back(term_of(a));
  return t;
}

BoundaryExpr expr_of(const Term& t) {
  switch (t.kind) {
    case Kind::Atom:
      return BoundaryExpr::atom(t.name, t.traits);
    case Kind::Cantor:
      return BoundaryExpr::cantor();
    case Kind::PointPair:
      return BoundaryExpr::point_pair();
    case Kind::Empty:
      return BoundaryExpr::empty();
    case Kind::Amalgam:
      break;
  }
  std::vector<BoundaryExpr> args;
  for (const auto& a : t.args) args.push_back(expr_of(a));
  return BoundaryExpr::amalgam(std::move(args));
}

bool td_leaf(const Term& t) {
  return t.kind == Kind::Cantor || t.kind == Kind::PointPair ||
         (t.kind == Kind::Atom && (t.traits & trait::kTotallyDisconnected));
}

enum class Step { Flatten, DropEmpty, DropTd, ToCantor, Swap, Dedupe };

struct Redex {
  Term* node;
  Step step;
  std::size_t i;
};

void collect(Term& t, std::vector<Redex>& out) {
  if (t.kind != Kind::Amalgam) return;
  for (auto& a : t.args) collect(a, out);
  bool flat = true, solid = false;
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    const Term& a = t.args[i];
    if (a.kind == Kind::Amalgam) {
      flat = false;
      out.push_back({&t, Step::Flatten, i});
    }
    if (a.kind == Kind::Atom && !td_leaf(a)) solid = true;
    if (a.kind == Kind::Empty && t.args.size() >= 2) out.push_back({&t, Step::DropEmpty, i});
  }
  if (flat) {
    if (!solid) {
      out.push_back({&t, Step::ToCantor, 0});
    } else {
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (td_leaf(t.args[i])) out.push_back({&t, Step::DropTd, i});
      }
    }
  }
  for (std::size_t i = 0; i + 1 < t.args.size(); ++i) {
    const int c = compare(expr_of(t.args[i]), expr_of(t.args[i + 1]));
    if (c > 0) out.push_back({&t, Step::Swap, i});
    if (c == 0) out.push_back({&t, Step::Dedupe, i});
  }
}

void apply(const Redex& r) {
  auto& args = r.node->args;
  switch (r.step) {
    case Step::Flatten: {
      std::vector<Term> inner = std::move(args[r.i].args);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(r.i));
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(r.i), inner.begin(), inner.end());
      break;
    }
    case Step::DropEmpty:
    case Step::DropTd:
    case Step::Dedupe:
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(r.i));
      break;
    case Step::ToCantor:
      *r.node = Term{Kind::Cantor, "", 0, {}};
      break;
    case Step::Swap:
      std::swap(args[r.i], args[r.i + 1]);
      break;
  }
}

// Applies one uniformly chosen redex at a time until none is left.
std::optional<BoundaryExpr> rewrite_randomly(const BoundaryExpr& e, std::mt19937_64& rng) {
  Term t = term_of(e);
  for (int steps = 0; steps < 100000; ++steps) {
    std::vector<Redex> redexes;
    collect(t, redexes);
    if (redexes.empty()) return expr_of(t);
    apply(redexes[std::uniform_int_distribution<std::size_t>(0, redexes.size() - 1)(rng)]);
  }
  return std::nullopt;
}

Result criterion_normalizer() {
  const auto t0 = std::chrono::steady_clock::now();
  gen::ExprGen g(20240601);
  std::mt19937_64& rng = g.rng();
  std::size_t idempotence = 0, order = 0, identities = 0, checks = 0;
  auto amalgam = [](std::vector<BoundaryExpr> xs) { return BoundaryExpr::amalgam(std::move(xs)); };
  auto td = [&]() {
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0:
        return BoundaryExpr::cantor();
      case 1:
        return BoundaryExpr::point_pair();
      case 2:
        return g.td_atom();
      default:
        return BoundaryExpr::atom("Q", trait::kTwoPoint);
    }
  };
  auto expect = [&](const BoundaryExpr& a, const BoundaryExpr& b) {
    ++checks;
    if (!equal_normal(a, b)) ++identities;
  };

  const int kExpressions = 10000;
  for (int n = 0; n < kExpressions; ++n) {
    const BoundaryExpr e = g.next(5, 8);
    const BoundaryExpr nf = normalize(e);
    if (!(normalize(nf) == nf) || !is_normal_form(nf)) ++idempotence;
    for (int trial = 0; trial < 2; ++trial) {
      auto r = rewrite_randomly(e, rng);
      if (!r || !(*r == nf)) ++order;
    }

    std::vector<BoundaryExpr> xs;
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < k; ++i) xs.push_back(g.next(3, 3));
    auto shuffled = xs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    expect(amalgam(xs), amalgam(shuffled));
    for (int i = 0; i < k; ++i) {
      std::vector<BoundaryExpr> head(xs.begin(), xs.begin() + i), tail(xs.begin() + i, xs.end());
      head.push_back(amalgam(tail));
      expect(amalgam(xs), amalgam(head));
    }
    auto dup = xs;
    dup.insert(dup.begin(), xs.front());
    expect(amalgam(xs), amalgam(dup));
    auto with_td = xs;
    with_td.insert(with_td.begin() + std::uniform_int_distribution<int>(0, k)(rng), td());
    expect(amalgam(xs), amalgam(with_td));
    std::vector<BoundaryExpr> tds;
    for (int i = std::uniform_int_distribution<int>(1, 4)(rng); i > 0; --i) tds.push_back(td());
    expect(amalgam(tds), BoundaryExpr::cantor());
    expect(amalgam({BoundaryExpr::empty()}), BoundaryExpr::cantor());
    auto with_empty = xs;
    with_empty.insert(with_empty.begin(), BoundaryExpr::empty());
    expect(amalgam(with_empty), amalgam(xs));
  }
  const double secs = seconds_since(t0);
  Result r;
  r.pass = idempotence == 0 && order == 0 && identities == 0 && secs < 5.0;
  r.summary = std::to_string(kExpressions) + " expressions; idempotence failures " + std::to_string(idempotence) +
              ", random rewrite-order mismatches " + std::to_string(order) + ", identity failures " +
              std::to_string(identities) + "/" + std::to_string(checks) + "; " + fixed(secs) + " s (limit 5 s)";
  return r;
}

// ---- 2: Coxeter finiteness ------------------------------------------------------

Result criterion_finiteness() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& labels = gen::coxeter_labels();
  std::size_t systems = 0, disagreements = 0;
  auto check = [&](const CoxeterSystem& c) {
    ++systems;
    if (is_finite_type(c, c.all()) != gram_pd_test(c, c.all(), 1e-9)) ++disagreements;
  };
  for (int n = 1; n <= 4; ++n) {
    const int pairs = n * (n - 1) / 2;
    std::size_t total = 1;
    for (int p = 0; p < pairs; ++p) total *= labels.size();
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<gen::Entry> entries;
      std::size_t rest = code;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          entries.push_back({i, j, labels[rest % labels.size()]});
          rest /= labels.size();
        }
      }
      check(gen::coxeter(n, entries));
    }
  }
  const std::size_t exhaustive = systems;
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 10000; ++i) check(gen::random_coxeter(4, rng));
  const double secs = seconds_since(t0);
  Result r;
  r.pass = disagreements == 0 && secs < 30.0;
  r.summary = std::to_string(exhaustive) + " systems exhaustively (|S| <= 4) + " +
              std::to_string(systems - exhaustive) + " sampled at |S| = 4; disagreements " +
              std::to_string(disagreements) + "; " + fixed(secs) + " s (limit 30 s)";
  return r;
}

// ---- 3: terminal factors ----------------------------------------------------------

Result criterion_terminal_factors() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1789);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const SimplicialComplex c =
        i % 2 ? gen::random_complex(n, rng) : gen::random_graph_complex(n, 0.5, rng);
    const auto brute = maximally_full_irreducible(c);
    if (terminal_factors(c, rng) != brute || terminal_factors(c) != brute) ++mismatches;
  }
  const double secs = seconds_since(t0);
  Result r;
  r.pass = mismatches == 0 && secs < 60.0;
  r.summary = "100 complexes on <= 8 vertices; randomized recursion vs brute force mismatches " +
              std::to_string(mismatches) + "; " + fixed(secs) + " s (limit 60 s)";
  return r;
}

// ---- 4: Coxeter boundary goldens ----------------------------------------------------

Result criterion_coxeter_goldens() {
  struct Golden {
    const char* file;
    const char* expected;
    Kind kind;
  };
  const Golden goldens[] = {
      {"d_infty.json", "PointPair", Kind::PointPair},
      {"z2_squared.json", "Empty", Kind::Empty},
      {"right_angled_square.json", "dW{a,b,c,d}", Kind::Atom},
      {"path_3_3_inf.json", "Cantor", Kind::Cantor},
      {"two_right_angled_squares.json", "Amalgam(dW{a,b,c,d}, dW{e,f,g,h})", Kind::Amalgam},
  };
  Result r;
  int ok = 0;
  for (const auto& g : goldens) {
    const CoxeterSystem c = parse_coxeter(read_file(data(g.file)));
    const BoundaryExpr got = normalize(boundary_expression(c));
    const bool match = got == normalize(parse_expr(g.expected)) && got.kind() == g.kind;
    const bool one_ended = g.kind != Kind::Atom || classify_endedness(c).tag == Ends::OneEnded;
    if (match && one_ended) {
      ++ok;
    } else {
      r.pass = false;
      r.summary += std::string(g.file) + " gave " + to_string(got) + "; ";
    }
  }
  r.summary += std::to_string(ok) + "/5 goldens match after normalization";
  return r;
}

// ---- 5: infinity-largeness --------------------------------------------------------

// Every antichain of nonempty subsets of {0..n-1} covering all vertices.
void for_each_complex(int n, const std::function<void(const std::vector<VertexSet>&)>& fn) {
  const VertexSet full = (VertexSet{1} << n) - 1;
  std::vector<VertexSet> chosen;
  std::function<void(VertexSet, VertexSet)> rec = [&](VertexSet next, VertexSet covered) {
    if (next > full) {
      if (covered == full) fn(chosen);
      return;
    }
    rec(next + 1, covered);
    for (VertexSet c : chosen) {
      if (contains(c, next) || contains(next, c)) return;
    }
    chosen.push_back(next);
    rec(next + 1, covered | next);
    chosen.pop_back();
  };
  rec(1, 0);
}

Result criterion_infinity_large() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t complexes = 0, mismatches = 0;
  auto check = [&](const SimplicialComplex& c) {
    ++complexes;
    bool all_simplices = true;
    for (VertexSet f : terminal_factors(c)) all_simplices = all_simplices && c.is_simplex(f);
    if (all_simplices != is_infinity_large(c)) ++mismatches;
  };
  const int kExhaustive = 6;
  for (int n = 1; n <= kExhaustive; ++n) {
    const auto names = gen::vertex_names(n);
    for_each_complex(n, [&](const std::vector<VertexSet>& faces) {
      check(SimplicialComplex::from_masks(names, faces));
    });
  }
  const std::size_t exhaustive = complexes;
  std::mt19937_64 rng(8080);
  for (int i = 0; i < 100; ++i) {
    check(i % 2 ? gen::random_complex(8, rng) : gen::random_graph_complex(8, 0.45, rng));
  }
  Result r;
  r.pass = mismatches == 0;
  r.summary = std::to_string(exhaustive) + " complexes exhaustively (<= " + std::to_string(kExhaustive) +
              " vertices) + 100 random on 8 vertices; mismatches " + std::to_string(mismatches) + "; " +
              fixed(seconds_since(t0)) + " s";
  return r;
}

// ---- 6: Bass-Serre balls ------------------------------------------------------------

// Ball sizes in the (p, q)-biregular tree, starting at a degree-p vertex.
std::vector<std::size_t> biregular_sizes(std::size_t p, std::size_t q, int radius) {
  std::vector<std::size_t> out{1};
  std::size_t shell = 1;
  for (int j = 1; j <= radius; ++j) {
    shell = j == 1 ? p : shell * ((j % 2 == 0) ? q - 1 : p - 1);
    out.push_back(out.back() + shell);
  }
  return out;
}

Result criterion_balls() {
  const GraphOfGroups g = parse_graph_of_groups(read_file(data("gog_2_3.json")));
  const GraphOfGroups dinf = parse_graph_of_groups(read_file(data("gog_dinfty.json")));
  const int base = g.vertex_index("A");
  const auto& e = g.edges().front();
  const auto valence = [&](int v) { return g.vertices()[v].order / e.edge_order; };
  const auto expected = biregular_sizes(valence(base), valence(g.vertex_index("B")), 6);
  Result r;
  std::string got;
  for (int radius = 0; radius <= 6; ++radius) {
    const std::size_t n = bass_serre_ball(g, base, radius).nodes.size();
    got += (radius ? "," : "") + std::to_string(n);
    if (n != expected[radius]) r.pass = false;
  }
  if (expected != std::vector<std::size_t>{1, 3, 7, 11, 19, 27, 43}) r.pass = false;
  const bool dinf_elementary = !is_non_elementary(dinf);
  const bool g_non_elementary = is_non_elementary(g);
  r.pass = r.pass && dinf_elementary && g_non_elementary;
  r.summary = "ball sizes r=0..6: " + got + " (recursion oracle agrees: " + (r.pass ? "yes" : "no") +
              "); D-infinity splitting elementary: " + (dinf_elementary ? "yes" : "no") +
              "; (2,3) splitting non-elementary: " + (g_non_elementary ? "yes" : "no");
  return r;
}

// ---- 7: approximation suite ---------------------------------------------------------

Result criterion_approx() {
  Result r;
  double slowest = 0.0;
  int passed = 0;
  const std::vector<std::pair<std::string, FiniteMetricSpace>> spaces = {
      {"two_point", parse_metric_space(read_file(data("two_point.json")))},
      {"circle5", parse_metric_space(read_file(data("circle5.json")))}};
  for (const auto& [name, x] : spaces) {
    const auto t0 = std::chrono::steady_clock::now();
    const AmalgamApprox a = build_approx({x}, 3, 3, 1.0 / 3.0);
    const ConditionReport rep = check_conditions(a);
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    if (rep.all_pass() && secs < 10.0) {
      ++passed;
    } else {
      r.pass = false;
      for (const auto& c : rep.conditions) {
        if (c.verdict != Verdict::Pass) r.summary += name + " " + c.name + " " + to_string(c.verdict) + "; ";
      }
    }
  }
  ApproxOptions opts;
  opts.check_lambda = false;
  const ConditionReport control = check_conditions(build_approx({spaces[0].second}, 3, 3, 1.0, opts));
  const bool control_fails = control.find("a2")->verdict == Verdict::Fail;
  r.pass = r.pass && control_fails;
  r.summary += std::to_string(passed) + "/2 spaces pass (a1)-(a5) at depth 3, branching 3, lambda 1/3; lambda=1 control " +
               (control_fails ? "fails (a2)" : "does NOT fail (a2)") + "; slowest build+check " + fixed(slowest) +
               " s (limit 10 s)";
  return r;
}

// ---- 8: characterization round trip ----------------------------------------------------

Result criterion_round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  int runs = 0, ok = 0;
  const FiniteMetricSpace spaces[] = {two_point(), circle_net(3), circle_net(5)};
  for (double lambda : {1.0 / 3.0, 0.25}) {
    for (const auto& x : spaces) {
      for (int depth = 0; depth <= 3; ++depth) {
        for (int b = 1; b <= 3; ++b) {
          ++runs;
          const RegularStructure s = to_regular_structure(build_approx({x}, depth, b, lambda));
          std::string why;
          if (!check_regularity(s).all_pass()) {
            why = "regularity";
          } else {
            try {
              const TLabelling l = build_t_labelling(s, depth);
              if (l.nodes.size() != s.subsets.size()) {
                why = "subsets left unlabelled";
              } else {
                for (const auto& c : verify_labelling(l, s).conditions) {
                  if (c.verdict != Verdict::Pass) why += c.name + " ";
                }
              }
            } catch (const LabellingError& e) {
              why = "builder error " + e.condition();
            }
          }
          if (why.empty()) {
            ++ok;
          } else {
            r.pass = false;
            r.summary += "|X|=" + std::to_string(x.size()) + " depth " + std::to_string(depth) + " b " +
                         std::to_string(b) + " lambda " + fixed(lambda) + ": " + why + "; ";
          }
        }
      }
    }
  }
  r.summary += std::to_string(ok) + "/" + std::to_string(runs) +
               " round trips (|X| in {2,3,5}, depth <= 3, branching <= 3, lambda in {1/3, 1/4}); " +
               fixed(seconds_since(t0)) + " s";
  return r;
}

// ---- 9: merging ------------------------------------------------------------------------

Result criterion_merge() {
  Result r;
  int runs = 0, ok = 0;
  double worst = 0.0;
  const std::vector<std::pair<FiniteMetricSpace, FiniteMetricSpace>> pairs = {
      {two_point(), circle_net(5)}, {circle_net(3), two_point()}, {two_point(), two_point()}};
  for (double lambda : {1.0 / 3.0, 0.25}) {
    for (const auto& [x1, x2] : pairs) {
      for (int depth = 0; depth <= 3; ++depth) {
        for (int b = 1; b <= 3; ++b) {
          ++runs;
          const RegularStructure s = to_regular_structure(build_approx({x1, x2}, depth, b, lambda));
          const ConditionReport before = check_regularity(s);
          const MergeResult m = merge_families(s);
          const ConditionReport after = check_regularity(m.merged);
          worst = std::max(worst, m.ratio);
          const bool null_kept = before.find("a2")->verdict != Verdict::Pass ||
                                 after.find("a2")->verdict == Verdict::Pass;
          const bool dense = after.find("a4")->verdict == Verdict::Pass;
          if (m.ratio <= 3.0 && null_kept && dense) {
            ++ok;
          } else {
            r.pass = false;
            r.summary += "depth " + std::to_string(depth) + " b " + std::to_string(b) + " ratio " +
                         fixed(m.ratio) + (null_kept ? "" : " null lost") + (dense ? "" : " density lost") + "; ";
          }
        }
      }
    }
  }
  r.summary += std::to_string(ok) + "/" + std::to_string(runs) +
               " two-class merges keep null and density verdicts; worst ratio " + fixed(worst) + " (limit 3)";
  return r;
}

// ---- 10: CLI determinism ----------------------------------------------------------------

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

struct CliCase {
  std::vector<std::string> args;
  int status;
  std::string stdout_text;  // empty: only compared between runs
};

Result criterion_cli() {
  const fs::path root = fs::temp_directory_path() / ("dama_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<CliCase> cases = {
      {{"coxeter", "boundary", data("d_infty.json")}, 0, "PointPair\n"},
      {{"coxeter", "boundary", data("z2_squared.json")}, 0, "Empty\n"},
      {{"coxeter", "boundary", data("right_angled_square.json")}, 0, "dW{a,b,c,d}\n"},
      {{"coxeter", "boundary", data("path_3_3_inf.json")}, 0, "Cantor\n"},
      {{"coxeter", "boundary", data("two_right_angled_squares.json")}, 0, "Amalgam(dW{a,b,c,d}, dW{e,f,g,h})\n"},
      {{"coxeter", "classify", data("path_3_3_inf.json")}, 0, ""},
      {{"coxeter", "nerve", data("two_right_angled_squares.json"), "--dot", "nerve.dot"}, 0, ""},
      {{"amalgam", "normalize", "Amalgam(Empty)"}, 0, "Cantor\n"},
      {{"coxeter", "classify", "malformed.json"}, 2, ""},
      {{"nerve", "decompose", data("square_complex.json")}, 0, ""},
      {{"gog", "ball", data("gog_2_3.json"), "--radius", "6", "--dot", "ball.dot"}, 0, "sizes: 1 3 7 11 19 27 43\n"},
      {{"gog", "reduce", data("gog_dinfty.json")}, 0, ""},
      {{"gog", "boundary", data("gog_surfaces.json")}, 0, "Amalgam(dS, dT)\n"},
      {{"approx", "check", data("two_point.json"), "--depth", "3", "--branching", "3"}, 0, ""},
      {{"approx", "build", data("two_point.json"), "--depth", "2", "--branching", "2", "--lambda", "0.25", "--out",
        "single.json"},
       0, ""},
      {{"regular", "check", "single.json", "--eps", "0.0625"}, 0, ""},
      {{"label", "build", "single.json", "--max-depth", "2", "--out", "labelling.json"}, 0, ""},
      {{"label", "verify", "single.json", "labelling.json"}, 0, ""},
      {{"approx", "build", data("two_point.json"), data("circle5.json"), "--depth", "2", "--branching", "2", "--out",
        "pair.json"},
       0, ""},
      {{"regular", "merge", "pair.json", "--out", "merged.json"}, 0, ""},
      {{"regular", "check", "merged.json"}, 0, ""},
  };
  Result r;
  int matched = 0;
  for (int run = 1; run <= 2; ++run) {
    const fs::path dir = root / ("run" + std::to_string(run));
    fs::create_directories(dir);
    write_file((dir / "malformed.json").string(), "{\"generators\": [\"a\"");
    for (std::size_t i = 0; i < cases.size(); ++i) {
      std::string cmd = "cd " + quote(dir.string()) + " && " + quote(g_dama);
      for (const auto& a : cases[i].args) cmd += " " + quote(a);
      const std::string id = std::to_string(i);
      cmd += " --seed 11 --report report" + id + ".json > stdout" + id + ".txt 2>&1";
      const int raw = std::system(cmd.c_str());
      const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
      const std::string out = read_file((dir / ("stdout" + id + ".txt")).string());
      if (run == 1) {
        const bool ok = status == cases[i].status && (cases[i].stdout_text.empty() || out == cases[i].stdout_text);
        if (ok) {
          ++matched;
        } else {
          r.pass = false;
          r.summary += "case " + id + " (" + cases[i].args[0] + " " + cases[i].args[1] + ") exit " +
                       std::to_string(status) + "; ";
        }
      }
    }
  }
  // Every artifact of run 1 must be byte-identical in run 2.
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(root / "run1")) {
    ++files;
    const fs::path other = root / "run2" / entry.path().filename();
    if (!fs::exists(other) || read_file(entry.path().string()) != read_file(other.string())) {
      ++differing;
      r.summary += entry.path().filename().string() + " differs; ";
    }
  }
  if (differing > 0 || files == 0) r.pass = false;
  fs::remove_all(root);
  r.summary += std::to_string(matched) + "/" + std::to_string(cases.size()) + " CLI goldens; " +
               std::to_string(files - differing) + "/" + std::to_string(files) +
               " output files byte-identical across two runs";
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <path-to-dama> <data-dir>\n";
    return 2;
  }
  g_dama = fs::absolute(argv[1]).string();
  g_data = fs::absolute(argv[2]);
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"normalizer algebra", criterion_normalizer},
      {"Coxeter finiteness vs Gram oracle", criterion_finiteness},
      {"terminal factors vs brute force", criterion_terminal_factors},
      {"Coxeter boundary goldens", criterion_coxeter_goldens},
      {"infinity-largeness vs simplex factors", criterion_infinity_large},
      {"Bass-Serre balls and elementarity", criterion_balls},
      {"approximation suite", criterion_approx},
      {"characterization round trip", criterion_round_trip},
      {"family merging", criterion_merge},
      {"CLI goldens and determinism", criterion_cli},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) ++failures;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << r.summary << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
