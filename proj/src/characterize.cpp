#include "dama/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace dama {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Group index per point: subset index, or subsets.size() + rank among the
// residual points.
std::vector<std::size_t> group_of(const RegularStructure& s, std::size_t& groups) {
  std::vector<std::size_t> g(s.space.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < s.subsets.size(); ++i) {
    for (std::size_t p : s.subsets[i]) g[p] = i;
  }
  groups = s.subsets.size();
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (g[p] == std::numeric_limits<std::size_t>::max()) g[p] = groups++;
  }
  return g;
}

// Set distances between groups (subsets, then residual singletons).
std::vector<double> group_distances(const RegularStructure& s, const std::vector<std::size_t>& g,
                                    std::size_t groups) {
  std::vector<double> d(groups * groups, kInf);
  for (std::size_t i = 0; i < groups; ++i) d[i * groups + i] = 0.0;
  const std::size_t n = s.space.size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (g[p] == g[q]) continue;
      const double v = s.space.d(p, q);
      double& a = d[g[p] * groups + g[q]];
      if (v < a) a = d[g[q] * groups + g[p]] = v;
    }
  }
  return d;
}

double smallest_positive_diameter(const RegularStructure& s) {
  double best = kInf;
  for (const auto& z : s.subsets) {
    const double dm = s.space.diameter(z);
    if (dm > 0.0) best = std::min(best, dm);
  }
  if (best < kInf) return best;
  for (std::size_t p = 0; p < s.space.size(); ++p) {
    for (std::size_t q = p + 1; q < s.space.size(); ++q) best = std::min(best, s.space.d(p, q));
  }
  return best < kInf ? best : 0.0;
}

// Epsilon-linkage components merged so that every subset lies in one atom.
struct Atoms {
  std::vector<std::size_t> of_point;
  std::vector<std::vector<std::size_t>> points;
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::vector<std::size_t>> residual;
};

Atoms make_atoms(const RegularStructure& s, double eps) {
  const std::size_t n = s.space.size();
  UnionFind uf(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (s.space.d(p, q) < eps) uf.unite(p, q);
    }
  }
  for (const auto& z : s.subsets) {
    for (std::size_t p : z) uf.unite(z.front(), p);
  }
  Atoms a;
  a.of_point.assign(n, 0);
  std::vector<std::size_t> id(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t r = uf.find(p);
    if (id[r] == std::numeric_limits<std::size_t>::max()) {
      id[r] = a.points.size();
      a.points.emplace_back();
    }
    a.of_point[p] = id[r];
    a.points[id[r]].push_back(p);
  }
  a.subsets.resize(a.points.size());
  a.residual.resize(a.points.size());
  for (std::size_t i = 0; i < s.subsets.size(); ++i) a.subsets[a.of_point[s.subsets[i].front()]].push_back(i);
  for (std::size_t p : s.residual()) a.residual[a.of_point[p]].push_back(p);
  return a;
}

// Is some bijection Z -> W distance preserving after normalizing by the
// diameters, within `tol`? Backtracking with partial consistency checks.
bool same_shape(const FiniteMetricSpace& sp, const std::vector<std::size_t>& z,
                const std::vector<std::size_t>& w, double tol) {
  if (z.size() != w.size()) return false;
  const double dz = sp.diameter(z), dw = sp.diameter(w);
  if (dz == 0.0 || dw == 0.0) return dz == dw;
  const std::size_t n = z.size();
  std::vector<std::size_t> image(n);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        ok = std::abs(sp.d(z[i], z[k]) / dz - sp.d(w[j], w[image[k]]) / dw) <= tol;
      }
      if (!ok) continue;
      used[j] = 1;
      image[i] = j;
      if (self(self, i + 1)) return true;
      used[j] = 0;
    }
    return false;
  };
  return rec(rec, 0);
}

// Largest gap between sorted normalized distance multisets.
double multiset_gap(const FiniteMetricSpace& sp, const std::vector<std::size_t>& z,
                    const std::vector<std::size_t>& w) {
  auto profile = [&](const std::vector<std::size_t>& x) {
    const double dm = sp.diameter(x);
    std::vector<double> v;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = i + 1; j < x.size(); ++j) v.push_back(dm > 0.0 ? sp.d(x[i], x[j]) / dm : 0.0);
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto a = profile(z), b = profile(w);
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

constexpr std::size_t kExactShapeLimit = 8;

}  // namespace

int RegularStructure::class_count() const {
  int k = 0;
  for (int c : classes) k = std::max(k, c + 1);
  return k;
}

std::vector<std::size_t> RegularStructure::residual() const {
  std::vector<char> in(space.size(), 0);
  for (const auto& z : subsets) {
    for (std::size_t p : z) in[p] = 1;
  }
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < in.size(); ++p) {
    if (!in[p]) out.push_back(p);
  }
  return out;
}

void RegularStructure::validate() const {
  if (classes.size() != subsets.size()) {
    throw InputError("classes", "expected one class per subset");
  }
  std::vector<char> seen(space.size(), 0);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const std::string where = "subsets/" + std::to_string(i);
    if (subsets[i].empty()) throw InputError(where, "empty subset");
    if (!std::is_sorted(subsets[i].begin(), subsets[i].end())) throw InputError(where, "subset not sorted");
    for (std::size_t p : subsets[i]) {
      if (p >= space.size()) throw InputError(where, "point index " + std::to_string(p) + " out of range");
      if (seen[p]) throw InputError(where, "point " + space.name(p) + " lies in two subsets");
      seen[p] = 1;
    }
    if (classes[i] < 0) throw InputError("classes/" + std::to_string(i), "negative class");
  }
  const int k = class_count();
  for (int c = 0; c < k; ++c) {
    if (std::find(classes.begin(), classes.end(), c) == classes.end()) {
      throw InputError("classes", "class " + std::to_string(c) + " has no subset");
    }
  }
}

RegularStructure to_regular_structure(const AmalgamApprox& a) {
  RegularStructure s;
  s.space = a.space;
  for (std::size_t t = 0; t < a.nodes.size(); ++t) {
    for (std::size_t c = 0; c < a.class_count(); ++c) {
      auto pts = a.copy_points(static_cast<int>(t), static_cast<int>(c));
      std::sort(pts.begin(), pts.end());
      s.subsets.push_back(std::move(pts));
      s.classes.push_back(static_cast<int>(c));
    }
  }
  return s;
}

double default_epsilon(const RegularStructure& s) { return 0.5 * smallest_positive_diameter(s); }

ConditionReport check_regularity(const RegularStructure& s, const ConditionTolerances& tol) {
  s.validate();
  ConditionReport rep;
  const FiniteMetricSpace& sp = s.space;
  const std::size_t n = sp.size();
  const std::size_t m = s.subsets.size();
  const int k = s.class_count();
  std::vector<double> diam(m);
  for (std::size_t i = 0; i < m; ++i) diam[i] = sp.diameter(s.subsets[i]);
  std::size_t groups = 0;
  const auto g = group_of(s, groups);
  const double floor = 2.0 * smallest_positive_diameter(s);
  auto allowed_at = [&](std::size_t p) { return g[p] < m ? std::max(floor, 2.0 * diam[g[p]]) : floor; };

  {  // (a1) members of a class share one shape up to scale.
    ConditionResult r{"a1"};
    double proxy_gap = 0.0;
    for (int c = 0; c < k; ++c) {
      std::size_t first = m;
      for (std::size_t i = 0; i < m; ++i) {
        if (s.classes[i] != c) continue;
        if (first == m) {
          first = i;
          continue;
        }
        const auto& z = s.subsets[first];
        const auto& w = s.subsets[i];
        bool ok;
        if (z.size() != w.size()) {
          ok = false;
        } else if (z.size() <= kExactShapeLimit) {
          ok = same_shape(sp, z, w, tol.iso);
        } else {
          r.approximate = true;
          const double gap = multiset_gap(sp, z, w);
          proxy_gap = std::max(proxy_gap, gap);
          ok = gap <= tol.iso;
        }
        if (!ok) r.offenders.push_back(i);
      }
    }
    r.achieved = static_cast<double>(r.offenders.size());
    r.allowed = 0.0;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = "subsets whose normalized distances match no permutation of their class's first member (tol " +
               fmt(tol.iso) + ")";
    if (r.approximate) {
      r.detail += "; subsets above " + std::to_string(kExactShapeLimit) +
                  " points compared by sorted distance profiles";
      r.metrics["profile_gap"] = proxy_gap;
    }
    rep.conditions.push_back(std::move(r));
  }

  {  // (a2) diameters fall below the null threshold after a prefix.
    ConditionResult r{"a2"};
    const double max_diam = m ? *std::max_element(diam.begin(), diam.end()) : 0.0;
    const double null = tol.null_diameter ? *tol.null_diameter : 0.5 * max_diam;
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return diam[a] > diam[b]; });
    std::size_t prefix = 0;
    while (prefix < m && diam[order[prefix]] >= null) ++prefix;
    const bool pass = m <= 1 || prefix < m;
    if (!pass) r.offenders.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(prefix));
    r.achieved = static_cast<double>(prefix);
    r.allowed = m ? static_cast<double>(m - 1) : 0.0;
    r.verdict = pass ? Verdict::Pass : Verdict::Fail;
    r.detail = m <= 1 ? "vacuous: fewer than two subsets"
                      : std::to_string(prefix) + " of " + std::to_string(m) +
                            " subsets have diameter >= " + fmt(null) + " (must leave some below)";
    r.metrics["null_diameter"] = null;
    r.metrics["prefix"] = static_cast<double>(prefix);
    rep.conditions.push_back(std::move(r));
  }

  auto ratio_result = [](ConditionResult r, const std::vector<double>& gaps, const std::vector<double>& allowed,
                         const std::vector<std::size_t>& who, const std::string& what) {
    double worst = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      worst = std::max(worst, allowed[i] > 0.0 ? gaps[i] / allowed[i] : (gaps[i] > 0.0 ? kInf : 0.0));
      if (gaps[i] > allowed[i]) r.offenders.push_back(who[i]);
    }
    r.achieved = worst;
    r.allowed = 1.0;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = what;
    return r;
  };
  const std::string default_rule = "max(2 diam(own subset), 2 * smallest positive diameter)";

  {  // (a3) subset points have a point outside their subset nearby.
    std::vector<double> gaps, allowed;
    std::vector<std::size_t> who;
    for (std::size_t p = 0; p < n; ++p) {
      if (g[p] >= m) continue;
      double best = kInf;
      for (std::size_t q = 0; q < n; ++q) {
        if (g[q] != g[p]) best = std::min(best, sp.d(p, q));
      }
      gaps.push_back(best);
      allowed.push_back(tol.boundary_gap ? *tol.boundary_gap : allowed_at(p));
      who.push_back(p);
    }
    rep.conditions.push_back(ratio_result(
        {"a3"}, gaps, allowed, who,
        "max distance from a subset point to the outside / " +
            (tol.boundary_gap ? fmt(*tol.boundary_gap) : default_rule)));
  }

  {  // (a4) every point is near a subset of each class.
    std::vector<double> gaps, allowed;
    std::vector<std::size_t> who;
    for (int c = 0; c < k; ++c) {
      for (std::size_t p = 0; p < n; ++p) {
        double best = kInf;
        for (std::size_t q = 0; q < n; ++q) {
          if (g[q] < m && s.classes[g[q]] == c) best = std::min(best, sp.d(p, q));
        }
        gaps.push_back(best);
        allowed.push_back(tol.density_gap ? *tol.density_gap : allowed_at(p));
        who.push_back(p);
      }
    }
    rep.conditions.push_back(ratio_result(
        {"a4"}, gaps, allowed, who,
        "max distance to a subset of each class / " + (tol.density_gap ? fmt(*tol.density_gap) : default_rule)));
  }

  {  // (a5) each saturated epsilon-atom holds one subset or one residual point.
    ConditionResult r{"a5"};
    const double eps = tol.separation_gap ? *tol.separation_gap : default_epsilon(s);
    const Atoms atoms = make_atoms(s, eps);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < atoms.points.size(); ++i) {
      if (atoms.subsets[i].size() + atoms.residual[i].size() == 1) continue;
      ++bad;
      r.offenders.insert(r.offenders.end(), atoms.subsets[i].begin(), atoms.subsets[i].end());
    }
    std::sort(r.offenders.begin(), r.offenders.end());
    double min_gap = kInf;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (atoms.of_point[p] != atoms.of_point[q]) min_gap = std::min(min_gap, sp.d(p, q));
      }
    }
    r.achieved = static_cast<double>(bad);
    r.allowed = 0.0;
    r.verdict = bad == 0 ? Verdict::Pass : Verdict::Fail;
    r.detail = "atoms (epsilon-linkage components merged along subsets, epsilon " + fmt(eps) +
               ") holding more than one subset or residual point";
    r.metrics["epsilon"] = eps;
    r.metrics["atoms"] = static_cast<double>(atoms.points.size());
    if (min_gap < kInf) r.metrics["min_atom_gap"] = min_gap;
    rep.conditions.push_back(std::move(r));
  }
  return rep;
}

MergeResult merge_families(const RegularStructure& s) {
  s.validate();
  const int k = s.class_count();
  if (k < 2) throw PreconditionError("merging needs at least two classes");
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < s.subsets.size(); ++i) members[s.classes[i]].push_back(i);
  for (int c = 1; c < k; ++c) {
    if (members[c].size() != members[0].size()) {
      throw PreconditionError("class " + std::to_string(c) + " has " + std::to_string(members[c].size()) +
                              " subsets, class 0 has " + std::to_string(members[0].size()));
    }
  }
  std::size_t groups = 0;
  const auto g = group_of(s, groups);
  const auto gd = group_distances(s, g, groups);
  std::vector<char> used(s.subsets.size(), 0);

  MergeResult out;
  out.merged.space = s.space;
  for (std::size_t z : members[0]) {
    used[z] = 1;
    std::vector<std::size_t> w = s.subsets[z];
    for (int c = 1; c < k; ++c) {
      std::size_t best = s.subsets.size();
      for (std::size_t y : members[c]) {
        if (used[y]) continue;
        if (best == s.subsets.size() || gd[z * groups + y] < gd[z * groups + best]) best = y;
      }
      used[best] = 1;
      w.insert(w.end(), s.subsets[best].begin(), s.subsets[best].end());
    }
    std::sort(w.begin(), w.end());
    const double dz = s.space.diameter(s.subsets[z]);
    const double dw = s.space.diameter(w);
    const double ratio = dz > 0.0 ? dw / dz : (dw > 0.0 ? kInf : 1.0);
    out.ratios.push_back(ratio);
    out.ratio = std::max(out.ratio, ratio);
    out.merged.subsets.push_back(std::move(w));
    out.merged.classes.push_back(0);
  }
  return out;
}

QuotientProfile quotient_profile(const RegularStructure& s, double eps) {
  s.validate();
  if (!(eps > 0.0)) throw PreconditionError("quotient scale must be positive");
  std::size_t groups = 0;
  const auto g = group_of(s, groups);
  QuotientProfile qp;
  qp.points = groups;
  qp.eps = eps;
  qp.metric = floyd_warshall(group_distances(s, g, groups), groups);
  const auto& d = qp.metric;

  for (std::size_t q = 0; q < groups; ++q) {
    const double sigma = q < s.subsets.size() ? s.space.diameter(s.subsets[q]) : 0.0;
    double nearest = kInf;
    for (std::size_t r = 0; r < groups; ++r) {
      if (r != q) nearest = std::min(nearest, d[q * groups + r]);
    }
    if (nearest > std::max(eps, 2.0 * sigma)) qp.isolated.push_back(q);
  }
  qp.no_isolated = qp.isolated.empty() ? Verdict::Pass : Verdict::Fail;

  UnionFind uf(groups);
  for (std::size_t q = 0; q < groups; ++q) {
    for (std::size_t r = q + 1; r < groups; ++r) {
      if (d[q * groups + r] < 0.5 * eps) uf.unite(q, r);
    }
  }
  for (std::size_t q = 0; q < groups; ++q) {
    for (std::size_t r = q + 1; r < groups; ++r) {
      if (d[q * groups + r] >= eps && uf.find(q) == uf.find(r)) ++qp.linked_far_pairs;
    }
  }
  qp.separated = qp.linked_far_pairs == 0 ? Verdict::Pass : Verdict::Fail;
  qp.cantor_like = groups >= 2 && qp.no_isolated == Verdict::Pass && qp.separated == Verdict::Pass;
  return qp;
}

TLabelling build_t_labelling(const RegularStructure& s, int max_depth, const ConditionTolerances& tol) {
  if (max_depth < 0) throw PreconditionError("max_depth must be >= 0");
  if (s.subsets.empty()) throw PreconditionError("labelling needs a non-empty family");
  const ConditionReport reg = check_regularity(s, tol);
  if (!reg.all_pass()) {
    std::string failed;
    for (const auto& c : reg.conditions) {
      if (c.verdict != Verdict::Pass) failed += (failed.empty() ? "" : ",") + c.name;
    }
    throw LabellingError("regularity", "regularity failed: " + failed);
  }
  const FiniteMetricSpace& sp = s.space;
  const std::size_t m = s.subsets.size();
  const double eps = tol.separation_gap ? *tol.separation_gap : default_epsilon(s);
  const Atoms atoms = make_atoms(s, eps);
  const std::size_t na = atoms.points.size();

  std::vector<double> ad(na * na, kInf);
  for (std::size_t p = 0; p < sp.size(); ++p) {
    for (std::size_t q = p + 1; q < sp.size(); ++q) {
      const std::size_t a = atoms.of_point[p], b = atoms.of_point[q];
      if (a == b) continue;
      const double v = sp.d(p, q);
      if (v < ad[a * na + b]) ad[a * na + b] = ad[b * na + a] = v;
    }
  }
  std::size_t groups = 0;
  const auto g = group_of(s, groups);
  const auto gd = group_distances(s, g, groups);
  std::vector<double> diam(m);
  for (std::size_t i = 0; i < m; ++i) diam[i] = sp.diameter(s.subsets[i]);
  std::vector<std::size_t> atom_of_subset(m);
  for (std::size_t i = 0; i < m; ++i) atom_of_subset[i] = atoms.of_point[s.subsets[i].front()];

  TLabelling l;
  l.eps = eps;
  std::vector<char> used(m, 0);
  std::vector<std::vector<std::size_t>> region_atoms;

  // d_s = min(diam Y_s, 3^-(m-i+1) d(Y_i, Y_{u_i}) for i = 1..m) along the
  // path t0 = u_0, ..., u_m = s, with Y_i the i-th member of the family.
  auto radius_for = [&](const std::vector<int>& path, std::size_t subset) {
    const std::size_t depth = path.size() + 1;  // path holds u_1..u_{m-1}
    double r = diam[subset];
    double w = 1.0 / 3.0;
    for (std::size_t i = depth; i >= 1; --i, w /= 3.0) {
      const std::size_t ui = i == depth ? subset : l.nodes[path[i - 1]].subset;
      if (i - 1 < m) r = std::min(r, w * gd[(i - 1) * groups + ui]);
    }
    return r;
  };
  auto finish_node = [&](TLabelling::Node& node, const std::vector<std::size_t>& reg_atoms) {
    for (std::size_t a : reg_atoms) node.region.insert(node.region.end(), atoms.points[a].begin(), atoms.points[a].end());
    std::sort(node.region.begin(), node.region.end());
    double far = 0.0;
    for (std::size_t x : node.region) far = std::max(far, sp.set_distance({x}, s.subsets[node.subset]));
    node.containment = node.radius > 0.0 ? far / node.radius : (far > 0.0 ? kInf : 0.0);
  };

  {
    TLabelling::Node root;
    root.subset = 0;
    root.radius = diam[0];
    std::vector<std::size_t> all(na);
    std::iota(all.begin(), all.end(), 0);
    finish_node(root, all);
    l.nodes.push_back(std::move(root));
    region_atoms.push_back(std::move(all));
    used[0] = 1;
  }

  for (std::size_t ti = 0; ti < l.nodes.size(); ++ti) {
    const std::size_t yt = l.nodes[ti].subset;
    std::vector<char> avail(na, 0);
    for (std::size_t a : region_atoms[ti]) avail[a] = 1;
    avail[atom_of_subset[yt]] = 0;
    auto leftover_residual = [&]() {
      std::size_t count = 0;
      for (std::size_t a = 0; a < na; ++a) {
        if (avail[a]) count += atoms.residual[a].size();
      }
      return count;
    };
    if (l.nodes[ti].depth == max_depth) {
      l.nodes[ti].leftover = leftover_residual();
      continue;
    }
    std::vector<std::size_t> cands;
    for (std::size_t i = 0; i < m; ++i) {
      if (!used[i] && avail[atom_of_subset[i]]) cands.push_back(i);
    }
    std::stable_sort(cands.begin(), cands.end(), [&](std::size_t a, std::size_t b) { return diam[a] > diam[b]; });

    std::vector<int> path;  // u_1 .. u_{depth(t)}
    for (int u = static_cast<int>(ti); u > 0; u = l.nodes[u].parent) path.push_back(u);
    std::reverse(path.begin(), path.end());

    for (std::size_t ys : cands) {
      const std::size_t start = atom_of_subset[ys];
      if (!avail[start]) continue;  // claimed by an earlier sibling's region
      if (diam[yt] > 0.0 && !(diam[ys] < 0.5 * diam[yt])) {
        throw LabellingError("t1", "subset " + std::to_string(ys) + " (diameter " + fmt(diam[ys]) +
                                       ") is not below half of subset " + std::to_string(yt) + " (diameter " +
                                       fmt(diam[yt]) + ")");
      }
      const double ds = radius_for(path, ys);
      std::vector<std::size_t> hull{start};
      avail[start] = 0;
      for (std::size_t h = 0; h < hull.size(); ++h) {
        for (std::size_t b = 0; b < na; ++b) {
          if (avail[b] && ad[hull[h] * na + b] < ds) {
            avail[b] = 0;
            hull.push_back(b);
          }
        }
      }
      std::sort(hull.begin(), hull.end());
      TLabelling::Node child;
      child.parent = static_cast<int>(ti);
      child.depth = l.nodes[ti].depth + 1;
      child.subset = ys;
      child.radius = ds;
      finish_node(child, hull);
      used[ys] = 1;
      l.nodes[ti].children.push_back(static_cast<int>(l.nodes.size()));
      l.nodes.push_back(std::move(child));
      region_atoms.push_back(std::move(hull));
    }
    const std::size_t left = leftover_residual();
    if (left > 0 && !l.nodes[ti].children.empty()) {
      throw LabellingError("t4", std::to_string(left) + " residual points in the region of subset " +
                                     std::to_string(yt) + " are not covered by any successor region");
    }
    l.nodes[ti].leftover = left;
  }

  std::vector<std::size_t> unused;
  for (std::size_t i = 0; i < m; ++i) {
    if (!used[i]) unused.push_back(i);
  }
  if (!unused.empty()) {
    std::string list;
    for (std::size_t i : unused) list += (list.empty() ? "" : ",") + std::to_string(i);
    throw LabellingError("r1", "subsets never labelled within depth " + std::to_string(max_depth) + ": " + list);
  }
  return l;
}

ConditionReport verify_labelling(const TLabelling& l, const RegularStructure& s, const ConditionTolerances& tol) {
  s.validate();
  const FiniteMetricSpace& sp = s.space;
  const std::size_t m = s.subsets.size();
  for (std::size_t t = 0; t < l.nodes.size(); ++t) {
    if (l.nodes[t].subset >= m) throw InputError("nodes/" + std::to_string(t), "subset index out of range");
  }
  const double eps = tol.separation_gap ? *tol.separation_gap : (l.eps > 0.0 ? l.eps : default_epsilon(s));
  auto Y = [&](std::size_t t) -> const std::vector<std::size_t>& { return s.subsets[l.nodes[t].subset]; };
  int max_level = 0;
  for (const auto& node : l.nodes) max_level = std::max(max_level, node.depth);
  ConditionReport rep;

  // Strictly decreasing per-level maxima over levels 1..max_level.
  auto per_level = [&](ConditionResult r, const std::vector<double>& level, const std::string& key,
                       const std::string& what) {
    double worst = 0.0;
    for (std::size_t j = 1; j < level.size(); ++j) {
      r.metrics[key + std::to_string(j)] = level[j];
      if (j < 2) continue;
      worst = std::max(worst, level[j - 1] > 0.0 ? level[j] / level[j - 1] : (level[j] > 0.0 ? kInf : 0.0));
      if (!(level[j] < level[j - 1])) r.offenders.push_back(j);
    }
    r.achieved = worst;
    r.allowed = 1.0;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = level.size() <= 2 ? "vacuous: fewer than two levels below the root" : what;
    return r;
  };

  {  // (L1) injective, covering, and Y_k appears within depth k-1.
    ConditionResult r{"L1"};
    std::vector<std::size_t> count(m, 0);
    std::vector<int> depth_of(m, -1);
    for (const auto& node : l.nodes) {
      ++count[node.subset];
      depth_of[node.subset] = node.depth;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (count[i] != 1 || depth_of[i] > static_cast<int>(i)) r.offenders.push_back(i);
    }
    r.achieved = static_cast<double>(r.offenders.size());
    r.allowed = 0.0;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = "subsets labelled zero or several times, or deeper than their family position allows";
    rep.conditions.push_back(std::move(r));
  }

  {  // (L2) diameters at least halve from parent to child.
    ConditionResult r{"L2"};
    double worst = 0.0;
    for (std::size_t t = 1; t < l.nodes.size(); ++t) {
      const double dp = sp.diameter(Y(l.nodes[t].parent)), dc = sp.diameter(Y(t));
      const double ratio = dp > 0.0 ? dc / dp : (dc > 0.0 ? kInf : 0.0);
      worst = std::max(worst, ratio);
      if (dp > 0.0 ? !(dc < 0.5 * dp) : dc > 0.0) r.offenders.push_back(t);
    }
    r.achieved = worst;
    r.allowed = 0.5;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = "largest diam(child) / diam(parent) along tree edges (must stay below 1/2)";
    rep.conditions.push_back(std::move(r));
  }

  {  // (L3) successors hug their parent more tightly at each level.
    std::vector<double> level(static_cast<std::size_t>(max_level) + 1, 0.0);
    for (std::size_t t = 1; t < l.nodes.size(); ++t) {
      double gap = 0.0;
      for (std::size_t y : Y(t)) gap = std::max(gap, sp.set_distance({y}, Y(l.nodes[t].parent)));
      level[l.nodes[t].depth] = std::max(level[l.nodes[t].depth], gap);
    }
    rep.conditions.push_back(per_level({"L3"}, level, "max_gap_level_",
                                       "largest ratio of consecutive per-level max distances from a "
                                       "successor to its parent (must stay below 1)"));
  }

  {  // (L4) H_t contains its subtree, is clopen at eps, misses ancestor subsets.
    ConditionResult r{"L4"};
    double worst = kInf;
    for (std::size_t t = 1; t < l.nodes.size(); ++t) {
      const auto& h = l.nodes[t].region;
      std::vector<char> in(sp.size(), 0);
      for (std::size_t p : h) in[p] = 1;
      bool ok = true;
      std::vector<std::size_t> stack{t};
      while (!stack.empty() && ok) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t p : Y(u)) ok = ok && in[p];
        for (int c : l.nodes[u].children) stack.push_back(static_cast<std::size_t>(c));
      }
      for (int a = l.nodes[t].parent; a >= 0 && ok; a = l.nodes[a].parent) {
        for (std::size_t p : Y(static_cast<std::size_t>(a))) ok = ok && !in[p];
      }
      const double gap = clopen_gap(sp, h);
      worst = std::min(worst, gap / eps);
      if (!ok || gap < eps) r.offenders.push_back(t);
    }
    r.achieved = l.nodes.size() > 1 ? worst : 0.0;
    r.allowed = 1.0;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = "min clopen gap of H_t / eps (" + fmt(eps) +
               "); offenders also include nodes whose H_t misses a subtree subset or meets an ancestor subset";
    rep.conditions.push_back(std::move(r));
  }

  {  // (L5) per-level max diam(H_t) decreases.
    std::vector<double> level(static_cast<std::size_t>(max_level) + 1, 0.0);
    for (std::size_t t = 1; t < l.nodes.size(); ++t) {
      level[l.nodes[t].depth] = std::max(level[l.nodes[t].depth], sp.diameter(l.nodes[t].region));
    }
    rep.conditions.push_back(per_level({"L5"}, level, "max_diam_level_",
                                       "largest ratio of consecutive per-level max diam(H_t) (must stay below 1)"));
  }

  {  // (L6) sibling regions are disjoint.
    ConditionResult r{"L6"};
    for (std::size_t t = 0; t < l.nodes.size(); ++t) {
      const auto& ch = l.nodes[t].children;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        for (std::size_t j = i + 1; j < ch.size(); ++j) {
          const auto& a = l.nodes[ch[i]].region;
          const auto& b = l.nodes[ch[j]].region;
          std::vector<std::size_t> common;
          std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
          if (!common.empty()) {
            r.offenders.push_back(static_cast<std::size_t>(ch[i]));
            r.offenders.push_back(static_cast<std::size_t>(ch[j]));
          }
        }
      }
    }
    r.achieved = static_cast<double>(r.offenders.size() / 2);
    r.allowed = 0.0;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = "overlapping sibling regions; offenders come in node pairs";
    rep.conditions.push_back(std::move(r));
  }
  return rep;
}

}  // namespace dama
