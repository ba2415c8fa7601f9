#include "dama/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dama/error.hpp"

namespace dama {

double PeripheralModel::d(std::size_t i, std::size_t j) const {
  const std::size_t nb = base.size();
  if (i == j) return 0.0;
  if (i < nb && j < nb) return base.d(i, j);
  if (i >= nb && j >= nb) {
    const Point& p = peripheral[i - nb];
    const Point& q = peripheral[j - nb];
    return p.radius + q.radius + base.d(p.anchor, q.anchor);
  }
  const Point& p = peripheral[(i < nb ? j : i) - nb];
  return p.radius + base.d(p.anchor, i < nb ? i : j);
}

FiniteMetricSpace PeripheralModel::as_space() const {
  const std::size_t n = size();
  std::vector<std::string> names = base.names();
  for (std::size_t j = 0; j < peripheral.size(); ++j) names.push_back("p" + std::to_string(j + 1));
  std::vector<double> flat(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = d(i, j);
  }
  return FiniteMetricSpace::trusted(std::move(names), std::move(flat));
}

PeripheralModel peripheral_extension(const FiniteMetricSpace& x, std::size_t n, double r0, double mu) {
  if (x.size() == 0) throw PreconditionError("peripheral extension needs a nonempty base");
  if (!(r0 > 0.0)) throw PreconditionError("r0 must be positive");
  if (!(mu > 0.0 && mu < 1.0)) throw PreconditionError("mu must lie in (0, 1)");
  PeripheralModel m;
  m.base = x;
  const std::size_t nb = x.size();
  for (std::size_t j = 1; j <= n; ++j) {
    const auto cycle = static_cast<double>((j + nb - 1) / nb);
    m.peripheral.push_back({(j - 1) % nb, r0 * std::pow(mu, cycle)});
  }
  return m;
}

std::vector<std::size_t> AmalgamApprox::copy_points(int node, int cls) const {
  std::vector<std::size_t> out;
  for (std::size_t p : nodes[node].points) {
    if (labels[p].cls == cls) out.push_back(p);
  }
  return out;
}

std::size_t AmalgamApprox::slot_toward(int node, int neighbour) const {
  const auto& slots = nodes[node].slots;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (slots[s].neighbour == neighbour) return s;
  }
  throw PreconditionError("nodes " + std::to_string(node) + " and " + std::to_string(neighbour) +
                          " are not adjacent");
}

double AmalgamApprox::min_radius(int level) const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& n : nodes) {
    if (n.depth != level) continue;
    for (const auto& s : n.slots) r = std::min(r, s.radius);
  }
  return r;
}

std::vector<std::size_t> AmalgamApprox::subtree_points(int node) const {
  std::vector<std::size_t> out;
  std::vector<int> stack{node};
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    out.insert(out.end(), nodes[t].points.begin(), nodes[t].points.end());
    if (nodes[t].end_point >= 0) out.push_back(static_cast<std::size_t>(nodes[t].end_point));
    stack.insert(stack.end(), nodes[t].children.begin(), nodes[t].children.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

FiniteMetricSpace disjoint_union(const std::vector<FiniteMetricSpace>& xs, double sep,
                                 std::vector<int>& class_of, std::vector<std::size_t>& local) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t p = 0; p < xs[i].size(); ++p) {
      names.push_back(std::to_string(i) + ":" + xs[i].name(p));
      class_of.push_back(static_cast<int>(i));
      local.push_back(p);
    }
  }
  const std::size_t n = names.size();
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      flat[a * n + b] = class_of[a] == class_of[b] ? xs[class_of[a]].d(local[a], local[b]) : sep;
    }
  }
  return FiniteMetricSpace::trusted(std::move(names), std::move(flat));
}

// Unscaled distance between two model indices of a copy.
double model_distance(const AmalgamApprox& a, const ApproxNode& node, std::size_t i, std::size_t j) {
  const std::size_t nb = a.joined.size();
  if (i == j) return 0.0;
  if (i < nb && j < nb) return a.joined.d(i, j);
  if (i >= nb && j >= nb) {
    const ApproxSlot& p = node.slots[i - nb];
    const ApproxSlot& q = node.slots[j - nb];
    return p.radius + q.radius + a.joined.d(p.anchor, q.anchor);
  }
  const ApproxSlot& p = node.slots[(i < nb ? j : i) - nb];
  return p.radius + a.joined.d(p.anchor, i < nb ? i : j);
}

std::size_t model_index(const AmalgamApprox& a, std::size_t point) {
  const PointLabel& l = a.labels[point];
  if (!l.is_end) return l.base;
  return a.joined.size() + a.nodes[l.node].slots.size() - 1;
}

// Path metric through the gluing points along the unique tree path.
double wedge_distance(const AmalgamApprox& a, std::size_t p, std::size_t q) {
  int t = a.labels[p].node;
  int u = a.labels[q].node;
  const std::size_t mp = model_index(a, p);
  const std::size_t mq = model_index(a, q);
  if (t == u) return a.nodes[t].scale * model_distance(a, a.nodes[t], mp, mq);
  std::vector<int> up{t}, down{u};
  while (up.back() != down.back()) {
    if (a.nodes[up.back()].depth >= a.nodes[down.back()].depth) {
      up.push_back(a.nodes[up.back()].parent);
    } else {
      down.push_back(a.nodes[down.back()].parent);
    }
  }
  // up ends at the common ancestor, which down repeats.
  std::vector<int> path = up;
  for (std::size_t i = down.size() - 1; i-- > 0;) path.push_back(down[i]);
  const std::size_t nb = a.joined.size();
  double total = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const ApproxNode& node = a.nodes[path[k]];
    std::size_t from = k == 0 ? mp : nb + a.slot_toward(path[k], path[k - 1]);
    std::size_t to = k + 1 == path.size() ? mq : nb + a.slot_toward(path[k], path[k + 1]);
    total += node.scale * model_distance(a, node, from, to);
  }
  return total;
}

}  // namespace

AmalgamApprox build_approx(const std::vector<FiniteMetricSpace>& xs, int depth, int branching,
                           double lambda, const ApproxOptions& opts) {
  if (xs.empty()) throw PreconditionError("at least one space required");
  for (const auto& x : xs) {
    if (x.size() == 0) throw PreconditionError("spaces must be nonempty");
  }
  if (depth < 0) throw PreconditionError("depth must be non-negative");
  if (branching < 1) throw PreconditionError("branching must be at least 1");
  if (opts.check_lambda && !(lambda > 0.0 && lambda <= 0.5))
    throw PreconditionError("lambda must lie in (0, 1/2]");
  if (!(lambda > 0.0)) throw PreconditionError("lambda must be positive");

  AmalgamApprox a;
  a.sources = xs;
  a.depth = depth;
  a.branching = branching;
  a.lambda = lambda;
  a.mu = opts.mu;
  for (const auto& x : xs) a.separation = std::max(a.separation, x.diameter());
  a.joined = disjoint_union(xs, a.separation, a.class_of, a.local_index);
  const std::size_t nb = a.joined.size();
  const double diam = a.joined.diameter();
  a.r0 = opts.r0_factor * (diam > 0.0 ? diam : 1.0);

  // Size check before allocating anything large.
  std::size_t level = 1, total_nodes = 1, leaves = 1;
  for (int j = 1; j <= depth; ++j) {
    level *= static_cast<std::size_t>(branching);
    total_nodes += level;
    leaves = level;
    if (total_nodes * nb + leaves > opts.max_points)
      throw PreconditionError("approximation exceeds " + std::to_string(opts.max_points) + " points");
  }
  if (total_nodes * nb + leaves > opts.max_points)
    throw PreconditionError("approximation exceeds " + std::to_string(opts.max_points) + " points");

  a.nodes.push_back({});
  for (std::size_t t = 0; t < a.nodes.size(); ++t) {
    if (a.nodes[t].depth == depth) continue;
    for (int c = 0; c < branching; ++c) {
      ApproxNode child;
      child.parent = static_cast<int>(t);
      child.depth = a.nodes[t].depth + 1;
      a.nodes[t].children.push_back(static_cast<int>(a.nodes.size()));
      a.nodes.push_back(std::move(child));
    }
  }
  for (std::size_t t = 0; t < a.nodes.size(); ++t) {
    ApproxNode& node = a.nodes[t];
    node.scale = std::pow(lambda, node.depth);
    const std::size_t count = static_cast<std::size_t>(branching) + (node.parent >= 0 ? 1 : 0);
    for (std::size_t s = 0; s < count; ++s) {
      const auto cycle = static_cast<double>((s + nb) / nb);  // ceil((s + 1) / nb)
      node.slots.push_back({s % nb, a.r0 * std::pow(a.mu, cycle), -1, false});
    }
    const std::size_t first_child = node.parent >= 0 ? 1 : 0;
    if (node.parent >= 0) node.slots[0].neighbour = node.parent;
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      node.slots[first_child + c].neighbour = node.children[c];
    }
    if (node.children.empty()) node.slots.back().end = true;
  }

  std::vector<std::string> names;
  for (std::size_t t = 0; t < a.nodes.size(); ++t) {
    for (std::size_t b = 0; b < nb; ++b) {
      a.nodes[t].points.push_back(a.labels.size());
      a.labels.push_back({static_cast<int>(t), a.class_of[b], b, false});
      names.push_back("n" + std::to_string(t) + "/" + a.joined.name(b));
    }
  }
  for (std::size_t t = 0; t < a.nodes.size(); ++t) {
    if (!a.nodes[t].children.empty()) continue;
    a.nodes[t].end_point = static_cast<int>(a.labels.size());
    a.labels.push_back({static_cast<int>(t), -1, 0, true});
    names.push_back("end/n" + std::to_string(t));
  }

  const std::size_t n = a.labels.size();
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) flat[i * n + j] = flat[j * n + i] = wedge_distance(a, i, j);
  }
  a.space = FiniteMetricSpace::trusted(std::move(names), std::move(flat));
  return a;
}

std::vector<std::size_t> basic_open_set(const AmalgamApprox& a, int t, const std::vector<std::size_t>& u) {
  if (t < 0 || t >= static_cast<int>(a.nodes.size())) throw PreconditionError("no such tree node");
  const ApproxNode& node = a.nodes[t];
  const std::size_t nb = a.joined.size();
  std::vector<char> in(a.labels.size(), 0);
  for (std::size_t m : u) {
    if (m < nb) {
      in[node.points[m]] = 1;
      continue;
    }
    if (m - nb >= node.slots.size()) throw PreconditionError("model index out of range");
    const ApproxSlot& slot = node.slots[m - nb];
    if (slot.end) in[static_cast<std::size_t>(node.end_point)] = 1;
    if (slot.neighbour < 0) continue;
    if (slot.neighbour == node.parent) {
      std::vector<char> below(a.labels.size(), 0);
      for (std::size_t p : a.subtree_points(t)) below[p] = 1;
      for (std::size_t p = 0; p < below.size(); ++p) {
        if (!below[p]) in[p] = 1;
      }
    } else {
      for (std::size_t p : a.subtree_points(slot.neighbour)) in[p] = 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < in.size(); ++p) {
    if (in[p]) out.push_back(p);
  }
  return out;
}

std::vector<std::size_t> half_space(const AmalgamApprox& a, int tail, int head) {
  if (head < 0 || head >= static_cast<int>(a.nodes.size())) throw PreconditionError("no such tree node");
  const std::size_t skip = a.slot_toward(head, tail);
  std::vector<std::size_t> u;
  const std::size_t model = a.joined.size() + a.nodes[head].slots.size();
  for (std::size_t m = 0; m < model; ++m) {
    if (m != a.joined.size() + skip) u.push_back(m);
  }
  return basic_open_set(a, head, u);
}

double clopen_gap(const FiniteMetricSpace& s, const std::vector<std::size_t>& set) {
  std::vector<char> in(s.size(), 0);
  for (std::size_t p : set) in[p] = 1;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t x : set) {
    for (std::size_t y = 0; y < s.size(); ++y) {
      if (!in[y]) gap = std::min(gap, s.d(x, y));
    }
  }
  return gap;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Separator {
  std::vector<char> member;
  double gap = 0.0;
  double needed = 0.0;
};

}  // namespace

ConditionReport check_conditions(const AmalgamApprox& a, const ConditionTolerances& tol) {
  ConditionReport rep;
  const FiniteMetricSpace& s = a.space;
  const std::size_t n = s.size();
  const int k = static_cast<int>(a.class_count());
  const double diam_x = a.joined.diameter();
  auto level_of = [&](std::size_t p) { return a.nodes[a.labels[p].node].depth; };
  auto level_tol = [&](int j) { return 2.0 * std::pow(a.lambda, j) * diam_x; };

  // Labelled copies: one per (node, class).
  struct Copy {
    int node, cls;
    std::vector<std::size_t> pts;
  };
  std::vector<Copy> copies;
  std::vector<int> copy_of(n, -1);
  for (std::size_t t = 0; t < a.nodes.size(); ++t) {
    for (int c = 0; c < k; ++c) {
      copies.push_back({static_cast<int>(t), c, a.copy_points(static_cast<int>(t), c)});
      for (std::size_t p : copies.back().pts) copy_of[p] = static_cast<int>(copies.size() - 1);
    }
  }

  {  // (a1) each copy is its source scaled by lambda^depth, exactly.
    ConditionResult r{"a1"};
    double worst = 0.0;
    for (std::size_t ci = 0; ci < copies.size(); ++ci) {
      const Copy& c = copies[ci];
      const double scale = a.nodes[c.node].scale;
      const FiniteMetricSpace& src = a.sources[c.cls];
      double dev = 0.0;
      for (std::size_t x : c.pts) {
        for (std::size_t y : c.pts) {
          const std::size_t lx = a.local_index[a.labels[x].base];
          const std::size_t ly = a.local_index[a.labels[y].base];
          dev = std::max(dev, std::abs(s.d(x, y) - scale * src.d(lx, ly)));
        }
      }
      if (dev > 0.0) r.offenders.push_back(ci);
      worst = std::max(worst, dev);
    }
    r.achieved = worst;
    r.allowed = 0.0;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = "max |d - lambda^depth * d_source| over " + std::to_string(copies.size()) + " copies";
    rep.conditions.push_back(std::move(r));
  }

  {  // (a2) per-level diameters bounded by lambda^j diam(X) and decreasing.
    ConditionResult r{"a2"};
    std::vector<double> level_max(static_cast<std::size_t>(a.depth) + 1, 0.0);
    bool bounded = true;
    for (const Copy& c : copies) {
      const int j = a.nodes[c.node].depth;
      const double dm = s.diameter(c.pts);
      level_max[j] = std::max(level_max[j], dm);
      if (dm > std::pow(a.lambda, j) * diam_x) bounded = false;
    }
    double worst_ratio = 0.0;
    for (std::size_t j = 0; j < level_max.size(); ++j) {
      r.metrics["max_diam_level_" + std::to_string(j)] = level_max[j];
      if (j == 0 || level_max[j - 1] == 0.0) continue;
      const double ratio = level_max[j] / level_max[j - 1];
      worst_ratio = std::max(worst_ratio, ratio);
      if (!(level_max[j] < level_max[j - 1])) r.offenders.push_back(j);
    }
    r.achieved = worst_ratio;
    r.allowed = 1.0;
    r.verdict = bounded && r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = std::string("largest ratio of consecutive level diameters (must stay below 1)") +
               (bounded ? "" : "; some copy exceeds lambda^j * diam(X)");
    rep.conditions.push_back(std::move(r));
  }

  // Ratio checks share a shape: worst observed / allowed, must be <= 1.
  auto ratio_result = [&](ConditionResult r, const std::vector<double>& gaps,
                          const std::vector<double>& allowed, const std::vector<std::size_t>& who,
                          const std::string& what) {
    double worst = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      const double ratio = gaps[i] / allowed[i];
      worst = std::max(worst, ratio);
      if (gaps[i] > allowed[i]) r.offenders.push_back(who[i]);
    }
    r.achieved = worst;
    r.allowed = 1.0;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = what;
    return r;
  };

  {  // (a3) every copy point has a point outside its copy nearby.
    std::vector<double> gaps, allowed;
    std::vector<std::size_t> who;
    std::map<std::string, double> per_level;
    for (std::size_t p = 0; p < n; ++p) {
      if (copy_of[p] < 0) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < n; ++q) {
        if (copy_of[q] != copy_of[p]) best = std::min(best, s.d(p, q));
      }
      gaps.push_back(best);
      allowed.push_back(tol.boundary_gap ? *tol.boundary_gap : level_tol(level_of(p)));
      who.push_back(p);
      auto& m = per_level["max_gap_level_" + std::to_string(level_of(p))];
      m = std::max(m, best);
    }
    auto r = ratio_result({"a3"}, gaps, allowed, who,
                          tol.boundary_gap ? "max distance to the outside of a copy / " + fmt(*tol.boundary_gap)
                                           : "max distance to the outside of a copy / (2 lambda^j diam X)");
    r.metrics = per_level;
    rep.conditions.push_back(std::move(r));
  }

  {  // (a4) every point is near some copy of each class.
    std::vector<double> gaps, allowed;
    std::vector<std::size_t> who;
    std::map<std::string, double> per_level;
    for (int c = 0; c < k; ++c) {
      for (std::size_t p = 0; p < n; ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < n; ++q) {
          if (!a.labels[q].is_end && a.labels[q].cls == c) best = std::min(best, s.d(p, q));
        }
        gaps.push_back(best);
        allowed.push_back(tol.density_gap ? *tol.density_gap : level_tol(level_of(p)));
        who.push_back(p);
        auto& m = per_level["max_gap_level_" + std::to_string(level_of(p))];
        m = std::max(m, best);
      }
    }
    auto r = ratio_result({"a4"}, gaps, allowed, who,
                          tol.density_gap ? "max distance to a class copy / " + fmt(*tol.density_gap)
                                          : "max distance to a class copy / (2 lambda^j diam X)");
    r.metrics = per_level;
    rep.conditions.push_back(std::move(r));
  }

  {  // (a5) points of different copies (or ends) are split by a clopen set.
    std::vector<Separator> seps;
    auto add = [&](const std::vector<std::size_t>& set, int level) {
      Separator sep;
      sep.member.assign(n, 0);
      for (std::size_t p : set) sep.member[p] = 1;
      sep.gap = clopen_gap(s, set);
      sep.needed = tol.separation_gap ? *tol.separation_gap
                                      : std::pow(a.lambda, level) * a.min_radius(level);
      seps.push_back(std::move(sep));
    };
    const std::size_t nb = a.joined.size();
    for (std::size_t t = 1; t < a.nodes.size(); ++t) {
      add(half_space(a, a.nodes[t].parent, static_cast<int>(t)), a.nodes[t].depth);
    }
    for (std::size_t t = 0; t < a.nodes.size(); ++t) {
      const ApproxNode& node = a.nodes[t];
      if (k > 1) {
        for (int c = 0; c < k; ++c) {
          std::vector<std::size_t> u;
          for (std::size_t b = 0; b < nb; ++b) {
            if (a.class_of[b] == c) u.push_back(b);
          }
          for (std::size_t sl = 0; sl < node.slots.size(); ++sl) {
            if (a.class_of[node.slots[sl].anchor] == c) u.push_back(nb + sl);
          }
          add(basic_open_set(a, static_cast<int>(t), u), node.depth);
        }
      }
      if (node.end_point >= 0) add({static_cast<std::size_t>(node.end_point)}, node.depth);
    }
    ConditionResult r{"a5"};
    double worst = std::numeric_limits<double>::infinity();
    std::size_t pairs = 0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const bool same = copy_of[p] >= 0 && copy_of[p] == copy_of[q];
        if (same) continue;
        ++pairs;
        double best = 0.0;
        for (const Separator& sep : seps) {
          if (sep.member[p] == sep.member[q]) continue;
          best = std::max(best, sep.gap / sep.needed);
        }
        if (best < 1.0) {
          r.offenders.push_back(p);
          r.offenders.push_back(q);
        }
        worst = std::min(worst, best);
      }
    }
    r.achieved = pairs == 0 ? 0.0 : worst;
    r.allowed = 1.0;
    r.verdict = r.offenders.empty() ? Verdict::Pass : Verdict::Fail;
    r.detail = pairs == 0 ? "vacuous: no pair of points in different copies"
                          : "min over " + std::to_string(pairs) +
                                " pairs of the best separator's gap / required gap (must be >= 1);"
                                " offenders come in point pairs";
    r.metrics["separators"] = static_cast<double>(seps.size());
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& sep : seps) min_gap = std::min(min_gap, sep.gap);
    if (!seps.empty()) r.metrics["min_separator_gap"] = min_gap;
    rep.conditions.push_back(std::move(r));
  }
  return rep;
}

}  // namespace dama
