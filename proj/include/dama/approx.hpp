#pragma once

// Finite realization of the dense amalgam: scaled peripheral extensions of
// X = X_1 ⊔ ... ⊔ X_k glued along a truncated tree, with the gluing points
// removed and one end point per leaf.

#include <vector>

#include "dama/metric.hpp"
#include "dama/verdict.hpp"

namespace dama {

/// A base space plus peripheral points p_j at distance radius_j from their
/// anchor; d(p_j, x) = r_j + d(a_j, x), d(p_j, p_l) = r_j + r_l + d(a_j, a_l).
struct PeripheralModel {
  struct Point {
    std::size_t anchor = 0;
    double radius = 0.0;
  };

  FiniteMetricSpace base;
  std::vector<Point> peripheral;

  std::size_t size() const { return base.size() + peripheral.size(); }
  /// Indices below base.size() are base points, the rest peripheral.
  double d(std::size_t i, std::size_t j) const;
  FiniteMetricSpace as_space() const;
};

/// Peripheral point j (1-based) is anchored at base[(j-1) mod |X|] with
/// radius r0 * mu^ceil(j / |X|).
PeripheralModel peripheral_extension(const FiniteMetricSpace& x, std::size_t n, double r0, double mu);

struct ApproxOptions {
  /// Off only in tests that need a non-contracting scale.
  bool check_lambda = true;
  /// r0 = r0_factor * diam(X) (or r0_factor when X is a single point).
  double r0_factor = 0.8;
  double mu = 0.9;
  std::size_t max_points = 4000;
};

struct ApproxSlot {
  std::size_t anchor = 0;  // point of X
  double radius = 0.0;     // before scaling
  int neighbour = -1;      // tree node glued here, if any
  bool end = false;        // holds the leaf's end point
};

struct ApproxNode {
  int parent = -1;
  int depth = 0;
  double scale = 1.0;
  std::vector<int> children;
  /// Non-root nodes: slot 0 faces the parent, slot 1 + i child i.
  /// Root: slot i faces child i. Leaves put their end in the last slot.
  std::vector<ApproxSlot> slots;
  std::vector<std::size_t> points;  // copy points, in X order
  int end_point = -1;
};

struct PointLabel {
  int node = 0;
  int cls = -1;           // -1 for end points
  std::size_t base = 0;   // point of X (copy points only)
  bool is_end = false;
};

struct AmalgamApprox {
  std::vector<FiniteMetricSpace> sources;
  FiniteMetricSpace joined;             // X with cross-class distance `separation`
  std::vector<int> class_of;            // per point of X
  std::vector<std::size_t> local_index; // per point of X, index in its source
  double separation = 1.0;
  int depth = 0;
  int branching = 1;
  double lambda = 0.5;
  double r0 = 0.0;
  double mu = 0.9;
  std::vector<ApproxNode> nodes;        // breadth-first, node 0 is the root
  std::vector<PointLabel> labels;
  FiniteMetricSpace space;

  std::size_t class_count() const { return sources.size(); }
  /// Points of the labelled copy X_{cls, node}.
  std::vector<std::size_t> copy_points(int node, int cls) const;
  std::size_t slot_toward(int node, int neighbour) const;
  /// Smallest unscaled slot radius over nodes at `level`.
  double min_radius(int level) const;
  /// Points in the subtree rooted at `node`, ends included.
  std::vector<std::size_t> subtree_points(int node) const;
};

/// Throws PreconditionError for empty input, empty spaces, branching < 1,
/// lambda outside (0, 1/2] (unless disabled) or too many points.
AmalgamApprox build_approx(const std::vector<FiniteMetricSpace>& xs, int depth, int branching,
                           double lambda, const ApproxOptions& opts = {});

/// `u` indexes the model of copy t: [0, |X|) base points, |X| + s slot s.
/// Returns sorted point indices. Throws PreconditionError for a bad node.
std::vector<std::size_t> basic_open_set(const AmalgamApprox& a, int t, const std::vector<std::size_t>& u);

/// Side of the edge tail-head containing head. Throws PreconditionError if
/// the nodes are not adjacent.
std::vector<std::size_t> half_space(const AmalgamApprox& a, int tail, int head);

/// Smallest distance between a point set and its complement.
double clopen_gap(const FiniteMetricSpace& s, const std::vector<std::size_t>& set);

/// Finite (a1)-(a5). Unset tolerances are level relative: a copy at depth j
/// gets 2 * lambda^j * diam(X) for (a3)/(a4), and separators at depth j need
/// a gap of lambda^j times the smallest radius used at that depth.
ConditionReport check_conditions(const AmalgamApprox& a, const ConditionTolerances& tol = {});

}  // namespace dama
