#pragma once

// Finite analogues of the characterization: regularity checks, merging of
// class families, quotient profiling and T-labellings.

#include <string>
#include <vector>

#include "dama/approx.hpp"
#include "dama/error.hpp"
#include "dama/metric.hpp"
#include "dama/verdict.hpp"

namespace dama {

struct RegularStructure {
  FiniteMetricSpace space;
  /// Sorted point indices, pairwise disjoint, in family order.
  std::vector<std::vector<std::size_t>> subsets;
  /// Class of each subset, 0-based; every class 0..k-1 occurs.
  std::vector<int> classes;

  int class_count() const;
  std::vector<std::size_t> residual() const;
  /// Throws InputError on overlapping, empty or out-of-range subsets, or a
  /// class index with no subset.
  void validate() const;
};

/// Family = copies in breadth-first node order (classes within a node in
/// order); residual = end points.
RegularStructure to_regular_structure(const AmalgamApprox& a);

/// Linkage scale used when `tol.separation_gap` is unset: half the smallest
/// positive subset diameter (half the smallest distance if there is none).
double default_epsilon(const RegularStructure& s);

/// (a1) shape equality within classes, (a2) null family, (a3) boundary,
/// (a4) density, (a5) separation by saturated unions of epsilon-components.
/// Unset gaps default to max(2 diam(Z), 2 * smallest positive diameter) where
/// Z is the subset holding the point (the second term alone for residual
/// points).
ConditionReport check_regularity(const RegularStructure& s, const ConditionTolerances& tol = {});

struct MergeResult {
  RegularStructure merged;
  /// diam(W_n) / diam(Z_{n,1}) per merged subset, and the largest of them.
  std::vector<double> ratios;
  double ratio = 0.0;
};

/// Throws PreconditionError unless there are at least two classes of equal
/// cardinality.
MergeResult merge_families(const RegularStructure& s);

struct QuotientProfile {
  std::size_t points = 0;  // subsets plus residual points
  double eps = 0.0;
  /// Every quotient point has another within max(eps, 2 diam) of it.
  Verdict no_isolated = Verdict::Fail;
  std::vector<std::size_t> isolated;
  /// Pairs at distance >= eps never share an eps/2-chain component.
  Verdict separated = Verdict::Fail;
  std::size_t linked_far_pairs = 0;
  bool cantor_like = false;
  /// Quotient metric: set distances closed under shortest paths.
  std::vector<double> metric;
};

QuotientProfile quotient_profile(const RegularStructure& s, double eps);

/// Raised by the labelling builder; `condition` names the violated rule
/// ("regularity", "t1", "t4" or "r1").
class LabellingError : public PreconditionError {
 public:
  LabellingError(std::string condition, const std::string& what)
      : PreconditionError(what), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

struct TLabelling {
  struct Node {
    int parent = -1;
    int depth = 0;
    std::size_t subset = 0;
    std::vector<int> children;
    /// L_t: sorted points of the region handed to this node.
    std::vector<std::size_t> region;
    double radius = 0.0;  // d_t
    /// max over the region of d(x, Y_t) / d_t; at most 1 means L_t ⊆ N_{d_t}(Y_t).
    double containment = 0.0;
    /// Residual points left in the region at the truncation boundary.
    std::size_t leftover = 0;
  };
  std::vector<Node> nodes;  // breadth-first; node 0 is the root
  double eps = 0.0;
};

/// Greedy construction. Regions are unions of atoms: epsilon-linkage
/// components merged so that no subset is split. A child's region is the
/// chain hull of its subset's atom, hopping between unclaimed atoms of the
/// parent region at set distance below d_s.
TLabelling build_t_labelling(const RegularStructure& s, int max_depth,
                             const ConditionTolerances& tol = {});

/// (L1)-(L6) on the truncated labelling.
ConditionReport verify_labelling(const TLabelling& l, const RegularStructure& s,
                                 const ConditionTolerances& tol = {});

}  // namespace dama
