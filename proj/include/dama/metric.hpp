#pragma once

// Finite metric spaces as dense distance matrices.

#include <string>
#include <string_view>
#include <vector>

namespace dama {

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  /// Validates zero diagonal, symmetry, positivity off the diagonal and the
  /// triangle inequality (slack 1e-12 relative to the diameter). Throws
  /// InputError naming the first offending entry.
  FiniteMetricSpace(std::vector<std::string> names, std::vector<std::vector<double>> dist);

  /// Skips validation; for matrices built by trusted code.
  static FiniteMetricSpace trusted(std::vector<std::string> names, std::vector<double> flat);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  double d(std::size_t i, std::size_t j) const { return dist_[i * names_.size() + j]; }
  const std::vector<double>& flat() const { return dist_; }

  double diameter() const;
  double diameter(const std::vector<std::size_t>& subset) const;
  /// Smallest distance between two sets; +inf if either is empty.
  double set_distance(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) const;

  FiniteMetricSpace scaled(double s) const;
  FiniteMetricSpace restricted(const std::vector<std::size_t>& subset) const;

  /// Largest violation max(d(x,z) - d(x,y) - d(y,z), 0) over all triples.
  double triangle_defect() const;

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<double> dist_;
};

/// JSON: {"points":[...],"dist":[[...],...]}; "points" may be omitted.
FiniteMetricSpace parse_metric_space(std::string_view json_text);

/// n points on a circle of radius 1/2 with chord distances (diameter <= 1).
FiniteMetricSpace circle_net(std::size_t n);

/// Two points at distance `d`.
FiniteMetricSpace two_point(double d = 1.0);

/// All-pairs shortest paths over a symmetric weight matrix where +inf marks
/// a missing edge.
std::vector<double> floyd_warshall(std::vector<double> w, std::size_t n);

}  // namespace dama
