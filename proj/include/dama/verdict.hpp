#pragma once

// Verdicts and per-condition reports shared by the checkers.

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dama {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct ConditionResult {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  /// Worst value observed and the bound it was held to; their meaning is
  /// condition specific and spelled out in `detail`.
  double achieved = 0.0;
  double allowed = 0.0;
  std::string detail;
  /// Indices of offending subsets, points or nodes.
  std::vector<std::size_t> offenders;
  /// Set when the check fell back to a proxy rather than an exact test.
  bool approximate = false;
  /// Extra named measurements (per-level gaps and the like).
  std::map<std::string, double> metrics;
};

/// Unset gaps fall back to the checker's own scale-aware defaults.
struct ConditionTolerances {
  std::optional<double> boundary_gap;
  std::optional<double> density_gap;
  std::optional<double> separation_gap;
  /// Entrywise tolerance when comparing distance matrices for shape.
  double iso = 1e-9;
  /// Diameters below this count as null; unset means half the largest one.
  std::optional<double> null_diameter;
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;

  bool all_pass() const;
  const ConditionResult* find(const std::string& name) const;
};

}  // namespace dama
