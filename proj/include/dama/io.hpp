#pragma once

// File formats: complexes as JSON, metric spaces as CSV, regular structures
// as a CSV + JSON bundle, labellings as JSON, and Graphviz exports.

#include <string>
#include <string_view>

#include "dama/characterize.hpp"
#include "dama/graph_of_groups.hpp"
#include "dama/simplicial.hpp"

namespace dama {

/// Throws InputError(path, ...) when the file cannot be read or written.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// JSON: {"vertices":[...],"faces":[[...],...]}.
SimplicialComplex parse_simplicial_complex(std::string_view json_text);

/// Header row of point names, then one row per point; values printed with
/// %.17g so that a round trip is exact.
std::string metric_csv(const FiniteMetricSpace& s);
/// Validates the matrix like the FiniteMetricSpace constructor.
FiniteMetricSpace parse_metric_csv(std::string_view text);

/// Writes `json_path` and the distance matrix next to it (same stem, .csv).
/// The sidecar lists subsets by point name: {"distances","subsets","classes"}.
void write_bundle(const RegularStructure& s, const std::string& json_path);
/// The distance file is resolved relative to the sidecar's directory.
RegularStructure read_bundle(const std::string& json_path);

std::string labelling_json(const TLabelling& l);
TLabelling parse_labelling(std::string_view json_text);

/// 1-skeleton of the complex.
std::string complex_dot(const SimplicialComplex& c);
/// Tree nodes labelled by the graph vertex they project to.
std::string ball_dot(const BassSerreBall& b, const GraphOfGroups& g);

}  // namespace dama
