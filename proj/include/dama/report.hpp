#pragma once

// Deterministic JSON (keys sorted) and plain-text rendering of results.

#include <string>

#include "json.hpp"

#include "dama/characterize.hpp"
#include "dama/graph_of_groups.hpp"
#include "dama/simplicial.hpp"

namespace dama {

using Json = nlohmann::json;

/// Finite values as numbers, infinities as the strings "inf" / "-inf".
Json number(double v);

Json to_json(const ConditionReport& r);
Json to_json(const SimplicialComplex& c);
Json to_json(const GraphOfGroups& g);
Json to_json(const SeparationReport& r);
Json to_json(const QuotientProfile& q);
/// Node counts per depth and cumulative ball sizes.
Json ball_summary(const BassSerreBall& b);

/// One line per condition with its numbers and offenders; an empty report
/// renders as "no checks requested".
std::string render_text(const ConditionReport& r);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace dama
