#include "dama/report.hpp"

#include <cmath>
#include <sstream>

namespace dama {

namespace {

std::string num_text(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Json names(const SimplicialComplex& c, VertexSet s) { return c.names_of(s); }

}  // namespace

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

Json to_json(const ConditionReport& r) {
  Json conditions = Json::array();
  for (const auto& c : r.conditions) {
    Json metrics = Json::object();
    for (const auto& [k, v] : c.metrics) metrics[k] = number(v);
    conditions.push_back({{"name", c.name},
                          {"verdict", to_string(c.verdict)},
                          {"achieved", number(c.achieved)},
                          {"allowed", number(c.allowed)},
                          {"detail", c.detail},
                          {"offenders", c.offenders},
                          {"approximate", c.approximate},
                          {"metrics", std::move(metrics)}});
  }
  return {{"conditions", std::move(conditions)}, {"all_pass", r.all_pass()}};
}

Json to_json(const SimplicialComplex& c) {
  Json faces = Json::array();
  for (VertexSet f : c.maximal_faces()) faces.push_back(names(c, f));
  return {{"vertices", c.vertices()}, {"faces", std::move(faces)}};
}

Json to_json(const GraphOfGroups& g) {
  Json vertices = Json::array();
  for (const auto& v : g.vertices()) {
    vertices.push_back({{"name", v.name},
                        {"order", v.finite() ? Json(v.order) : Json("inf")},
                        {"boundary", to_string(v.boundary)}});
  }
  Json edges = Json::array();
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& ed = g.edges()[e];
    auto idx = [&](int k) {
      const std::uint64_t i = g.index(e, k);
      return i == kInfiniteOrder ? Json("inf") : Json(i);
    };
    edges.push_back({{"name", ed.name},
                     {"ends", {g.vertices()[ed.ends[0]].name, g.vertices()[ed.ends[1]].name}},
                     {"edge_order", ed.edge_order},
                     {"index", {idx(0), idx(1)}}});
  }
  return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

Json to_json(const SeparationReport& r) {
  Json edges = Json::array();
  for (const auto& e : r.edges) edges.push_back({{"child", e.child}, {"verdict", to_string(e.verdict)}});
  return {{"edges", std::move(edges)},
          {"all_edges", to_string(r.all_edges)},
          {"three_way", r.three_way},
          {"three_way_verdict", to_string(r.three_way_verdict)}};
}

Json to_json(const QuotientProfile& q) {
  return {{"points", q.points},
          {"eps", number(q.eps)},
          {"no_isolated", to_string(q.no_isolated)},
          {"isolated", q.isolated},
          {"separated", to_string(q.separated)},
          {"linked_far_pairs", q.linked_far_pairs},
          {"cantor_like", q.cantor_like}};
}

Json ball_summary(const BassSerreBall& b) {
  std::vector<std::size_t> per_depth(static_cast<std::size_t>(b.radius) + 1, 0);
  std::size_t unexplored = 0;
  for (const auto& n : b.nodes) {
    ++per_depth[n.depth];
    if (n.unexplored) ++unexplored;
  }
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (std::size_t c : per_depth) sizes.push_back(total += c);
  return {{"radius", b.radius}, {"per_depth", per_depth}, {"sizes", sizes}, {"unexplored", unexplored}};
}

std::string render_text(const ConditionReport& r) {
  if (r.conditions.empty()) return "no checks requested\n";
  std::string out;
  for (const auto& c : r.conditions) {
    out += c.name + ": " + to_string(c.verdict) + "  achieved " + num_text(c.achieved) + ", allowed " +
           num_text(c.allowed);
    if (c.approximate) out += " [approximate]";
    out += "  (" + c.detail + ")";
    if (!c.offenders.empty()) {
      out += "  offenders:";
      const std::size_t shown = std::min<std::size_t>(c.offenders.size(), 20);
      for (std::size_t i = 0; i < shown; ++i) out += " " + std::to_string(c.offenders[i]);
      if (shown < c.offenders.size()) out += " ... (" + std::to_string(c.offenders.size()) + " total)";
    }
    out += '\n';
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dama
