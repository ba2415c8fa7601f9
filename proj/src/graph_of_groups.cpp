#include "dama/graph_of_groups.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "dama/error.hpp"
#include "json.hpp"

namespace dama {

namespace {

std::string order_text(std::uint64_t n) {
  return n == kInfiniteOrder ? "inf" : std::to_string(n);
}

}  // namespace

GraphOfGroups::GraphOfGroups(std::vector<GroupVertex> vertices, std::vector<GroupEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  if (vertices_.empty()) throw InputError("vertices", "at least one vertex required");
  std::set<std::string> names;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto& v = vertices_[i];
    const std::string at = "vertices/" + std::to_string(i);
    if (!names.insert(v.name).second) throw InputError(at, "duplicate vertex '" + v.name + "'");
    if (v.order == 0) throw InputError(at, "group order must be positive");
    if (v.finite() && v.boundary.kind() != Kind::Empty)
      throw InputError(at, "finite vertex group must have empty boundary");
  }
  names.clear();
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    const std::string at = "edges/" + std::to_string(i);
    if (!names.insert(e.name).second) throw InputError(at, "duplicate edge '" + e.name + "'");
    if (e.edge_order == 0 || e.edge_order == kInfiniteOrder)
      throw InputError(at, "edge order must be a positive integer");
    for (int k = 0; k < 2; ++k) {
      if (e.ends[k] < 0 || e.ends[k] >= static_cast<int>(vertices_.size()))
        throw InputError(at, "edge end out of range");
      const auto& v = vertices_[e.ends[k]];
      if (v.finite() && v.order % e.edge_order != 0)
        throw InputError(at, "edge order " + std::to_string(e.edge_order) +
                                 " does not divide the order of '" + v.name + "'");
    }
  }
  // Connectivity by union-find.
  std::vector<std::size_t> root(vertices_.size());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& e : edges_) root[find(e.ends[0])] = find(e.ends[1]);
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (find(i) != find(0)) throw InputError("edges", "underlying graph is disconnected");
  }
}

std::uint64_t GraphOfGroups::index(std::size_t e, int k) const {
  const auto& v = vertices_[edges_[e].ends[k]];
  return v.finite() ? v.order / edges_[e].edge_order : kInfiniteOrder;
}

int GraphOfGroups::vertex_index(std::string_view name) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int GraphOfGroups::edge_index(std::string_view name) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::uint64_t read_order(const nlohmann::json& v, const std::string& at) {
  if (v.is_string() && v.get<std::string>() == "inf") return kInfiniteOrder;
  if (v.is_number_integer() && v.get<long long>() >= 1) return v.get<std::uint64_t>();
  throw InputError(at, "expected a positive integer or \"inf\"");
}

}  // namespace

GraphOfGroups parse_graph_of_groups(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
    throw InputError("vertices", "missing vertex list");
  std::vector<GroupVertex> vertices;
  for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
    const auto& j = doc["vertices"][i];
    const std::string at = "vertices/" + std::to_string(i);
    if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
      throw InputError(at, "vertex needs a string name");
    GroupVertex v;
    v.name = j["name"].get<std::string>();
    if (!j.contains("order")) throw InputError(at, "vertex needs an order");
    v.order = read_order(j["order"], at + "/order");
    if (j.contains("boundary")) {
      if (!j["boundary"].is_string()) throw InputError(at + "/boundary", "expected a string");
      try {
        v.boundary = parse_expr(j["boundary"].get<std::string>());
      } catch (const InputError& e) {
        throw InputError(at + "/boundary " + e.where(), e.what());
      }
    } else if (!v.finite()) {
      v.boundary = BoundaryExpr::atom("d" + v.name);
    }
    vertices.push_back(std::move(v));
  }
  auto find_vertex = [&](const nlohmann::json& n, const std::string& at) {
    if (n.is_string()) {
      for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].name == n.get<std::string>()) return static_cast<int>(i);
      }
    }
    throw InputError(at, "unknown vertex " + n.dump());
  };
  std::vector<GroupEdge> edges;
  std::vector<std::pair<std::size_t, nlohmann::json>> given_indices;
  const nlohmann::json no_edges = nlohmann::json::array();
  const auto& jedges = doc.contains("edges") ? doc["edges"] : no_edges;
  if (!jedges.is_array()) throw InputError("edges", "expected an array");
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const auto& j = jedges[i];
    const std::string at = "edges/" + std::to_string(i);
    if (!j.is_object()) throw InputError(at, "expected an object");
    GroupEdge e;
    e.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>()
                                                          : "e" + std::to_string(i);
    if (!j.contains("ends") || !j["ends"].is_array() || j["ends"].size() != 2)
      throw InputError(at + "/ends", "expected two vertex names");
    e.ends[0] = find_vertex(j["ends"][0], at + "/ends/0");
    e.ends[1] = find_vertex(j["ends"][1], at + "/ends/1");
    if (!j.contains("edge_order")) throw InputError(at, "edge needs an edge_order");
    e.edge_order = read_order(j["edge_order"], at + "/edge_order");
    if (j.contains("index")) given_indices.emplace_back(i, j["index"]);
    edges.push_back(std::move(e));
  }
  GraphOfGroups g(std::move(vertices), std::move(edges));
  for (const auto& [i, idx] : given_indices) {
    const std::string at = "edges/" + std::to_string(i) + "/index";
    if (!idx.is_array() || idx.size() != 2) throw InputError(at, "expected two indices");
    for (int k = 0; k < 2; ++k) {
      if (read_order(idx[k], at) != g.index(i, k))
        throw InputError(at + "/" + std::to_string(k),
                         "index disagrees with orders (expected " + order_text(g.index(i, k)) + ")");
    }
  }
  return g;
}

std::vector<TrivialEdge> trivial_edges(const GraphOfGroups& g) {
  std::vector<TrivialEdge> out;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& edge = g.edges()[e];
    if (edge.is_loop()) continue;
    // Prefer absorbing ends[1] when both orientations have index 1.
    for (int k : {1, 0}) {
      if (g.index(e, k) == 1) {
        out.push_back({e, edge.ends[k], edge.ends[1 - k]});
        break;
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](const TrivialEdge& a, const TrivialEdge& b) {
    return g.edges()[a.edge].name < g.edges()[b.edge].name;
  });
  return out;
}

GraphOfGroups elementary_collapse(const GraphOfGroups& g, std::size_t edge) {
  if (edge >= g.edges().size()) throw PreconditionError("edge out of range");
  auto trivial = trivial_edges(g);
  auto it = std::find_if(trivial.begin(), trivial.end(),
                         [edge](const TrivialEdge& t) { return t.edge == edge; });
  if (it == trivial.end())
    throw PreconditionError("edge '" + g.edges()[edge].name + "' is not trivial");
  const int gone = it->absorbed;
  const int kept = it->kept;
  std::vector<GroupVertex> vertices;
  std::vector<int> remap(g.vertices().size(), -1);
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (static_cast<int>(v) == gone) continue;
    remap[v] = static_cast<int>(vertices.size());
    vertices.push_back(g.vertices()[v]);
  }
  remap[gone] = remap[kept];
  std::vector<GroupEdge> edges;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (e == edge) continue;
    GroupEdge copy = g.edges()[e];
    copy.ends[0] = remap[copy.ends[0]];
    copy.ends[1] = remap[copy.ends[1]];
    edges.push_back(std::move(copy));
  }
  return GraphOfGroups(std::move(vertices), std::move(edges));
}

GraphOfGroups reduce(const GraphOfGroups& g) {
  GraphOfGroups cur = g;
  for (auto t = trivial_edges(cur); !t.empty(); t = trivial_edges(cur)) {
    cur = elementary_collapse(cur, t.front().edge);
  }
  return cur;
}

bool is_non_elementary(const GraphOfGroups& g) {
  GraphOfGroups r = reduce(g);
  const auto nv = r.vertices().size();
  const auto ne = r.edges().size();
  if (nv == 1 && ne == 0) return false;
  if (nv == 1 && ne == 1 && r.index(0, 0) == 1 && r.index(0, 1) == 1) return false;
  if (nv == 2 && ne == 1 && r.index(0, 0) == 2 && r.index(0, 1) == 2) return false;
  return true;
}

std::uint64_t tree_degree(const GraphOfGroups& g, int v) {
  std::uint64_t d = 0;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    for (int k = 0; k < 2; ++k) {
      if (g.edges()[e].ends[k] != v) continue;
      std::uint64_t i = g.index(e, k);
      if (i == kInfiniteOrder) return kInfiniteOrder;
      d += i;
    }
  }
  return d;
}

BassSerreBall bass_serre_ball(const GraphOfGroups& g, int base, int radius, BallCaps caps) {
  if (base < 0 || base >= static_cast<int>(g.vertices().size()))
    throw PreconditionError("base vertex out of range");
  if (radius < 0 || radius > caps.max_radius)
    throw PreconditionError("radius outside [0, " + std::to_string(caps.max_radius) + "]");
  BassSerreBall ball;
  ball.base = base;
  ball.radius = radius;
  // A family is an orientation (edge, k) pointing into the node's label;
  // it holds index(edge, k) tree edges leading to nodes labelled ends[1-k].
  struct Pending {
    int node;
    int in_edge;
    int in_end;
  };
  auto check_finite = [&](int v) {
    if (tree_degree(g, v) == kInfiniteOrder)
      throw PreconditionError("tree not locally finite at " + g.vertices()[v].name);
  };
  check_finite(base);
  ball.nodes.push_back({-1, base, -1, 0, tree_degree(g, base), false, {}});
  std::deque<Pending> queue{{0, -1, -1}};
  while (!queue.empty()) {
    Pending p = queue.front();
    queue.pop_front();
    BallNode& node = ball.nodes[p.node];
    const int label = node.label;
    const int depth = node.depth;
    const std::uint64_t expected = node.degree - (node.parent >= 0 ? 1 : 0);
    if (depth == radius) {
      node.unexplored = expected > 0;
      continue;
    }
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      for (int k = 0; k < 2; ++k) {
        const auto& edge = g.edges()[e];
        if (edge.ends[k] != label) continue;
        std::uint64_t count = g.index(e, k);
        if (static_cast<int>(e) == p.in_edge && k == p.in_end) --count;
        const int target = edge.ends[1 - k];
        check_finite(target);
        for (std::uint64_t c = 0; c < count; ++c) {
          if (ball.nodes.size() >= caps.max_nodes)
            throw PreconditionError("ball exceeds " + std::to_string(caps.max_nodes) + " nodes");
          const int id = static_cast<int>(ball.nodes.size());
          ball.nodes.push_back(
              {p.node, target, static_cast<int>(e), depth + 1, tree_degree(g, target), false, {}});
          ball.nodes[p.node].children.push_back(id);
          // The edge back to the parent lies in the reverse orientation.
          queue.push_back({id, static_cast<int>(e), 1 - k});
        }
      }
    }
  }
  return ball;
}

SeparationReport check_separation(const BassSerreBall& ball, const GraphOfGroups& g) {
  SeparationReport rep;
  const std::size_t n = ball.nodes.size();
  if (g.vertices().size() > 64) throw PreconditionError("separation check limited to 64 vertices");
  // Per node: labels and truncation contact inside its subtree, then the
  // same for everything outside it.
  std::vector<std::uint64_t> below(n, 0), above(n, 0);
  std::vector<char> below_open(n, 0), above_open(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    const auto& node = ball.nodes[i];
    below[i] |= std::uint64_t{1} << node.label;
    below_open[i] |= node.unexplored;
    if (node.parent >= 0) {
      below[node.parent] |= below[i];
      below_open[node.parent] |= below_open[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = ball.nodes[i];
    const auto& kids = node.children;
    const std::size_t m = kids.size();
    // Suffix ORs over siblings so each child sees the others in O(1).
    std::vector<std::uint64_t> suffix(m + 1, 0);
    std::vector<char> suffix_open(m + 1, 0);
    for (std::size_t j = m; j-- > 0;) {
      suffix[j] = suffix[j + 1] | below[kids[j]];
      suffix_open[j] = suffix_open[j + 1] | below_open[kids[j]];
    }
    std::uint64_t prefix = above[i] | (std::uint64_t{1} << node.label);
    char prefix_open = above_open[i] | node.unexplored;
    for (std::size_t j = 0; j < m; ++j) {
      above[kids[j]] = prefix | suffix[j + 1];
      above_open[kids[j]] = prefix_open | suffix_open[j + 1];
      prefix |= below[kids[j]];
      prefix_open |= below_open[kids[j]];
    }
  }
  const std::uint64_t every =
      g.vertices().size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.vertices().size()) - 1;
  auto side = [&](std::uint64_t labels, bool open) {
    if (labels == every) return Verdict::Pass;
    return open ? Verdict::Inconclusive : Verdict::Fail;
  };
  bool any_fail = false;
  bool any_open = false;
  for (std::size_t i = 1; i < n; ++i) {
    Verdict a = side(below[i], below_open[i]);
    Verdict b = side(above[i], above_open[i]);
    Verdict v = (a == Verdict::Fail || b == Verdict::Fail)   ? Verdict::Fail
                : (a == Verdict::Pass && b == Verdict::Pass) ? Verdict::Pass
                                                             : Verdict::Inconclusive;
    any_fail |= v == Verdict::Fail;
    any_open |= v == Verdict::Inconclusive;
    rep.edges.push_back({static_cast<int>(i), v});
  }
  if (n > 1) {
    rep.all_edges = any_fail ? Verdict::Fail : any_open ? Verdict::Inconclusive : Verdict::Pass;
  }
  for (std::size_t i = 0; i < n; ++i) {
    int reaching = above_open[i] && ball.nodes[i].parent >= 0 ? 1 : 0;
    for (int c : ball.nodes[i].children) reaching += below_open[c] ? 1 : 0;
    if (reaching >= 3) rep.three_way.push_back(static_cast<int>(i));
  }
  if (ball.radius > 0) {
    rep.three_way_verdict = rep.three_way.empty() ? Verdict::Fail : Verdict::Pass;
  }
  return rep;
}

BoundaryExpr boundary_expression(const GraphOfGroups& g) {
  if (!is_non_elementary(g))
    throw PreconditionError("graph of groups is elementary; the dense amalgam description needs "
                            "a non-elementary graph");
  std::vector<BoundaryExpr> parts;
  for (const auto& v : g.vertices()) parts.push_back(v.finite() ? BoundaryExpr::empty() : v.boundary);
  return normalize(BoundaryExpr::amalgam(std::move(parts)));
}

bool isomorphic(const GraphOfGroups& a, const GraphOfGroups& b) {
  const std::size_t n = a.vertices().size();
  if (n != b.vertices().size() || a.edges().size() != b.edges().size()) return false;
  auto edge_keys = [](const GraphOfGroups& g, const std::vector<int>& map) {
    std::vector<std::tuple<int, int, std::uint64_t>> keys;
    for (const auto& e : g.edges()) {
      int u = map[e.ends[0]];
      int v = map[e.ends[1]];
      keys.emplace_back(std::min(u, v), std::max(u, v), e.edge_order);
    }
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  const auto target = edge_keys(b, identity);
  std::vector<int> perm = identity;
  do {
    bool labels_match = true;
    for (std::size_t v = 0; v < n && labels_match; ++v) {
      const auto& x = a.vertices()[v];
      const auto& y = b.vertices()[perm[v]];
      labels_match = x.order == y.order && x.boundary == y.boundary;
    }
    if (labels_match && edge_keys(a, perm) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace dama
