#pragma once

// Graphs of groups with finite edge groups, described by group orders and
// inclusion indices only.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dama/boundary.hpp"
#include "dama/verdict.hpp"

namespace dama {

/// Extended natural: a positive order or index, or infinity.
inline constexpr std::uint64_t kInfiniteOrder = std::numeric_limits<std::uint64_t>::max();

struct GroupVertex {
  std::string name;
  std::uint64_t order = 1;
  BoundaryExpr boundary = BoundaryExpr::empty();

  bool finite() const { return order != kInfiniteOrder; }
};

/// An unoriented edge. Orientation k (0 or 1) points into ends[k]; its
/// index is [G_{ends[k]} : image of the edge group].
struct GroupEdge {
  std::string name;
  int ends[2] = {0, 0};
  std::uint64_t edge_order = 1;

  bool is_loop() const { return ends[0] == ends[1]; }
};

class GraphOfGroups {
 public:
  /// Throws InputError when names repeat, an end is out of range, an edge
  /// order fails to divide a finite end's order, a finite vertex carries a
  /// nonempty boundary, or the graph is disconnected.
  GraphOfGroups(std::vector<GroupVertex> vertices, std::vector<GroupEdge> edges);

  const std::vector<GroupVertex>& vertices() const { return vertices_; }
  const std::vector<GroupEdge>& edges() const { return edges_; }

  /// Index of the orientation of edge `e` pointing into ends[k].
  std::uint64_t index(std::size_t e, int k) const;

  int vertex_index(std::string_view name) const;
  int edge_index(std::string_view name) const;

 private:
  std::vector<GroupVertex> vertices_;
  std::vector<GroupEdge> edges_;
};

/// JSON: {"vertices":[{"name","order":n|"inf","boundary":expr}],
///        "edges":[{"name","ends":[v,w],"edge_order":n,"index":[i,j]}]}.
/// Infinite vertices without a boundary get the atom "d<name>". A given
/// "index" array must match the derived indices.
GraphOfGroups parse_graph_of_groups(std::string_view json_text);

struct TrivialEdge {
  std::size_t edge = 0;
  /// End whose group the edge group fills (index 1); it gets absorbed.
  int absorbed = 0;
  int kept = 0;
};

/// Non-loop edges with an index-1 orientation, sorted by edge name.
std::vector<TrivialEdge> trivial_edges(const GraphOfGroups& g);

/// Contracts `edge`; the merged vertex keeps the other end's group and name.
/// Throws PreconditionError when the edge is not trivial.
GraphOfGroups elementary_collapse(const GraphOfGroups& g, std::size_t edge);

GraphOfGroups reduce(const GraphOfGroups& g);

bool is_non_elementary(const GraphOfGroups& g);

struct BallNode {
  int parent = -1;
  int label = 0;      // vertex of the underlying graph
  int via_edge = -1;  // edge to the parent
  int depth = 0;
  std::uint64_t degree = 0;
  bool unexplored = false;
  std::vector<int> children;
};

struct BassSerreBall {
  int base = 0;
  int radius = 0;
  std::vector<BallNode> nodes;  // breadth-first; node 0 is the root
};

struct BallCaps {
  int max_radius = 16;
  std::size_t max_nodes = 2'000'000;
};

/// Throws PreconditionError("tree not locally finite at <v>") when an index
/// met during expansion is infinite, or when a cap is exceeded.
BassSerreBall bass_serre_ball(const GraphOfGroups& g, int base, int radius, BallCaps caps = {});

/// Tree-vertex degree for a vertex of the graph, or kInfiniteOrder.
std::uint64_t tree_degree(const GraphOfGroups& g, int v);

struct SeparationReport {
  struct EdgeCheck {
    int child = 0;  // the edge joins this node to its parent
    Verdict verdict = Verdict::Inconclusive;
  };
  std::vector<EdgeCheck> edges;
  Verdict all_edges = Verdict::Inconclusive;
  /// Nodes whose removal leaves at least three components reaching the
  /// truncation boundary.
  std::vector<int> three_way;
  Verdict three_way_verdict = Verdict::Inconclusive;
};

SeparationReport check_separation(const BassSerreBall& ball, const GraphOfGroups& g);

/// Throws PreconditionError for elementary input.
BoundaryExpr boundary_expression(const GraphOfGroups& g);

/// Same underlying graph, orders, edge orders and boundaries up to renaming.
/// Exhaustive; intended for at most 8 vertices.
bool isomorphic(const GraphOfGroups& a, const GraphOfGroups& b);

}  // namespace dama
