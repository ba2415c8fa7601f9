#pragma once

// Finite abstract simplicial complexes stored by maximal faces, with
// splittings along simplices and terminal decompositions.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dama {

/// Vertex subsets are bitmasks over the complex's vertex order.
using VertexSet = std::uint64_t;

inline constexpr std::size_t kMaxVertices = 64;

inline bool contains(VertexSet outer, VertexSet inner) {
  return (outer & inner) == inner;
}

/// Lexicographic order on the sorted index lists of two vertex sets.
bool lex_less(VertexSet a, VertexSet b);

std::vector<int> members(VertexSet s);

class SimplicialComplex {
 public:
  /// Vertices are sorted by name; faces are reduced to their maximal members.
  /// Throws InputError on an empty vertex list, unknown or duplicate vertices,
  /// empty faces, or vertices covered by no face.
  SimplicialComplex(std::vector<std::string> vertices,
                    const std::vector<std::vector<std::string>>& faces);

  /// `names` must already be sorted and unique.
  static SimplicialComplex from_masks(std::vector<std::string> names,
                                      const std::vector<VertexSet>& faces);

  std::size_t size() const { return names_.size(); }
  VertexSet all() const;
  const std::vector<std::string>& vertices() const { return names_; }
  const std::vector<VertexSet>& maximal_faces() const { return faces_; }

  /// True for any subset of a maximal face (the empty set included).
  bool is_simplex(VertexSet s) const;
  VertexSet neighbours(int v) const { return adjacency_[v]; }
  bool has_edge(int u, int v) const { return (adjacency_[u] >> v) & 1U; }

  std::vector<std::string> names_of(VertexSet s) const;
  VertexSet mask_of(const std::vector<std::string>& names) const;
  int index_of(const std::string& name) const;

  friend bool operator==(const SimplicialComplex&, const SimplicialComplex&) = default;

 private:
  SimplicialComplex() = default;
  void finish(std::vector<VertexSet> faces);

  std::vector<std::string> names_;
  std::vector<VertexSet> faces_;
  std::vector<VertexSet> adjacency_;
};

/// Parts are full subcomplexes on `part1` and `part2`; `part1` precedes
/// `part2` lexicographically.
struct Splitting {
  VertexSet part1 = 0;
  VertexSet part2 = 0;
  VertexSet separator = 0;

  friend bool operator==(const Splitting&, const Splitting&) = default;
};

bool is_flag(const SimplicialComplex& c);
bool is_chordal(const SimplicialComplex& c);

SimplicialComplex full_subcomplex(const SimplicialComplex& c, VertexSet vs);

/// All simplices of the full subcomplex on `within`, the empty one first.
std::vector<VertexSet> simplices_within(const SimplicialComplex& c, VertexSet within);

/// Connected components of the 1-skeleton of the full subcomplex on `within`,
/// ordered by smallest vertex.
std::vector<VertexSet> components(const SimplicialComplex& c, VertexSet within);

std::vector<Splitting> enumerate_splittings(const SimplicialComplex& c);
std::vector<Splitting> enumerate_splittings(const SimplicialComplex& c, VertexSet within);

bool is_irreducible(const SimplicialComplex& c);
bool is_irreducible(const SimplicialComplex& c, VertexSet within);

/// Inclusion-maximal factors of a terminal decomposition, sorted
/// lexicographically.
std::vector<VertexSet> terminal_factors(const SimplicialComplex& c);

/// Same, but each recursion step picks a uniformly random splitting.
std::vector<VertexSet> terminal_factors(const SimplicialComplex& c, std::mt19937_64& rng);

/// Brute force over all vertex subsets; throws PreconditionError above `bound`.
std::vector<VertexSet> maximally_full_irreducible(const SimplicialComplex& c,
                                                  std::size_t bound = 12);

/// Flag with chordal 1-skeleton.
bool is_infinity_large(const SimplicialComplex& c);

}  // namespace dama
