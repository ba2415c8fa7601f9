#pragma once

// Coxeter systems: finite-type recognition, nerves, endedness and boundary
// expressions.

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dama/boundary.hpp"
#include "dama/simplicial.hpp"

namespace dama {

/// m(s,t) = ∞.
inline constexpr int kInf = std::numeric_limits<int>::max();

/// Generator subsets are bitmasks over generator order (not name order).
using GenSet = std::uint64_t;

class CoxeterSystem {
 public:
  /// Throws InputError on duplicate generators, non-square or asymmetric
  /// matrices, diagonal entries other than 1, or off-diagonal entries < 2.
  CoxeterSystem(std::vector<std::string> generators, std::vector<std::vector<int>> m);

  std::size_t size() const { return gens_.size(); }
  const std::vector<std::string>& generators() const { return gens_; }
  int m(std::size_t s, std::size_t t) const { return m_[s][t]; }
  GenSet all() const;
  GenSet mask_of(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(GenSet t) const;

 private:
  std::vector<std::string> gens_;
  std::vector<std::vector<int>> m_;
};

/// JSON: {"generators":[...],"m":[[1,"inf"],["inf",1]]}, row-major.
CoxeterSystem parse_coxeter(std::string_view json_text);

/// Exact decision by matching each diagram component against A_n, B_n, D_n,
/// E6-8, F4, H3, H4 and I2(m).
bool is_finite_type(const CoxeterSystem& c, GenSet t);

/// Smallest eigenvalue of the cosine matrix exceeds `tol`.
bool gram_pd_test(const CoxeterSystem& c, GenSet t, double tol = 1e-9);

/// Simplices are the nonempty finite-type subsets. Throws PreconditionError
/// when |S| exceeds `cap`.
SimplicialComplex nerve(const CoxeterSystem& c, std::size_t cap = 16);

enum class Ends { Finite, TwoEnded, OneEnded, InfinitelyMany };

std::string to_string(Ends e);

struct EndednessClass {
  Ends tag = Ends::Finite;
  bool virtually_free = false;

  friend bool operator==(const EndednessClass&, const EndednessClass&) = default;
};

EndednessClass classify_endedness(const CoxeterSystem& c, std::size_t cap = 16);

/// Atom name for the boundary of the special subgroup on `t`, e.g. dW{a,b}.
std::string boundary_atom_name(const CoxeterSystem& c, GenSet t);

BoundaryExpr boundary_expression(const CoxeterSystem& c, std::size_t cap = 16);

}  // namespace dama
