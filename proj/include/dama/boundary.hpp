#pragma once

// Symbolic boundary expressions built from atoms, three constants and an
// n-ary dense-amalgam node, with a canonicalizing normalizer.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dama {

/// Declaration order is the sort rank used inside normal forms.
enum class Kind : std::uint8_t { Atom, Cantor, PointPair, Empty, Amalgam };

namespace trait {
inline constexpr unsigned kTotallyDisconnected = 1U;
inline constexpr unsigned kTwoPoint = 2U;
}  // namespace trait

class BoundaryExpr {
 public:
  static BoundaryExpr empty() { return BoundaryExpr(Kind::Empty); }
  static BoundaryExpr cantor() { return BoundaryExpr(Kind::Cantor); }
  static BoundaryExpr point_pair() { return BoundaryExpr(Kind::PointPair); }
  /// `two_point` forces `totally_disconnected`.
  static BoundaryExpr atom(std::string name, unsigned traits = 0);
  /// Throws PreconditionError on an empty argument list.
  static BoundaryExpr amalgam(std::vector<BoundaryExpr> args);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  unsigned traits() const { return traits_; }
  const std::vector<BoundaryExpr>& args() const { return args_; }

  bool is_leaf() const { return kind_ != Kind::Amalgam; }
  /// Cantor, PointPair, or an atom carrying the totally_disconnected trait.
  /// Empty and Amalgam nodes are not leaves of this class.
  bool is_totally_disconnected() const;

  std::size_t leaf_count() const;
  std::size_t depth() const;

  friend bool operator==(const BoundaryExpr&, const BoundaryExpr&) = default;

 private:
  explicit BoundaryExpr(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Empty;
  std::string name_;
  unsigned traits_ = 0;
  std::vector<BoundaryExpr> args_;
};

/// Total order: kind rank, then name, traits, then arguments.
int compare(const BoundaryExpr& a, const BoundaryExpr& b);
inline bool operator<(const BoundaryExpr& a, const BoundaryExpr& b) { return compare(a, b) < 0; }

/// Builds an unnormalized amalgam. Throws "zero-ary amalgam undefined" on [].
BoundaryExpr amalgam_of(std::vector<BoundaryExpr> args);

/// Rewrites to the unique normal form:
///   flatten nested amalgams; drop Empty arguments; drop totally disconnected
///   arguments when a non-totally-disconnected one remains; an amalgam whose
///   arguments are all totally disconnected (or vanished) becomes Cantor;
///   sort and deduplicate. Leaves are returned unchanged.
BoundaryExpr normalize(const BoundaryExpr& e);

bool is_normal_form(const BoundaryExpr& e);
bool equal_normal(const BoundaryExpr& a, const BoundaryExpr& b);

/// Printer for the textual grammar, e.g. `Amalgam(a, b:td, Cantor)`.
std::string to_string(const BoundaryExpr& e);

/// Parser for the same grammar. Throws InputError with the byte offset.
BoundaryExpr parse_expr(std::string_view text);

}  // namespace dama
