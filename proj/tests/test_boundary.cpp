#include "doctest.h"
#include "dama/boundary.hpp"
#include "dama/error.hpp"
#include "gen.hpp"

using namespace dama;

namespace {

BoundaryExpr P(std::string_view s) { return parse_expr(s); }
BoundaryExpr N(std::string_view s) { return normalize(parse_expr(s)); }

}  // namespace

TEST_CASE("normalize examples") {
  CHECK(N("Amalgam(Empty)") == BoundaryExpr::cantor());
  CHECK(N("Amalgam(A, Amalgam(A))") == P("Amalgam(A)"));
  CHECK(N("Amalgam(PointPair, A)") == P("Amalgam(A)"));
  CHECK(N("Amalgam(B, A)") == N("Amalgam(A, A, B)"));
  CHECK(to_string(N("Amalgam(B, A)")) == "Amalgam(A, B)");
  CHECK(N("Amalgam(Cantor, Cantor)") == BoundaryExpr::cantor());
  CHECK(N("Amalgam(A)") != P("A"));
  CHECK(N("A:td") == P("A:td"));
  CHECK(N("Amalgam(x:td, y:two_point)") == BoundaryExpr::cantor());
}

TEST_CASE("equal_normal examples") {
  CHECK(equal_normal(P("Amalgam(A,B)"), P("Amalgam(B,A)")));
  CHECK_FALSE(equal_normal(P("Amalgam(A)"), P("A")));
  CHECK(equal_normal(P("Amalgam(A, Empty)"), P("Amalgam(A)")));
}

TEST_CASE("amalgam_of") {
  CHECK(to_string(amalgam_of({BoundaryExpr::empty()})) == "Amalgam(Empty)");
  CHECK_THROWS_WITH_AS(amalgam_of({}), "zero-ary amalgam undefined", PreconditionError);
  CHECK(to_string(amalgam_of({P("A"), P("B")})) == "Amalgam(A, B)");
}

TEST_CASE("sort order puts atoms before constants") {
  auto e = BoundaryExpr::amalgam({BoundaryExpr::empty(), BoundaryExpr::point_pair(),
                                  BoundaryExpr::cantor(), P("Z")});
  auto args = e.args();
  std::sort(args.begin(), args.end());
  CHECK(args[0].kind() == Kind::Atom);
  CHECK(args[1].kind() == Kind::Cantor);
  CHECK(args[2].kind() == Kind::PointPair);
  CHECK(args[3].kind() == Kind::Empty);
}

TEST_CASE("parser") {
  CHECK(to_string(P(" Amalgam( a ,Amalgam(b), Cantor ) ")) == "Amalgam(a, Amalgam(b), Cantor)");
  CHECK(P("dW{a,b,c}").name() == "dW{a,b,c}");
  CHECK(P("q:two_point").traits() == (trait::kTwoPoint | trait::kTotallyDisconnected));
  CHECK_THROWS_AS(P("Amalgam()"), InputError);
  CHECK_THROWS_AS(P("Amalgam(a"), InputError);
  CHECK_THROWS_AS(P("a:weird"), InputError);
  CHECK_THROWS_AS(P("a b"), InputError);
  CHECK_THROWS_AS(P(""), InputError);
  CHECK_THROWS_AS(P("x{a,b"), InputError);
  gen::ExprGen g(3);
  for (int i = 0; i < 500; ++i) {
    auto e = g.next();
    CHECK(parse_expr(to_string(e)) == e);
  }
}

TEST_CASE("normal forms are fixed points and satisfy the shape invariants") {
  gen::ExprGen g(5);
  for (int i = 0; i < 2000; ++i) {
    auto e = g.next();
    auto n = normalize(e);
    CHECK(is_normal_form(n));
    CHECK(normalize(n) == n);
    CHECK(n.leaf_count() <= e.leaf_count());
  }
}
