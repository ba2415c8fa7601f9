#include <cmath>

#include "doctest.h"
#include "dama/approx.hpp"
#include "dama/error.hpp"

using namespace dama;

namespace {

FiniteMetricSpace point() { return FiniteMetricSpace::trusted({"o"}, {0.0}); }

// Floyd-Warshall over the glued copies, as an independent check of the
// explicit tree-path distances.
std::vector<double> wedge_oracle(const AmalgamApprox& a) {
  const std::size_t nb = a.joined.size();
  std::size_t next = a.labels.size();
  std::vector<std::vector<std::size_t>> vid(a.nodes.size());
  std::map<std::pair<int, int>, std::size_t> glue;
  for (std::size_t t = 0; t < a.nodes.size(); ++t) {
    const auto& node = a.nodes[t];
    for (std::size_t b = 0; b < nb; ++b) vid[t].push_back(node.points[b]);
    for (const auto& slot : node.slots) {
      if (slot.end) {
        vid[t].push_back(static_cast<std::size_t>(node.end_point));
      } else if (slot.neighbour >= 0) {
        std::pair<int, int> key{std::min(static_cast<int>(t), slot.neighbour), std::max(static_cast<int>(t), slot.neighbour)};
        auto it = glue.find(key);
        if (it == glue.end()) it = glue.emplace(key, next++).first;
        vid[t].push_back(it->second);
      } else {
        vid[t].push_back(next++);
      }
    }
  }
  const std::size_t n = next;
  std::vector<double> w(n * n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 0.0;
  for (std::size_t t = 0; t < a.nodes.size(); ++t) {
    const auto& node = a.nodes[t];
    PeripheralModel model;
    model.base = a.joined;
    for (const auto& slot : node.slots) model.peripheral.push_back({slot.anchor, slot.radius});
    for (std::size_t i = 0; i < vid[t].size(); ++i) {
      for (std::size_t j = 0; j < vid[t].size(); ++j) {
        double d = node.scale * model.d(i, j);
        auto& cell = w[vid[t][i] * n + vid[t][j]];
        cell = std::min(cell, d);
      }
    }
  }
  auto all = floyd_warshall(std::move(w), n);
  const std::size_t m = a.labels.size();
  std::vector<double> out(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] = all[i * n + j];
  }
  return out;
}

}  // namespace

TEST_CASE("peripheral_extension examples") {
  auto m = peripheral_extension(point(), 3, 1.0, 0.5);
  REQUIRE(m.peripheral.size() == 3);
  CHECK(m.peripheral[0].radius == 0.5);
  CHECK(m.peripheral[1].radius == 0.25);
  CHECK(m.peripheral[2].radius == 0.125);
  CHECK(m.d(1, 2) == m.peripheral[0].radius + m.peripheral[1].radius);

  auto same = peripheral_extension(two_point(), 0, 1.0, 0.5);
  CHECK(same.peripheral.empty());
  CHECK(same.as_space() == two_point());

  auto two = peripheral_extension(two_point(1.0), 2, 1.0, 0.5);
  CHECK(two.peripheral[0].anchor == 0);
  CHECK(two.peripheral[1].anchor == 1);
  CHECK(two.d(2, 3) == two.peripheral[0].radius + two.peripheral[1].radius + 1.0);

  auto circle = peripheral_extension(circle_net(5), 23, 0.7, 0.8);
  CHECK(circle.as_space().triangle_defect() <= 1e-15);
  // Radii strictly decrease per anchor.
  for (std::size_t j = 5; j < circle.peripheral.size(); ++j) {
    CHECK(circle.peripheral[j].anchor == circle.peripheral[j - 5].anchor);
    CHECK(circle.peripheral[j].radius < circle.peripheral[j - 5].radius);
  }
  CHECK_THROWS_AS(peripheral_extension(point(), 1, 0.0, 0.5), PreconditionError);
}

TEST_CASE("build_approx examples") {
  auto a = build_approx({two_point(1.0)}, 1, 2, 1.0 / 3.0);
  CHECK(a.nodes.size() == 3);
  CHECK(a.space.size() == 8);
  std::size_t ends = std::count_if(a.labels.begin(), a.labels.end(), [](auto& l) { return l.is_end; });
  CHECK(ends == 2);
  CHECK(a.space.diameter(a.copy_points(1, 0)) == doctest::Approx(1.0 / 3.0));

  auto single = build_approx({two_point(1.0)}, 0, 1, 0.5);
  CHECK(single.nodes.size() == 1);
  CHECK(single.space.size() == 3);

  auto pair = build_approx({two_point(1.0), circle_net(3)}, 2, 2, 0.25);
  for (std::size_t t = 0; t < pair.nodes.size(); ++t) {
    CHECK(pair.copy_points(static_cast<int>(t), 0).size() == 2);
    CHECK(pair.copy_points(static_cast<int>(t), 1).size() == 3);
  }

  CHECK_THROWS_AS(build_approx({}, 1, 1, 0.3), PreconditionError);
  CHECK_THROWS_AS(build_approx({two_point()}, 1, 0, 0.3), PreconditionError);
  CHECK_THROWS_AS(build_approx({two_point()}, 1, 2, 0.75), PreconditionError);
  CHECK_THROWS_AS(build_approx({two_point()}, 12, 3, 0.3), PreconditionError);
}

TEST_CASE("wedge distances agree with shortest paths") {
  for (auto xs : std::vector<std::vector<FiniteMetricSpace>>{
           {two_point()}, {circle_net(5)}, {two_point(0.5), circle_net(4)}, {point()}}) {
    auto a = build_approx(xs, 3, 2, 1.0 / 3.0);
    auto oracle = wedge_oracle(a);
    double worst = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) worst = std::max(worst, std::abs(oracle[i] - a.space.flat()[i]));
    CHECK(worst <= 1e-12);
    CHECK(a.space.triangle_defect() <= 1e-12);
    // Scale law, exactly.
    for (std::size_t t = 0; t < a.nodes.size(); ++t) {
      for (int c = 0; c < static_cast<int>(xs.size()); ++c) {
        CHECK(a.space.diameter(a.copy_points(static_cast<int>(t), c)) ==
              std::pow(a.lambda, a.nodes[t].depth) * xs[c].diameter());
      }
    }
  }
}

TEST_CASE("basic_open_set and half_space") {
  auto a = build_approx({circle_net(5)}, 2, 3, 1.0 / 3.0);
  const std::size_t nb = a.joined.size();
  const int t = 1;
  std::vector<std::size_t> everything;
  for (std::size_t m = 0; m < nb + a.nodes[t].slots.size(); ++m) everything.push_back(m);
  CHECK(basic_open_set(a, t, everything).size() == a.space.size());

  std::vector<std::size_t> base_only;
  for (std::size_t m = 0; m < nb; ++m) base_only.push_back(m);
  CHECK(basic_open_set(a, t, base_only) == a.nodes[t].points);

  const int child = a.nodes[t].children[1];
  auto toward = basic_open_set(a, t, {nb + a.slot_toward(t, child)});
  CHECK(toward == a.subtree_points(child));
  CHECK_THROWS_AS(basic_open_set(a, 99, {}), PreconditionError);
  CHECK_THROWS_AS(half_space(a, 1, 2), PreconditionError);

  CHECK(half_space(a, 0, 1) == a.subtree_points(1));
  for (std::size_t c = 1; c < a.nodes.size(); ++c) {
    const int p = a.nodes[c].parent;
    auto plus = half_space(a, p, static_cast<int>(c));
    auto minus = half_space(a, static_cast<int>(c), p);
    std::vector<std::size_t> both;
    std::set_union(plus.begin(), plus.end(), minus.begin(), minus.end(), std::back_inserter(both));
    CHECK(both.size() == a.space.size());
    CHECK(plus.size() + minus.size() == a.space.size());
    // Copies never straddle a half-space.
    for (const auto& node : a.nodes) {
      std::size_t inside = std::count_if(node.points.begin(), node.points.end(), [&](std::size_t x) {
        return std::binary_search(plus.begin(), plus.end(), x);
      });
      CHECK((inside == 0 || inside == node.points.size()));
    }
    // The same set as D(head, model minus the slot toward tail).
    std::vector<std::size_t> u;
    for (std::size_t m = 0; m < nb + a.nodes[c].slots.size(); ++m) {
      if (m != nb + a.slot_toward(static_cast<int>(c), p)) u.push_back(m);
    }
    CHECK(basic_open_set(a, static_cast<int>(c), u) == plus);
  }
}

TEST_CASE("check_conditions examples") {
  for (auto x : {circle_net(5), two_point()}) {
    auto a = build_approx({x}, 3, 3, 1.0 / 3.0);
    auto rep = check_conditions(a);
    for (const auto& c : rep.conditions) {
      CAPTURE(c.name);
      CAPTURE(c.achieved);
      CHECK(c.verdict == Verdict::Pass);
    }
  }
  ApproxOptions hook;
  hook.check_lambda = false;
  auto flat = build_approx({circle_net(5)}, 2, 2, 1.0, hook);
  auto rep = check_conditions(flat);
  CHECK(rep.find("a2")->verdict == Verdict::Fail);

  auto lone = build_approx({circle_net(5)}, 0, 1, 1.0 / 3.0);
  auto lone_rep = check_conditions(lone);
  CHECK(lone_rep.find("a4")->verdict == Verdict::Pass);
  CHECK(lone_rep.find("a5")->verdict == Verdict::Pass);

  auto classes = build_approx({two_point(), circle_net(5)}, 2, 3, 1.0 / 3.0);
  CHECK(check_conditions(classes).all_pass());
}

TEST_CASE("density residual per level") {
  auto a = build_approx({two_point(), circle_net(4)}, 3, 2, 1.0 / 3.0);
  auto rep = check_conditions(a);
  const double diam = a.joined.diameter();
  for (int j = 0; j <= a.depth; ++j) {
    const double gap = rep.find("a4")->metrics.at("max_gap_level_" + std::to_string(j));
    CHECK(gap <= std::pow(a.lambda, j) * (diam + 2.0 * a.r0));
  }
}

TEST_CASE("tightening a tolerance can fail a check") {
  auto a = build_approx({circle_net(5)}, 2, 2, 1.0 / 3.0);
  ConditionTolerances tight;
  tight.boundary_gap = 1e-6;
  tight.separation_gap = 10.0;
  auto rep = check_conditions(a, tight);
  CHECK(rep.find("a3")->verdict == Verdict::Fail);
  CHECK(rep.find("a5")->verdict == Verdict::Fail);
}
