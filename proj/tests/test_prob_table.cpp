// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/prob_table.hpp"

#include <doctest.h>

#include <random>
#include <vector>

#include "bellaudit/errors.hpp"
#include "test_util.hpp"

using namespace bellaudit;
using test_util::near;

namespace {

Eigen::ArrayXd vals(std::initializer_list<double> v) {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ProbTable joint_ab(std::initializer_list<double> v) {
  return ProbTable({{"A", {"+", "-"}}, {"B", {"+", "-"}}}, vals(v));
}

}  // namespace

TEST_SUITE_BEGIN("prob_table");

TEST_CASE("construction rejects invalid tables") {
  const std::vector<Axis> ab = {{"A", {"+", "-"}}, {"B", {"+", "-"}}};
  CHECK_THROWS_AS(ProbTable(ab, vals({0.5, 0.5, 0.5, -0.5})), TableError);
  CHECK_THROWS_AS(ProbTable({{"A", {"+", "-"}}, {"A", {"x", "y"}}},
                            vals({0.25, 0.25, 0.25, 0.25})),
                  TableError);
  CHECK_THROWS_AS(ProbTable({{"A", {}}}, vals({})), TableError);
  CHECK_THROWS_AS(ProbTable(ab, vals({0.5, 0.5})), TableError);
  CHECK_THROWS_AS(ProbTable(ab, vals({0.4, 0.2, 0.2, 0.1})), TableError);

  // Unnormalized weight vectors are allowed when flagged.
  const ProbTable raw(ab, vals({0.4, 0.2, 0.2, 0.1}), false);
  CHECK(raw.sum() == doctest::Approx(0.9));
  CHECK_FALSE(raw.normalized());

  // tau_norm widens the normalization gate.
  CHECK_NOTHROW(ProbTable(ab, vals({0.4, 0.2, 0.2, 0.15}), true,
                          Tolerance{1e-9, 0.1}));
}

TEST_CASE("uniform and point_mass") {
  const ProbTable u = ProbTable::uniform({{"A", {"+", "-"}}, {"B", {"+", "-"}}});
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(u[i] == 0.25);

  const ProbTable p =
      ProbTable::point_mass({{"A", {"+", "-"}}, {"B", {"+", "-"}}}, {"-", "+"});
  CHECK(p.at({1, 0}) == 1.0);
  CHECK(p.sum() == 1.0);
  CHECK_THROWS_AS(
      ProbTable::point_mass({{"A", {"+", "-"}}}, {"+", "-"}), TableError);
  CHECK_THROWS_AS(
      ProbTable::point_mass({{"A", {"+", "-"}}}, {"nope"}), AxisError);
}

TEST_CASE("indexing is row-major over the declared axes") {
  const std::vector<Axis> axes = {
      {"u", {"u0", "u1"}}, {"v", {"v0", "v1", "v2"}}, {"w", {"w0", "w1"}}};
  const ProbTable t = ProbTable::uniform(axes);
  REQUIRE(t.size() == 12);

  // Independent stride computation: last axis fastest.
  Eigen::Index flat = 0;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      for (Eigen::Index k = 0; k < 2; ++k) {
        const Eigen::Index multi[] = {i, j, k};
        CHECK(t.flat_index(multi) == flat);
        const std::vector<Eigen::Index> back = t.multi_index(flat);
        CHECK(back == std::vector<Eigen::Index>{i, j, k});
        ++flat;
      }
    }
  }
  CHECK(t.axis_index("v") == 1);
  CHECK(t.has_axis("w"));
  CHECK_FALSE(t.has_axis("z"));
  CHECK_THROWS_AS(t.axis_index("z"), AxisError);
  CHECK(t.label_index(1, "v2") == 2);
  CHECK_THROWS_AS(t.label_index(1, "v9"), AxisError);
}

TEST_CASE("labels_at and cell_ref name the joint cell") {
  const ProbTable t = joint_ab({0.5, 0.0, 0.0, 0.5});
  CHECK(t.labels_at(1) == std::vector<std::string>{"+", "-"});
  CHECK(t.cell_ref(2).str() == "A=- B=+");
}

TEST_CASE("marginalize sums out the complement") {
  const ProbTable t = joint_ab({0.5, 0.0, 0.0, 0.5});
  const ProbTable ma = marginalize(t, {"A"});
  REQUIRE(ma.rank() == 1);
  CHECK(ma[0] == 0.5);
  CHECK(ma[1] == 0.5);

  // Keeping every axis returns the same numbers.
  const ProbTable same = marginalize(t, {"A", "B"});
  CHECK((same.values() == t.values()).all());

  // Kept axes stay in declared order no matter the keep order.
  const ProbTable swapped = marginalize(t, {"B", "A"});
  CHECK(swapped.axes()[0].name == "A");

  CHECK_THROWS_AS(marginalize(t, {"nope"}), AxisError);

  // Iterated marginals agree with the one-shot marginal.
  const ProbTable t3 = ProbTable(
      {{"A", {"+", "-"}}, {"B", {"+", "-"}}, {"C", {"c0", "c1"}}},
      vals({0.1, 0.1, 0.05, 0.05, 0.2, 0.1, 0.25, 0.15}));
  const ProbTable once = marginalize(t3, {"A"});
  const ProbTable twice = marginalize(marginalize(t3, {"A", "B"}), {"A"});
  for (Eigen::Index i = 0; i < 2; ++i) CHECK(near(once[i], twice[i], 1e-15));
}

TEST_CASE("condition renormalizes and drops the conditioning axis") {
  // P(A,B) with P(A=+|B=+) = 1: conditioning kills the other cell.
  const ProbTable t = joint_ab({0.25, 0.25, 0.0, 0.5});
  const ProbTable c = condition(t, "B", "+");
  REQUIRE(c.rank() == 1);
  CHECK(c.axes()[0].name == "A");
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 0.0);

  CHECK_THROWS_AS(condition(t, "B", "b9"), AxisError);
  CHECK_THROWS_AS(condition(t, "nope", "+"), AxisError);
}

TEST_CASE("conditioning on a null event raises ZeroConditionError") {
  const ProbTable t = joint_ab({0.5, 0.5, 0.0, 0.0});
  CHECK_THROWS_AS(condition(t, "A", "-"), ZeroConditionError);
  // The gate is tau_norm, not exact zero.
  const ProbTable u = joint_ab({0.25, 0.25, 0.25, 0.25});
  CHECK_THROWS_AS(condition(u, "A", "-", Tolerance{1e-9, 0.5}),
                  ZeroConditionError);
  CHECK_NOTHROW(condition(u, "A", "-", Tolerance{1e-9, 0.49}));
}

TEST_CASE("conditionals reconstruct the joint within 4*tau_norm") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::ArrayXd w(6);
    for (Eigen::Index i = 0; i < 6; ++i) {
      w[i] = 0.05 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    w /= w.sum();
    const ProbTable t({{"A", {"+", "-"}}, {"B", {"b0", "b1", "b2"}}}, w);
    const ProbTable mb = marginalize(t, {"B"});
    for (Eigen::Index ib = 0; ib < 3; ++ib) {
      const ProbTable ca = condition(t, "B", t.axes()[1].labels[ib]);
      for (Eigen::Index ia = 0; ia < 2; ++ia) {
        CHECK(near(ca[ia] * mb[ib], t.at({ia, ib}), 4e-9));
      }
    }
  }
}

TEST_CASE("table_close reports the sup deviation and first witness") {
  const ProbTable t1({{"A", {"+", "-"}}}, vals({0.5, 0.5}));
  const ProbTable t2({{"A", {"+", "-"}}}, vals({0.6, 0.4}));
  const CloseResult r = table_close(t1, t2);
  CHECK_FALSE(r.close);
  CHECK(near(r.max_deviation, 0.1, 1e-15));
  CHECK(r.witness == 0);

  CHECK(table_close(t1, t1).close);
  CHECK(table_close(t1, t1).max_deviation == 0.0);
  CHECK(table_close(t1, t2, Tolerance{0.2, 1e-9}).close);

  const ProbTable other({{"B", {"+", "-"}}}, vals({0.5, 0.5}));
  CHECK_THROWS_AS(table_close(t1, other), AxisError);
}

TEST_CASE("table_close satisfies the triangle inequality") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::ArrayXd w[3];
    for (auto& v : w) {
      v.resize(4);
      for (Eigen::Index i = 0; i < 4; ++i) {
        v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      }
      v /= v.sum();
    }
    const ProbTable a = joint_ab({w[0][0], w[0][1], w[0][2], w[0][3]});
    const ProbTable b = joint_ab({w[1][0], w[1][1], w[1][2], w[1][3]});
    const ProbTable c = joint_ab({w[2][0], w[2][1], w[2][2], w[2][3]});
    CHECK(table_close(a, c).max_deviation <=
          table_close(a, b).max_deviation + table_close(b, c).max_deviation +
              1e-15);
  }
}

TEST_SUITE_END();
