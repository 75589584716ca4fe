// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "bellaudit/errors.hpp"
#include "test_util.hpp"

using namespace bellaudit;
using test_util::kPi;
using test_util::near;

namespace {

ProbTable lambda_prior(std::initializer_list<double> w) {
  Eigen::ArrayXd v(static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  std::vector<std::string> labels;
  for (double x : w) {
    v[i++] = x;
    labels.push_back("l" + std::to_string(labels.size()));
  }
  return ProbTable({{kAxisLambda, labels}}, v);
}

ProbTable kernel2x2(double pp, double pm, double mp, double mm) {
  Eigen::ArrayXd v(4);
  v << pp, pm, mp, mm;
  return ProbTable(
      {{kAxisOutcomeA, {"+1", "-1"}}, {kAxisOutcomeB, {"+1", "-1"}}}, v);
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("singlet kernels match the closed form") {
  const std::vector<double> ta = {0.0, kPi / 2};
  const std::vector<double> tb = {kPi / 4, 3 * kPi / 4};
  const BellModel m = build_singlet(ta, tb);
  REQUIRE(m.n_lambdas() == 1);
  const int sign[2] = {+1, -1};
  for (Eigen::Index ia = 0; ia < 2; ++ia) {
    for (Eigen::Index ib = 0; ib < 2; ++ib) {
      const ProbTable& k = m.kernel(ia, ib, 0);
      for (Eigen::Index iA = 0; iA < 2; ++iA) {
        for (Eigen::Index iB = 0; iB < 2; ++iB) {
          const double expected =
              0.25 * (1.0 - sign[iA] * sign[iB] * std::cos(ta[ia] - tb[ib]));
          CHECK(near(k.at({iA, iB}), expected, 1e-12));
          CHECK(k.at({iA, iB}) >= 0.0);
          CHECK(k.at({iA, iB}) <= 0.5 + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("singlet limiting angles") {
  // Perfect anticorrelation at equal angles.
  const BellModel aligned = build_singlet({0.7}, {0.7});
  CHECK(near(aligned.kernel(0, 0, 0).at({0, 0}), 0.0, 1e-12));
  CHECK(near(aligned.kernel(0, 0, 0).at({0, 1}), 0.5, 1e-12));

  // Orthogonal angles wash out to the uniform table.
  const BellModel ortho = build_singlet({0.0}, {kPi / 2});
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(near(ortho.kernel(0, 0, 0)[i], 0.25, 1e-12));
  }

  CHECK_THROWS_AS(build_singlet({}, {0.0}), ModelError);
}

TEST_CASE("pr box cells follow the xor rule with uniform marginals") {
  const BellModel m = build_pr_box();
  const Phenomenology ph = predict(m);
  for (Eigen::Index ia = 0; ia < 2; ++ia) {
    for (Eigen::Index ib = 0; ib < 2; ++ib) {
      const ProbTable& t = ph.table(ia, ib);
      for (Eigen::Index iA = 0; iA < 2; ++iA) {
        for (Eigen::Index iB = 0; iB < 2; ++iB) {
          const double expected = ((iA ^ iB) == (ia & ib)) ? 0.5 : 0.0;
          CHECK(t.at({iA, iB}) == expected);
        }
      }
      const ProbTable ma = marginalize(t, {kAxisOutcomeA});
      const ProbTable mb = marginalize(t, {kAxisOutcomeB});
      for (Eigen::Index i = 0; i < 2; ++i) {
        CHECK(near(ma[i], 0.5, 1e-15));
        CHECK(near(mb[i], 0.5, 1e-15));
      }
    }
  }
}

TEST_CASE("deterministic local models predict point masses") {
  const std::map<std::string, std::string> ra = {{"a0", "+1"}, {"a1", "-1"}};
  const std::map<std::string, std::string> rb = {{"b0", "-1"}, {"b1", "-1"}};
  const BellModel m = build_deterministic_local(ra, rb);
  const Phenomenology ph = predict(m);
  for (Eigen::Index ia = 0; ia < 2; ++ia) {
    for (Eigen::Index ib = 0; ib < 2; ++ib) {
      const ProbTable& t = ph.table(ia, ib);
      const Eigen::Index iA =
          t.label_index(0, ra.at(m.settings_a()[ia]));
      const Eigen::Index iB =
          t.label_index(1, rb.at(m.settings_b()[ib]));
      CHECK(t.at({iA, iB}) == 1.0);
      CHECK(t.sum() == 1.0);
    }
  }
}

TEST_CASE("prediction is the prior-weighted kernel average") {
  // Two hidden states: one pins (+1,+1), the other pins (-1,-1).
  const ProbTable k0 = kernel2x2(1, 0, 0, 0);
  const ProbTable k1 = kernel2x2(0, 0, 0, 1);
  auto model_with_prior = [&](double w0) {
    return BellModel({"a0"}, {"b0"}, {"+1", "-1"}, {"+1", "-1"}, {"l0", "l1"},
                     {lambda_prior({w0, 1.0 - w0})}, {k0, k1});
  };

  // Degenerate prior selects the first kernel outright.
  const Phenomenology first = predict(model_with_prior(1.0));
  CHECK((first.table(0, 0).values() == k0.values()).all());

  // Even mixture splits the mass.
  const Phenomenology half = predict(model_with_prior(0.5));
  CHECK(half.table(0, 0).at({0, 0}) == 0.5);
  CHECK(half.table(0, 0).at({1, 1}) == 0.5);

  // Linearity in the prior, cell by cell.
  for (double w : {0.1, 0.3, 0.8}) {
    const Phenomenology mixed = predict(model_with_prior(w));
    for (Eigen::Index i = 0; i < 4; ++i) {
      CHECK(near(mixed.table(0, 0)[i], w * k0[i] + (1.0 - w) * k1[i], 1e-15));
    }
  }
}

TEST_CASE("model construction validates shapes and alphabets") {
  const ProbTable k = kernel2x2(0.25, 0.25, 0.25, 0.25);
  const ProbTable p = lambda_prior({1.0});
  // One kernel missing: 2 settings x 1 setting x 1 lambda needs 2.
  CHECK_THROWS_AS(BellModel({"a0", "a1"}, {"b0"}, {"+1", "-1"}, {"+1", "-1"},
                            {"l0"}, {p, p}, {k}),
                  ModelError);
  // Prior over the wrong alphabet.
  const ProbTable bad_prior = lambda_prior({0.5, 0.5});
  CHECK_THROWS_AS(BellModel({"a0"}, {"b0"}, {"+1", "-1"}, {"+1", "-1"}, {"l0"},
                            {bad_prior}, {k}),
                  ModelError);
  // Kernel outcome alphabet disagrees with the declared one.
  CHECK_THROWS_AS(BellModel({"a0"}, {"b0"}, {"0", "1"}, {"+1", "-1"}, {"l0"},
                            {p}, {k}),
                  ModelError);
  // Duplicate setting labels.
  CHECK_THROWS_AS(BellModel({"a0", "a0"}, {"b0"}, {"+1", "-1"}, {"+1", "-1"},
                            {"l0"}, {p, p}, {k, k}),
                  ModelError);
}

TEST_CASE("lhv mixtures average their strategies") {
  DetStrategy s0{{{"a0", "+1"}, {"a1", "+1"}}, {{"b0", "+1"}, {"b1", "+1"}}};
  DetStrategy s1{{{"a0", "-1"}, {"a1", "+1"}}, {{"b0", "+1"}, {"b1", "-1"}}};
  Eigen::ArrayXd w(2);
  w << 0.25, 0.75;
  const ProbTable weights({{"strategy", {"s0", "s1"}}}, w);
  const BellModel m = build_lhv_mixture({s0, s1}, weights);
  const Phenomenology ph = predict(m);

  // Oracle: accumulate the two point masses by hand.
  const std::vector<DetStrategy> strategies = {s0, s1};
  const double wv[2] = {0.25, 0.75};
  for (Eigen::Index ia = 0; ia < 2; ++ia) {
    for (Eigen::Index ib = 0; ib < 2; ++ib) {
      Eigen::ArrayXd expected = Eigen::ArrayXd::Zero(4);
      for (int s = 0; s < 2; ++s) {
        const std::string& oa =
            strategies[s].response_a.at(m.settings_a()[ia]);
        const std::string& ob =
            strategies[s].response_b.at(m.settings_b()[ib]);
        const Eigen::Index iA = ph.table(ia, ib).label_index(0, oa);
        const Eigen::Index iB = ph.table(ia, ib).label_index(1, ob);
        expected[2 * iA + iB] += wv[s];
      }
      for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(near(ph.table(ia, ib)[i], expected[i], 1e-15));
      }
    }
  }

  // A strategy that skips a setting is rejected.
  DetStrategy partial{{{"a0", "+1"}}, {{"b0", "+1"}, {"b1", "+1"}}};
  CHECK_THROWS_AS(
      build_lhv_mixture({s0, partial}, weights, {"a0", "a1"}, {"b0", "b1"}),
      ModelError);
}

TEST_CASE("signalling demo copies the distant setting") {
  const BellModel m = build_signalling_demo();
  const Phenomenology ph = predict(m);
  // A's marginal is a point mass at the label of b, so it flips with b.
  for (Eigen::Index ia = 0; ia < 2; ++ia) {
    for (Eigen::Index ib = 0; ib < 2; ++ib) {
      const ProbTable ma = marginalize(ph.table(ia, ib), {kAxisOutcomeA});
      CHECK(ma[ib] == 1.0);
    }
  }
}

TEST_CASE("phenomenology setting lookup") {
  const Phenomenology ph = predict(build_pr_box());
  CHECK(ph.setting_index_a("1") == 1);
  CHECK(ph.setting_index_b("0") == 0);
  CHECK_THROWS_AS(ph.setting_index_a("2"), ScenarioError);
  CHECK_THROWS_AS(ph.setting_index_b("x"), ScenarioError);
}

TEST_SUITE_END();
