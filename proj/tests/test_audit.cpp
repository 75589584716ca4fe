// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/audit.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "bellaudit/errors.hpp"
#include "bellaudit/random_models.hpp"
#include "test_util.hpp"

using namespace bellaudit;
using test_util::kPi;
using test_util::near;

namespace {

const AuditReport& find_report(const std::vector<AuditReport>& reports,
                               const std::string& condition) {
  const auto it =
      std::find_if(reports.begin(), reports.end(),
                   [&](const AuditReport& r) { return r.condition == condition; });
  REQUIRE(it != reports.end());
  return *it;
}

bool has_caveat(const AuditReport& r, const std::string& needle) {
  return std::any_of(r.caveats.begin(), r.caveats.end(),
                     [&](const std::string& c) {
                       return c.find(needle) != std::string::npos;
                     });
}

ProbTable lambda_table(const std::vector<std::string>& labels,
                       std::initializer_list<double> w) {
  Eigen::ArrayXd v(static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  for (double x : w) v[i++] = x;
  return ProbTable({{kAxisLambda, labels}}, v);
}

ProbTable bit_kernel(std::initializer_list<double> w) {
  Eigen::ArrayXd v(4);
  Eigen::Index i = 0;
  for (double x : w) v[i++] = x;
  return ProbTable({{kAxisOutcomeA, {"0", "1"}}, {kAxisOutcomeB, {"0", "1"}}},
                   v);
}

/// Setting-dependent prior, uniform kernels: only the free-variables
/// check has anything to complain about.
BellModel setting_prior_model() {
  const std::vector<std::string> ls = {"l0", "l1"};
  const ProbTable k = ProbTable::uniform(
      {{kAxisOutcomeA, {"0", "1"}}, {kAxisOutcomeB, {"0", "1"}}});
  return BellModel({"a0", "a1"}, {"b0"}, {"0", "1"}, {"0", "1"}, ls,
                   {lambda_table(ls, {1.0, 0.0}), lambda_table(ls, {0.0, 1.0})},
                   {k, k, k, k});
}

/// A hidden state with zero prior mass whose kernels let the B-side
/// marginal track the distant setting.  The setting-averaged legacy
/// conditionals never see that state, the per-state checks do.
BellModel hidden_signalling_model() {
  const std::vector<std::string> ls = {"l0", "l1"};
  const ProbTable prior = lambda_table(ls, {1.0, 0.0});
  const ProbTable uniform = bit_kernel({0.25, 0.25, 0.25, 0.25});
  const ProbTable point00 = bit_kernel({1.0, 0.0, 0.0, 0.0});
  const ProbTable point01 = bit_kernel({0.0, 1.0, 0.0, 0.0});
  return BellModel({"a0", "a1"}, {"b0"}, {"0", "1"}, {"0", "1"}, ls,
                   {prior, prior}, {uniform, point00, uniform, point01});
}

}  // namespace

TEST_SUITE_BEGIN("audit");

TEST_CASE("singlet at chsh angles: outcome clause fails, setting clause holds") {
  const BellModel m = build_singlet({0.0, kPi / 2}, {kPi / 4, 3 * kPi / 4});
  const std::vector<AuditReport> reports = audit_model(m);
  REQUIRE(reports.size() == 7);

  // Closed-form deviations: conditioning on the distant outcome shifts
  // P(A=+) from 1/2 to (1 -/+ cos d)/2, so the worst gap is cos(pi/4)/2;
  // the kernel-vs-product gap is a quarter of the cell amplitude,
  // cos(pi/4)/4.
  const double dev_conditional = std::cos(kPi / 4) / 2.0;
  const double dev_product = std::cos(kPi / 4) / 4.0;

  const AuditReport& fv = find_report(reports, kCondFreeVariables);
  CHECK(fv.verdict == Verdict::pass);
  CHECK(fv.max_deviation == 0.0);

  const AuditReport& lc = find_report(reports, kCondLocalCausality);
  CHECK(lc.verdict == Verdict::fail);
  CHECK(near(lc.max_deviation, dev_conditional, 1e-9));
  REQUIRE(lc.witness.has_value());
  CHECK(lc.witness->str() == "a=a1 b=b0 lambda=l0 B=+1 A=-1");

  const AuditReport& fact = find_report(reports, kCondFactorizability);
  CHECK(fact.verdict == Verdict::fail);
  CHECK(near(fact.max_deviation, dev_product, 1e-9));

  const AuditReport& stat = find_report(reports, kCondStatisticalSufficiency);
  CHECK(stat.verdict == Verdict::fail);
  CHECK(near(stat.max_deviation, dev_conditional, 1e-9));
  REQUIRE(stat.witness.has_value());
  CHECK(stat.witness->str() == "a=a1 b=b0 lambda=l0 B=+1 A=-1");

  const AuditReport& func = find_report(reports, kCondFunctionalSufficiency);
  CHECK(func.verdict == Verdict::pass);
  CHECK(func.max_deviation <= 1e-12);

  CHECK(find_report(reports, kCondNoSignalling).verdict == Verdict::pass);

  const AuditReport& legacy = find_report(reports, kCondLegacyLocalCausality);
  CHECK(legacy.verdict == Verdict::fail);
  CHECK(has_caveat(legacy, "uniform"));
  CHECK(has_caveat(legacy, "agrees with the conjunction"));
}

TEST_CASE("pr box: nonlocal but no-signalling") {
  const BellModel m = build_pr_box();
  const std::vector<AuditReport> reports = audit_model(m);

  // Conditioning is decisive: P(A=0|B=0) is 1 where the marginal is
  // 1/2; cells are 1/2 or 0 where the marginal product is 1/4.
  const AuditReport& lc = find_report(reports, kCondLocalCausality);
  CHECK(lc.verdict == Verdict::fail);
  CHECK(near(lc.max_deviation, 0.5, 1e-15));
  REQUIRE(lc.witness.has_value());
  CHECK(lc.witness->str() == "a=0 b=0 lambda=l0 B=0 A=0");

  CHECK(near(find_report(reports, kCondStatisticalSufficiency).max_deviation,
             0.5, 1e-15));
  CHECK(near(find_report(reports, kCondFactorizability).max_deviation, 0.25,
             1e-15));
  CHECK(find_report(reports, kCondFunctionalSufficiency).verdict ==
        Verdict::pass);
  CHECK(find_report(reports, kCondNoSignalling).verdict == Verdict::pass);
  CHECK(find_report(reports, kCondFreeVariables).max_deviation == 0.0);
}

TEST_CASE("signalling demo: setting clause fails, outcome clause holds") {
  const BellModel m = build_signalling_demo();
  const std::vector<AuditReport> reports = audit_model(m);

  const AuditReport& func = find_report(reports, kCondFunctionalSufficiency);
  CHECK(func.verdict == Verdict::fail);
  CHECK(near(func.max_deviation, 1.0, 1e-15));

  // Deterministic kernels: conditioning on the lone supported distant
  // outcome changes nothing.
  const AuditReport& stat = find_report(reports, kCondStatisticalSufficiency);
  CHECK(stat.verdict == Verdict::pass);
  CHECK(stat.max_deviation == 0.0);
  CHECK_FALSE(stat.skipped_cells.empty());

  CHECK(find_report(reports, kCondLocalCausality).verdict == Verdict::fail);
  CHECK(near(find_report(reports, kCondLocalCausality).max_deviation, 1.0,
             1e-15));
  CHECK(find_report(reports, kCondNoSignalling).verdict == Verdict::fail);
  CHECK(near(find_report(reports, kCondNoSignalling).max_deviation, 1.0,
             1e-15));
  CHECK(find_report(reports, kCondFactorizability).verdict == Verdict::fail);
}

TEST_CASE("lhv mixtures pass every check") {
  std::mt19937_64 rng(kDefaultSeed);
  for (int trial = 0; trial < 10; ++trial) {
    const BellModel m = random_model(ModelKind::lhv_mixture, rng);
    for (const AuditReport& r : audit_model(m)) {
      CHECK(r.verdict == Verdict::pass);
      CHECK(r.max_deviation <= 1e-12);
    }
  }
}

TEST_CASE("setting-dependent prior trips only the free-variables check") {
  const BellModel m = setting_prior_model();
  const std::vector<AuditReport> reports = audit_model(m);

  const AuditReport& fv = find_report(reports, kCondFreeVariables);
  CHECK(fv.verdict == Verdict::fail);
  CHECK(fv.max_deviation == 1.0);
  REQUIRE(fv.witness.has_value());

  // The failure is prepended as a caveat to every other check, whose
  // own verdicts stay clean (uniform kernels hide nothing).
  for (const AuditReport& r : reports) {
    if (r.condition == kCondFreeVariables) continue;
    CHECK(has_caveat(r, "free-variables"));
    if (r.condition != kCondLegacyLocalCausality) {
      CHECK(r.verdict == Verdict::pass);
    }
  }
}

TEST_CASE("zero-probability conditioning cells flip the verdict to undefined") {
  const BellModel m = setting_prior_model();
  // Every conditioning event has probability 1/2 <= tau_norm = 0.6.
  const AuditReport r =
      check_statistical_sufficiency(m, Tolerance{1e-9, 0.6});
  CHECK(r.verdict == Verdict::undefined_cells);
  CHECK_FALSE(r.witness.has_value());
  CHECK_FALSE(r.skipped_cells.empty());
}

TEST_CASE("hidden states with zero prior: support deviation and legacy split") {
  const BellModel m = hidden_signalling_model();

  const AuditReport func = check_functional_sufficiency(m);
  CHECK(func.verdict == Verdict::fail);
  CHECK(near(func.max_deviation, 1.0, 1e-15));
  CHECK(func.support_deviation <= 1e-12);

  const AuditReport lc = check_local_causality(m);
  CHECK(lc.verdict == Verdict::fail);
  CHECK(near(lc.max_deviation, 1.0, 1e-15));
  CHECK(lc.support_deviation <= 1e-12);

  CHECK(check_statistical_sufficiency(m).verdict == Verdict::pass);

  // The legacy conditionals average over settings with the prior in
  // place, so the dead hidden state is invisible to them.
  const AuditReport legacy = check_legacy(m);
  CHECK(legacy.verdict == Verdict::pass);
  CHECK(has_caveat(legacy, "differs from the conjunction"));
}

TEST_CASE("deviations are invariant under renaming every symbol") {
  std::mt19937_64 rng(42);
  const BellModel m = random_model(ModelKind::generic, rng);

  auto renamed = [](const std::vector<std::string>& in) {
    std::vector<std::string> out;
    for (const std::string& s : in) out.push_back(s + "x");
    return out;
  };
  const std::vector<std::string> sa = renamed(m.settings_a());
  const std::vector<std::string> sb = renamed(m.settings_b());
  const std::vector<std::string> oa = renamed(m.outcomes_a());
  const std::vector<std::string> ob = renamed(m.outcomes_b());
  const std::vector<std::string> ls = renamed(m.lambdas());

  std::vector<ProbTable> priors, kernels;
  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      priors.emplace_back(std::vector<Axis>{{kAxisLambda, ls}},
                          m.prior(ia, ib).values());
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        kernels.emplace_back(
            std::vector<Axis>{{kAxisOutcomeA, oa}, {kAxisOutcomeB, ob}},
            m.kernel(ia, ib, il).values());
      }
    }
  }
  const BellModel m2(sa, sb, oa, ob, ls, std::move(priors),
                     std::move(kernels));

  const std::vector<AuditReport> r1 = audit_model(m);
  const std::vector<AuditReport> r2 = audit_model(m2);
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].verdict == r2[i].verdict);
    CHECK(r1[i].max_deviation == r2[i].max_deviation);
    CHECK(r1[i].support_deviation == r2[i].support_deviation);
  }
}

TEST_CASE("deviations are invariant under reordering the hidden states") {
  std::mt19937_64 rng(43);
  BellModel m = random_model(ModelKind::generic, rng);
  while (m.n_lambdas() < 2) m = random_model(ModelKind::generic, rng);

  // Reverse the hidden-state alphabet and permute all tables to match.
  std::vector<std::string> ls(m.lambdas().rbegin(), m.lambdas().rend());
  const Eigen::Index nl = m.n_lambdas();
  std::vector<ProbTable> priors, kernels;
  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      Eigen::ArrayXd w = m.prior(ia, ib).values().reverse();
      priors.emplace_back(std::vector<Axis>{{kAxisLambda, ls}}, std::move(w));
      for (Eigen::Index il = nl - 1; il >= 0; --il) {
        kernels.push_back(m.kernel(ia, ib, il));
      }
    }
  }
  const BellModel m2(m.settings_a(), m.settings_b(), m.outcomes_a(),
                     m.outcomes_b(), ls, std::move(priors),
                     std::move(kernels));

  const std::vector<AuditReport> r1 = audit_model(m);
  const std::vector<AuditReport> r2 = audit_model(m2);
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].verdict == r2[i].verdict);
    CHECK(near(r1[i].max_deviation, r2[i].max_deviation, 1e-12));
  }
}

TEST_CASE("conditional deviation never exceeds the two clause deviations") {
  std::mt19937_64 rng(kDefaultSeed);
  const std::vector<ModelKind> kinds = all_model_kinds();
  for (int trial = 0; trial < 200; ++trial) {
    const BellModel m = random_model(kinds[trial % kinds.size()], rng);
    const AuditReport lc = check_local_causality(m);
    const AuditReport stat = check_statistical_sufficiency(m);
    const AuditReport func = check_functional_sufficiency(m);
    CHECK(lc.max_deviation <=
          stat.max_deviation + func.max_deviation + 1e-12);
  }
}

TEST_CASE("check selection and unknown names") {
  const BellModel m = build_pr_box();
  const std::vector<AuditReport> one = audit_model(m, {kCondNoSignalling});
  REQUIRE(one.size() == 1);
  CHECK(one[0].condition == kCondNoSignalling);
  CHECK_THROWS_AS(audit_model(m, {"nonsense"}), Error);

  // Default order is the documented one.
  const std::vector<std::string>& ids = all_condition_ids();
  const std::vector<AuditReport> all = audit_model(m);
  REQUIRE(all.size() == ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    CHECK(all[i].condition == ids[i]);
  }
}

TEST_SUITE_END();
