// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/scenario.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <set>
#include <unordered_set>

namespace bellaudit {

namespace {

void require_alphabet(const std::vector<std::string>& labels,
                      const std::string& what) {
  if (labels.empty()) {
    throw ModelError(what + " alphabet is empty");
  }
  std::unordered_set<std::string_view> seen;
  for (const std::string& label : labels) {
    if (!seen.insert(label).second) {
      throw ModelError(what + " alphabet repeats label '" + label + "'");
    }
  }
}

void require_axes(const ProbTable& t, const std::vector<Axis>& axes,
                  const std::string& what) {
  if (t.axes() != axes) {
    throw ModelError(what + " has unexpected axes");
  }
  if (!t.normalized()) {
    throw ModelError(what + " is not flagged normalized");
  }
}

}  // namespace

BellModel::BellModel(std::vector<std::string> settings_a,
                     std::vector<std::string> settings_b,
                     std::vector<std::string> outcomes_a,
                     std::vector<std::string> outcomes_b,
                     std::vector<std::string> lambdas,
                     std::vector<ProbTable> priors,
                     std::vector<ProbTable> kernels, const Tolerance& tol)
    : settings_a_(std::move(settings_a)), settings_b_(std::move(settings_b)),
      outcomes_a_(std::move(outcomes_a)), outcomes_b_(std::move(outcomes_b)),
      lambdas_(std::move(lambdas)), priors_(std::move(priors)),
      kernels_(std::move(kernels)) {
  require_alphabet(settings_a_, "Alice setting");
  require_alphabet(settings_b_, "Bob setting");
  require_alphabet(outcomes_a_, "Alice outcome");
  require_alphabet(outcomes_b_, "Bob outcome");
  require_alphabet(lambdas_, "hidden-state");

  const std::size_t pairs = settings_a_.size() * settings_b_.size();
  if (priors_.size() != pairs) {
    throw ModelError("expected one prior per setting pair");
  }
  if (kernels_.size() != pairs * lambdas_.size()) {
    throw ModelError("expected one kernel per setting pair and hidden state");
  }
  const std::vector<Axis> prior_axes = {{kAxisLambda, lambdas_}};
  const std::vector<Axis> kernel_axes = {{kAxisOutcomeA, outcomes_a_},
                                         {kAxisOutcomeB, outcomes_b_}};
  for (const ProbTable& p : priors_) require_axes(p, prior_axes, "prior");
  for (const ProbTable& k : kernels_) require_axes(k, kernel_axes, "kernel");
  (void)tol;
}

Phenomenology::Phenomenology(std::vector<std::string> settings_a,
                             std::vector<std::string> settings_b,
                             std::vector<std::string> outcomes_a,
                             std::vector<std::string> outcomes_b,
                             std::vector<ProbTable> tables,
                             const Tolerance& tol)
    : settings_a_(std::move(settings_a)), settings_b_(std::move(settings_b)),
      outcomes_a_(std::move(outcomes_a)), outcomes_b_(std::move(outcomes_b)),
      tables_(std::move(tables)) {
  require_alphabet(settings_a_, "Alice setting");
  require_alphabet(settings_b_, "Bob setting");
  require_alphabet(outcomes_a_, "Alice outcome");
  require_alphabet(outcomes_b_, "Bob outcome");
  if (tables_.size() != settings_a_.size() * settings_b_.size()) {
    throw ModelError("expected one table per setting pair");
  }
  const std::vector<Axis> axes = {{kAxisOutcomeA, outcomes_a_},
                                  {kAxisOutcomeB, outcomes_b_}};
  for (const ProbTable& t : tables_) require_axes(t, axes, "table");
  (void)tol;
}

Eigen::Index Phenomenology::setting_index_a(std::string_view label) const {
  for (std::size_t i = 0; i < settings_a_.size(); ++i) {
    if (settings_a_[i] == label) return static_cast<Eigen::Index>(i);
  }
  throw ScenarioError("unknown Alice setting '" + std::string(label) + "'");
}

Eigen::Index Phenomenology::setting_index_b(std::string_view label) const {
  for (std::size_t i = 0; i < settings_b_.size(); ++i) {
    if (settings_b_[i] == label) return static_cast<Eigen::Index>(i);
  }
  throw ScenarioError("unknown Bob setting '" + std::string(label) + "'");
}

Phenomenology predict(const BellModel& m, const Tolerance& tol) {
  std::vector<ProbTable> tables;
  tables.reserve(m.n_settings_a() * m.n_settings_b());
  const std::vector<Axis> axes = {{kAxisOutcomeA, m.outcomes_a()},
                                  {kAxisOutcomeB, m.outcomes_b()}};
  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      const ProbTable& prior = m.prior(ia, ib);
      Eigen::ArrayXd values =
          Eigen::ArrayXd::Zero(m.kernel(ia, ib, 0).size());
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        values += prior[il] * m.kernel(ia, ib, il).values();
      }
      tables.emplace_back(axes, std::move(values), true, tol);
    }
  }
  return Phenomenology(m.settings_a(), m.settings_b(), m.outcomes_a(),
                       m.outcomes_b(), std::move(tables), tol);
}

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Vector2cd;
using Eigen::Vector4cd;

// Projector onto the spin eigenstate along direction
// (sin theta, 0, cos theta) with eigenvalue `sign`.
Matrix2cd spin_projector(double theta, int sign) {
  Vector2cd v;
  if (sign > 0) {
    v << std::cos(theta / 2.0), std::sin(theta / 2.0);
  } else {
    v << -std::sin(theta / 2.0), std::cos(theta / 2.0);
  }
  return v * v.adjoint();
}

Matrix4cd kron2(const Matrix2cd& x, const Matrix2cd& y) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
    }
  }
  return out;
}

std::vector<std::string> indexed_labels(const char* prefix, std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = prefix + std::to_string(i);
  }
  return labels;
}

}  // namespace

BellModel build_singlet(const std::vector<double>& angles_a,
                        const std::vector<double>& angles_b,
                        const Tolerance& tol) {
  if (angles_a.empty() || angles_b.empty()) {
    throw ModelError("singlet model needs at least one angle per side");
  }
  // (|01> - |10>) / sqrt(2) in the basis |00>,|01>,|10>,|11>.
  Vector4cd psi;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  psi << 0.0, inv_sqrt2, -inv_sqrt2, 0.0;

  const std::vector<std::string> outcomes = {"+1", "-1"};
  const int outcome_sign[2] = {+1, -1};
  const std::vector<Axis> kernel_axes = {{kAxisOutcomeA, outcomes},
                                         {kAxisOutcomeB, outcomes}};

  std::vector<ProbTable> kernels;
  kernels.reserve(angles_a.size() * angles_b.size());
  for (double ta : angles_a) {
    for (double tb : angles_b) {
      Eigen::ArrayXd values(4);
      for (int ka = 0; ka < 2; ++ka) {
        for (int kb = 0; kb < 2; ++kb) {
          const Matrix4cd proj =
              kron2(spin_projector(ta, outcome_sign[ka]),
                    spin_projector(tb, outcome_sign[kb]));
          const double p = std::real((psi.adjoint() * proj * psi)(0, 0));
          const double closed_form =
              0.25 * (1.0 - outcome_sign[ka] * outcome_sign[kb] *
                                std::cos(ta - tb));
          if (std::abs(p - closed_form) > 1e-12) {
            throw Error("singlet self-check failed: state-vector value " +
                        std::to_string(p) + " vs closed form " +
                        std::to_string(closed_form));
          }
          values[2 * ka + kb] = p;
        }
      }
      kernels.emplace_back(kernel_axes, std::move(values), true, tol);
    }
  }

  const std::vector<std::string> lambdas = {"l0"};
  std::vector<ProbTable> priors(
      angles_a.size() * angles_b.size(),
      ProbTable({{kAxisLambda, lambdas}}, Eigen::ArrayXd::Ones(1)));
  return BellModel(indexed_labels("a", angles_a.size()),
                   indexed_labels("b", angles_b.size()), outcomes, outcomes,
                   lambdas, std::move(priors), std::move(kernels), tol);
}

BellModel build_pr_box(const Tolerance& tol) {
  const std::vector<std::string> bits = {"0", "1"};
  const std::vector<Axis> kernel_axes = {{kAxisOutcomeA, bits},
                                         {kAxisOutcomeB, bits}};
  std::vector<ProbTable> kernels;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Eigen::ArrayXd values(4);
      for (int A = 0; A < 2; ++A) {
        for (int B = 0; B < 2; ++B) {
          values[2 * A + B] = ((A ^ B) == (a & b)) ? 0.5 : 0.0;
        }
      }
      kernels.emplace_back(kernel_axes, std::move(values), true, tol);
    }
  }
  const std::vector<std::string> lambdas = {"l0"};
  std::vector<ProbTable> priors(
      4, ProbTable({{kAxisLambda, lambdas}}, Eigen::ArrayXd::Ones(1)));
  return BellModel(bits, bits, bits, bits, lambdas, std::move(priors),
                   std::move(kernels), tol);
}

namespace {

std::vector<std::string> sorted_keys(
    const std::map<std::string, std::string>& m) {
  std::vector<std::string> keys;
  keys.reserve(m.size());
  for (const auto& [k, v] : m) keys.push_back(k);
  return keys;
}

std::vector<std::string> sorted_values(
    const std::map<std::string, std::string>& m) {
  std::set<std::string> values;
  for (const auto& [k, v] : m) values.insert(v);
  return {values.begin(), values.end()};
}

const std::string& response_at(const std::map<std::string, std::string>& m,
                               const std::string& setting) {
  auto it = m.find(setting);
  if (it == m.end()) {
    throw ModelError("response map has no entry for setting '" + setting +
                     "'");
  }
  return it->second;
}

}  // namespace

BellModel build_deterministic_local(
    const std::map<std::string, std::string>& response_a,
    const std::map<std::string, std::string>& response_b,
    std::vector<std::string> outcomes_a, std::vector<std::string> outcomes_b,
    const Tolerance& tol) {
  return build_lhv_mixture(
      {DetStrategy{response_a, response_b}},
      ProbTable({{kAxisLambda, {"l0"}}}, Eigen::ArrayXd::Ones(1)), {}, {},
      std::move(outcomes_a), std::move(outcomes_b), tol);
}

BellModel build_lhv_mixture(const std::vector<DetStrategy>& strategies,
                            const ProbTable& weights,
                            std::vector<std::string> settings_a,
                            std::vector<std::string> settings_b,
                            std::vector<std::string> outcomes_a,
                            std::vector<std::string> outcomes_b,
                            const Tolerance& tol) {
  if (strategies.empty()) {
    throw ModelError("mixture needs at least one strategy");
  }
  if (weights.rank() != 1 ||
      weights.size() != static_cast<Eigen::Index>(strategies.size())) {
    throw ModelError("weights must be a one-axis table, one per strategy");
  }
  if (!weights.normalized()) {
    throw ModelError("weights must be normalized");
  }
  if (settings_a.empty()) settings_a = sorted_keys(strategies[0].response_a);
  if (settings_b.empty()) settings_b = sorted_keys(strategies[0].response_b);
  if (outcomes_a.empty()) {
    std::set<std::string> all;
    for (const DetStrategy& s : strategies) {
      for (const std::string& v : sorted_values(s.response_a)) all.insert(v);
    }
    outcomes_a.assign(all.begin(), all.end());
  }
  if (outcomes_b.empty()) {
    std::set<std::string> all;
    for (const DetStrategy& s : strategies) {
      for (const std::string& v : sorted_values(s.response_b)) all.insert(v);
    }
    outcomes_b.assign(all.begin(), all.end());
  }

  const std::vector<std::string> lambdas = weights.axes()[0].labels;
  const std::vector<Axis> kernel_axes = {{kAxisOutcomeA, outcomes_a},
                                         {kAxisOutcomeB, outcomes_b}};
  std::vector<ProbTable> kernels;
  kernels.reserve(settings_a.size() * settings_b.size() * strategies.size());
  for (const std::string& a : settings_a) {
    for (const std::string& b : settings_b) {
      for (const DetStrategy& s : strategies) {
        kernels.push_back(ProbTable::point_mass(
            kernel_axes,
            {response_at(s.response_a, a), response_at(s.response_b, b)}));
      }
    }
  }
  std::vector<ProbTable> priors(settings_a.size() * settings_b.size(),
                                ProbTable({{kAxisLambda, lambdas}},
                                          weights.values(), true, tol));
  return BellModel(std::move(settings_a), std::move(settings_b),
                   std::move(outcomes_a), std::move(outcomes_b), lambdas,
                   std::move(priors), std::move(kernels), tol);
}

BellModel build_signalling_demo(const Tolerance& tol) {
  const std::vector<std::string> bits = {"0", "1"};
  const std::vector<Axis> kernel_axes = {{kAxisOutcomeA, bits},
                                         {kAxisOutcomeB, bits}};
  std::vector<ProbTable> kernels;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      // A copies the distant setting, B the distant setting on its side.
      kernels.push_back(ProbTable::point_mass(kernel_axes,
                                              {bits[b], bits[a]}));
    }
  }
  const std::vector<std::string> lambdas = {"l0"};
  std::vector<ProbTable> priors(
      4, ProbTable({{kAxisLambda, lambdas}}, Eigen::ArrayXd::Ones(1)));
  return BellModel(bits, bits, bits, bits, lambdas, std::move(priors),
                   std::move(kernels), tol);
}

}  // namespace bellaudit
