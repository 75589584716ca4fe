// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <map>
#include <string>
#include <vector>

#include "bellaudit/prob_table.hpp"

namespace bellaudit {

/// Axis names used by every scenario table.
inline constexpr const char* kAxisOutcomeA = "A";
inline constexpr const char* kAxisOutcomeB = "B";
inline constexpr const char* kAxisLambda = "lambda";

/// A candidate theory of the bipartite experiment: setting labels for
/// the two sides, outcome alphabets, a hidden-state alphabet, one prior
/// over hidden states per setting pair, and one normalized outcome
/// kernel per (setting pair, hidden state).
///
/// Settings are labels, not random variables: nothing in the model
/// assigns them probabilities.  Setting-dependent priors are
/// representable on purpose, so the free-variables check has something
/// to detect.
class BellModel {
 public:
  /// `priors` holds one table over the hidden-state axis per setting
  /// pair, a-major; `kernels` holds one table over (A, B) per
  /// (setting pair, hidden state), a-major then b then lambda.
  BellModel(std::vector<std::string> settings_a,
            std::vector<std::string> settings_b,
            std::vector<std::string> outcomes_a,
            std::vector<std::string> outcomes_b,
            std::vector<std::string> lambdas,
            std::vector<ProbTable> priors,
            std::vector<ProbTable> kernels,
            const Tolerance& tol = {});

  const std::vector<std::string>& settings_a() const { return settings_a_; }
  const std::vector<std::string>& settings_b() const { return settings_b_; }
  const std::vector<std::string>& outcomes_a() const { return outcomes_a_; }
  const std::vector<std::string>& outcomes_b() const { return outcomes_b_; }
  const std::vector<std::string>& lambdas() const { return lambdas_; }

  Eigen::Index n_settings_a() const { return static_cast<Eigen::Index>(settings_a_.size()); }
  Eigen::Index n_settings_b() const { return static_cast<Eigen::Index>(settings_b_.size()); }
  Eigen::Index n_lambdas() const { return static_cast<Eigen::Index>(lambdas_.size()); }

  const ProbTable& prior(Eigen::Index ia, Eigen::Index ib) const {
    return priors_[ia * n_settings_b() + ib];
  }
  const ProbTable& kernel(Eigen::Index ia, Eigen::Index ib,
                          Eigen::Index il) const {
    return kernels_[(ia * n_settings_b() + ib) * n_lambdas() + il];
  }

  friend bool operator==(const BellModel&, const BellModel&) = default;

 private:
  std::vector<std::string> settings_a_, settings_b_;
  std::vector<std::string> outcomes_a_, outcomes_b_;
  std::vector<std::string> lambdas_;
  std::vector<ProbTable> priors_;
  std::vector<ProbTable> kernels_;
};

/// The hidden-state-averaged observable predictions: one table over
/// (A, B) per setting pair.  This is the object operational claims
/// (no-signalling, CHSH, LHV membership) are evaluated on.
class Phenomenology {
 public:
  Phenomenology(std::vector<std::string> settings_a,
                std::vector<std::string> settings_b,
                std::vector<std::string> outcomes_a,
                std::vector<std::string> outcomes_b,
                std::vector<ProbTable> tables,  // per setting pair, a-major
                const Tolerance& tol = {});

  const std::vector<std::string>& settings_a() const { return settings_a_; }
  const std::vector<std::string>& settings_b() const { return settings_b_; }
  const std::vector<std::string>& outcomes_a() const { return outcomes_a_; }
  const std::vector<std::string>& outcomes_b() const { return outcomes_b_; }

  Eigen::Index n_settings_a() const { return static_cast<Eigen::Index>(settings_a_.size()); }
  Eigen::Index n_settings_b() const { return static_cast<Eigen::Index>(settings_b_.size()); }

  const ProbTable& table(Eigen::Index ia, Eigen::Index ib) const {
    return tables_[ia * n_settings_b() + ib];
  }

  Eigen::Index setting_index_a(std::string_view label) const;
  Eigen::Index setting_index_b(std::string_view label) const;

  friend bool operator==(const Phenomenology&, const Phenomenology&) = default;

 private:
  std::vector<std::string> settings_a_, settings_b_;
  std::vector<std::string> outcomes_a_, outcomes_b_;
  std::vector<ProbTable> tables_;
};

/// P(A,B) = sum over hidden states of prior * kernel, per setting pair.
Phenomenology predict(const BellModel& m, const Tolerance& tol = {});

/// One deterministic local strategy: a total response map per side,
/// from setting label to outcome label.
struct DetStrategy {
  std::map<std::string, std::string> response_a;
  std::map<std::string, std::string> response_b;

  friend bool operator==(const DetStrategy&, const DetStrategy&) = default;
};

/// Quantum singlet model with spin measurements along the given angles
/// (radians, measurement directions in a fixed plane).  Outcomes are
/// {+1,-1}, the hidden-state alphabet is a single point.  The kernel is
/// computed from the 4-dimensional state vector with projector
/// measurements and cross-checked against the closed form
/// 1/4 * (1 - A*B*cos(angle_a - angle_b)) to 1e-12 at construction.
BellModel build_singlet(const std::vector<double>& angles_a,
                        const std::vector<double>& angles_b,
                        const Tolerance& tol = {});

/// Nonlocal no-signalling reference box: two settings and bit outcomes
/// per side, trivial hidden state, P(A,B) = 1/2 when A xor B equals
/// the product of the setting bits, else 0.
BellModel build_pr_box(const Tolerance& tol = {});

/// One deterministic strategy as a model: one-point hidden state, each
/// kernel a point mass at (response_a(a), response_b(b)).  Setting
/// alphabets default to the maps' keys in sorted order; outcome
/// alphabets default to the sorted distinct response values.
BellModel build_deterministic_local(
    const std::map<std::string, std::string>& response_a,
    const std::map<std::string, std::string>& response_b,
    std::vector<std::string> outcomes_a = {},
    std::vector<std::string> outcomes_b = {},
    const Tolerance& tol = {});

/// Mixture of deterministic strategies: the hidden-state alphabet is
/// the strategy list (labels taken from the weight table's single
/// axis), each kernel a deterministic product.  Every strategy must be
/// total on the shared setting alphabets; ModelError otherwise.
BellModel build_lhv_mixture(const std::vector<DetStrategy>& strategies,
                            const ProbTable& weights,
                            std::vector<std::string> settings_a = {},
                            std::vector<std::string> settings_b = {},
                            std::vector<std::string> outcomes_a = {},
                            std::vector<std::string> outcomes_b = {},
                            const Tolerance& tol = {});

/// Audit-failure reference: deterministic kernels with A equal to the
/// distant setting bit (and B to the near one), so the local marginal
/// over A flips with b.
BellModel build_signalling_demo(const Tolerance& tol = {});

}  // namespace bellaudit
