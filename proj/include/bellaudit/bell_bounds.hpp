// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "bellaudit/scenario.hpp"

namespace bellaudit {

/// Axis name for mixture weights over deterministic strategies.
inline constexpr const char* kAxisStrategy = "strategy";

/// Correlator E = sum over outcomes of sign(A)*sign(B)*P(A,B) at one
/// setting pair.  Outcomes are ±1-mapped positionally: the first label
/// of each outcome alphabet counts as +1, the second as -1.
/// ScenarioError unless both outcome alphabets are binary.
double correlator(const Phenomenology& ph, Eigen::Index ia, Eigen::Index ib);

/// E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2).  ScenarioError on
/// non-binary outcomes or unknown setting labels.
double chsh(const Phenomenology& ph, std::string_view a1, std::string_view a2,
            std::string_view b1, std::string_view b2);

/// Every deterministic product strategy over the given alphabets, in a
/// fixed order: response patterns for the A side are enumerated
/// odometer-style (the first setting's outcome varies fastest), the
/// A-side pattern is the major index.  CapacityError when the strategy
/// count would exceed `cap`.
std::vector<DetStrategy> enumerate_product_strategies(
    const std::vector<std::string>& settings_a,
    const std::vector<std::string>& settings_b,
    const std::vector<std::string>& outcomes_a,
    const std::vector<std::string>& outcomes_b, Eigen::Index cap = 65536);

/// Max of |E(a1,b1)+E(a1,b2)+E(a2,b1)-E(a2,b2)| over all deterministic
/// product strategies of the two-setting binary scenario, computed by
/// exhaustive enumeration (expected value: 2).
double lhv_bound_chsh();

/// Constructive membership certificate for the convex hull of
/// deterministic product strategies.
struct LhvCertificate {
  bool feasible = false;
  /// Mixture weights over `strategies` (labels "s0", "s1", ...), when
  /// feasible.
  std::optional<ProbTable> weights;
  /// Minimal sup-norm distance achieved between the target cells and
  /// the mixture; feasible means it is at or below tau_eq.
  double infeasibility_gap = 0.0;
  /// The input failed the no-signalling check; the solve still ran on
  /// the raw cells, and the gap is still meaningful.
  bool signalling_input = false;
  std::vector<DetStrategy> strategies;
};

/// Decides whether any mixture of deterministic product strategies
/// reproduces `ph`, by minimizing the sup-norm cell distance with a
/// deterministically-pivoted linear program over the raw cells.
LhvCertificate lhv_membership(const Phenomenology& ph,
                              Eigen::Index cap = 65536,
                              const Tolerance& tol = {});

/// The mixture model realizing a feasible certificate, carrying the
/// phenomenology's alphabets.  Error when the certificate is not
/// feasible.
BellModel certificate_model(const LhvCertificate& cert,
                            const Phenomenology& ph,
                            const Tolerance& tol = {});

}  // namespace bellaudit
