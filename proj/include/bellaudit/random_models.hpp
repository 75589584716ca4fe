// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "bellaudit/fisher.hpp"
#include "bellaudit/scenario.hpp"

namespace bellaudit {

/// Default seed for every randomized demo and property suite; echoed in
/// reports so runs are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 1234567;

/// Regimes for randomized candidate models. Every generator keeps its
/// deviations far from the verdict tolerance — either at floating-point
/// noise (~1e-16) or macroscopic (>= ~0.01) — so verdicts are stable.
enum class ModelKind {
  /// Shared hidden-state prior, unconstrained response kernels.
  generic,
  /// Kernels are exact products f(A|a,lambda) * g(B|b,lambda).
  product,
  /// Product kernels whose A-factor genuinely depends on the distant
  /// setting: outcome conditioning passes, setting redundancy fails.
  product_signalling,
  /// Binary outcomes with uniform marginals and correlation in
  /// [0.05, 0.95]: outcome conditioning fails, setting redundancy passes.
  correlated,
  /// Mixture of up to six deterministic strategies.
  lhv_mixture,
  /// Shared prior with some hidden states at exactly zero mass.
  degenerate_prior,
  /// Per-setting-pair priors that measurably differ.
  setting_prior,
  /// A single deterministic strategy.
  deterministic,
};

std::vector<ModelKind> all_model_kinds();

/// Uniform double in [0, 1) from the top 53 bits of the engine; avoids
/// std::uniform_real_distribution, whose output is implementation-defined.
double u01(std::mt19937_64& rng);

/// Uniform-Dirichlet weight vector of length n (normalized exponentials).
Eigen::ArrayXd dirichlet(Eigen::Index n, std::mt19937_64& rng);

BellModel random_model(ModelKind kind, std::mt19937_64& rng);

/// A model of a kind chosen uniformly at random.
BellModel random_model_any(std::mt19937_64& rng);

/// Random parametric family: 2-5 parameters over 2-8 outcomes.
StatFamily random_family(std::mt19937_64& rng);

/// Random statistic over the family's outcome alphabet.
Statistic random_statistic(const StatFamily& f, std::mt19937_64& rng);

/// Family and statistic built so the statistic is sufficient by
/// construction: p_theta(x) = h_theta(T(x)) * g(x).
std::pair<StatFamily, Statistic> random_sufficient_pair(std::mt19937_64& rng);

/// Strictly positive prior over the given parameters (every component
/// >= 0.2/n), suitable for the Bayes-criterion equivalence.
ProbTable random_positive_prior(const std::vector<std::string>& thetas,
                                std::mt19937_64& rng);

}  // namespace bellaudit
