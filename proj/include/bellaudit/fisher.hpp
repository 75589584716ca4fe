// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellaudit/cell_ref.hpp"
#include "bellaudit/prob_table.hpp"

namespace bellaudit {

/// Axis name for parameter alphabets (priors, posteriors).
inline constexpr const char* kAxisTheta = "theta";

/// Finite parametric family: one normalized distribution over a shared
/// outcome alphabet per parameter value.
class StatFamily {
 public:
  /// `tables` is |Theta| x |X|, row per parameter; every row must be
  /// normalized within tau_norm and nonnegative.
  StatFamily(std::vector<std::string> thetas,
             std::vector<std::string> outcomes, Eigen::MatrixXd tables,
             const Tolerance& tol = {});

  const std::vector<std::string>& thetas() const { return thetas_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const Eigen::MatrixXd& tables() const { return tables_; }

  Eigen::Index n_thetas() const { return static_cast<Eigen::Index>(thetas_.size()); }
  Eigen::Index n_outcomes() const { return static_cast<Eigen::Index>(outcomes_.size()); }
  double p(Eigen::Index itheta, Eigen::Index ix) const {
    return tables_(itheta, ix);
  }

  /// Row `itheta` as a one-axis table over the outcome alphabet.
  ProbTable distribution(Eigen::Index itheta, const Tolerance& tol = {}) const;

  friend bool operator==(const StatFamily& lhs, const StatFamily& rhs) {
    return lhs.thetas_ == rhs.thetas_ && lhs.outcomes_ == rhs.outcomes_ &&
           lhs.tables_.rows() == rhs.tables_.rows() &&
           lhs.tables_.cols() == rhs.tables_.cols() &&
           (lhs.tables_.array() == rhs.tables_.array()).all();
  }

 private:
  std::vector<std::string> thetas_;
  std::vector<std::string> outcomes_;
  Eigen::MatrixXd tables_;
};

/// A total map from an outcome alphabet onto a finite codomain.  The
/// codomain is always exactly the image: it is rebuilt at construction
/// as the distinct values in first-appearance order.
class Statistic {
 public:
  /// `values[i]` is the codomain symbol of `domain[i]`.
  Statistic(std::vector<std::string> domain,
            const std::vector<std::string>& values);

  static Statistic identity(std::vector<std::string> domain);
  static Statistic constant(std::vector<std::string> domain,
                            std::string label = "t0");
  static Statistic from_function(
      std::vector<std::string> domain,
      const std::function<std::string(const std::string&)>& f);

  const std::vector<std::string>& domain() const { return domain_; }
  const std::vector<std::string>& codomain() const { return codomain_; }
  /// Codomain index of domain element `ix`.
  Eigen::Index value_index(Eigen::Index ix) const { return map_[ix]; }
  const std::string& value_label(Eigen::Index ix) const {
    return codomain_[map_[ix]];
  }
  const std::vector<Eigen::Index>& map() const { return map_; }

  /// Domain indices grouped by codomain value, in codomain order.
  std::vector<std::vector<Eigen::Index>> fibers() const;

  friend bool operator==(const Statistic&, const Statistic&) = default;

 private:
  std::vector<std::string> domain_;
  std::vector<std::string> codomain_;
  std::vector<Eigen::Index> map_;
};

/// Verdict of one sufficiency criterion.  max_deviation is the sup of
/// the criterion's defining comparison over every cell it evaluated;
/// sufficient ⇔ max_deviation ≤ tau_eq.  A run that never compared
/// anything (no fiber shared by two live parameters) is a vacuous pass
/// and says so in caveats.
struct SufficiencyResult {
  bool sufficient = false;
  double max_deviation = 0.0;
  std::optional<CellRef> witness;
  std::vector<std::string> caveats;

  friend bool operator==(const SufficiencyResult&,
                         const SufficiencyResult&) = default;
};

/// n-fold i.i.d. product family over outcome tuples; tuple labels join
/// the component labels with ','.  Throws CapacityError when the joint
/// outcome count |X|^n would exceed `cap`.
StatFamily iid_product(const StatFamily& f, int n, Eigen::Index cap = 1000000,
                       const Tolerance& tol = {});

/// Conditional criterion: within each fiber of T, the conditional
/// distribution must be identical across every pair of parameters that
/// give the fiber positive mass.
SufficiencyResult is_sufficient_conditional(const StatFamily& f,
                                            const Statistic& T,
                                            const Tolerance& tol = {});

/// Factorization criterion: within each fiber, the normalized
/// parameter profile (p_theta(x))_theta must be the same vector for
/// every supported outcome — i.e. the weights split into a
/// parameter-dependent factor through T and a parameter-free factor.
SufficiencyResult is_sufficient_factorization(const StatFamily& f,
                                              const Statistic& T,
                                              const Tolerance& tol = {});

/// Bayes update of `prior` (a table over the family's parameter axis)
/// on a single observed outcome.  ZeroConditionError when the evidence
/// is at or below tau_norm.
ProbTable posterior(const StatFamily& f, const ProbTable& prior,
                    std::string_view x, const Tolerance& tol = {});

/// Posterior criterion: for every outcome with positive evidence, the
/// posterior given x must equal the posterior given only T(x).
/// Parameters with prior weight at or below tau_eq are excluded from
/// the comparison, with a caveat.
SufficiencyResult is_sufficient_bayes(const StatFamily& f, const Statistic& T,
                                      const ProbTable& prior,
                                      const Tolerance& tol = {});

/// Coarsest sufficient statistic: fibers are the classes of outcomes
/// with proportional parameter profiles (zero-profile outcomes form one
/// class).  Codomain labels are "t0", "t1", ... in first-appearance
/// order.  The result is re-verified with the conditional criterion
/// before being returned.
Statistic minimal_sufficient_partition(const StatFamily& f,
                                       const Tolerance& tol = {});

}  // namespace bellaudit
