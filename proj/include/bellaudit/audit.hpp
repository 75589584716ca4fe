// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellaudit/cell_ref.hpp"
#include "bellaudit/scenario.hpp"

namespace bellaudit {

/// Condition identifiers used in reports and for check selection.
inline constexpr const char* kCondFreeVariables = "free-variables";
inline constexpr const char* kCondLocalCausality = "local-causality";
inline constexpr const char* kCondFactorizability = "factorizability";
inline constexpr const char* kCondStatisticalSufficiency =
    "statistical-sufficiency";
inline constexpr const char* kCondFunctionalSufficiency =
    "functional-sufficiency";
inline constexpr const char* kCondNoSignalling = "no-signalling";
inline constexpr const char* kCondLegacyLocalCausality =
    "legacy-local-causality";

enum class Verdict { pass, fail, undefined_cells };

std::string_view to_string(Verdict v);

/// Outcome of one condition check.
///
/// Deviations are sup-norm distances between the two sides of the
/// condition.  Cells are audited for every hidden state in the
/// alphabet, whether or not the prior gives it weight;
/// support_deviation repeats the sup restricted to cells whose hidden
/// state carries prior mass above tau_eq (equal to max_deviation for
/// checks without a hidden-state coordinate).
///
/// Conditioning events with probability at or below tau_norm are never
/// counted as pass or fail; they are listed in skipped_cells.  If every
/// cell was skipped the verdict is undefined-cells and no witness is
/// present.
///
/// The witness is the cell achieving max_deviation.  Ties break to the
/// earliest cell in traversal order: the clause conditioning the A side
/// on the B outcome first, then the mirrored clause; within a clause,
/// setting-pair-major (a, then b), then hidden state, then conditioning
/// value, then compared value.  The conditioning coordinate is listed
/// before the compared coordinate.
struct AuditReport {
  std::string condition;
  Verdict verdict = Verdict::pass;
  double max_deviation = 0.0;
  double support_deviation = 0.0;
  std::optional<CellRef> witness;
  std::vector<CellRef> skipped_cells;
  std::vector<std::string> caveats;

  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

/// The hidden-state prior must not depend on the settings: every pair
/// of priors is compared entrywise; deviation is the sup over pairs of
/// setting pairs and hidden states.
AuditReport check_free_variables(const BellModel& m, const Tolerance& tol = {});

/// Given the hidden state and the local setting, the distant outcome
/// and the distant setting label are both redundant: for every
/// (a, b, lambda) and every supported distant outcome, the conditioned
/// near-side distribution must equal the reference-setting marginal
/// (the kernel's local marginal at the FIRST distant setting in the
/// declared alphabet; functional sufficiency separately certifies that
/// the choice of reference does not matter, and its failure adds a
/// caveat here naming the ambiguity).
AuditReport check_local_causality(const BellModel& m, const Tolerance& tol = {});

/// Every kernel must equal the product of its reference-setting local
/// marginals, entrywise per (a, b, lambda).
AuditReport check_factorizability(const BellModel& m, const Tolerance& tol = {});

/// Outcome clause alone: conditioning on the distant outcome changes
/// nothing at fixed (a, b, lambda) — the comparison target keeps both
/// setting labels.
AuditReport check_statistical_sufficiency(const BellModel& m,
                                          const Tolerance& tol = {});

/// Setting clause alone: the lambda-conditioned local marginal must be
/// identical across distant settings (compared against the first
/// distant setting in the declared alphabet, each side).
AuditReport check_functional_sufficiency(const BellModel& m,
                                         const Tolerance& tol = {});

/// Operational analog on hidden-state-averaged tables: the observable
/// marginal of each side must be independent of the distant setting.
AuditReport check_no_signalling(const Phenomenology& ph,
                                const Tolerance& tol = {});

/// Older formulation that conditions on settings as if they were
/// random variables: P(A | a, b, B, lambda) must equal P(A | a, lambda)
/// (and mirrored).  Settings carry no probabilities in the model, so
/// the auditor injects a uniform distribution over setting pairs solely
/// to form these conditionals and flags the injection as a caveat.  The
/// report also records whether the verdict agrees with the conjunction
/// of the outcome and setting clauses; hidden states with zero prior
/// weight are invisible to the setting-averaged conditionals, so a
/// mismatch is possible and is reported, not raised.
AuditReport check_legacy(const BellModel& m, const Tolerance& tol = {});

/// The seven condition ids in default audit order.
const std::vector<std::string>& all_condition_ids();

/// Run the named checks (empty selection = all seven, default order).
/// A free-variables failure never aborts the other checks; it is
/// prepended to their caveats.  Unknown names raise Error.
std::vector<AuditReport> audit_model(
    const BellModel& m, const std::vector<std::string>& conditions = {},
    const Tolerance& tol = {});

}  // namespace bellaudit
