// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace bellaudit {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::undefined_cells:
      return "undefined-cells";
  }
  return "?";
}

namespace {

constexpr const char* kCoordA = "a";
constexpr const char* kCoordB = "b";

/// Running sup with earliest-cell tie-breaking: cells are offered in a
/// fixed traversal order and the witness is replaced only on a strictly
/// greater deviation.  The initial max of -1 guarantees the first
/// evaluated cell installs a witness even at deviation 0.
class SupTracker {
 public:
  void offer(double dev, bool supported, CellRef cell) {
    evaluated_ = true;
    if (dev > max_) {
      max_ = dev;
      witness_ = std::move(cell);
    }
    if (supported) support_ = std::max(support_, dev);
  }

  AuditReport finish(std::string condition_id, std::vector<CellRef> skipped,
                     const Tolerance& tol) && {
    AuditReport r;
    r.condition = std::move(condition_id);
    r.skipped_cells = std::move(skipped);
    if (!evaluated_) {
      r.verdict = Verdict::undefined_cells;
      return r;
    }
    r.max_deviation = std::max(max_, 0.0);
    r.support_deviation = support_;
    r.witness = std::move(witness_);
    r.verdict = r.max_deviation <= tol.tau_eq ? Verdict::pass : Verdict::fail;
    return r;
  }

 private:
  double max_ = -1.0;
  double support_ = 0.0;
  CellRef witness_;
  bool evaluated_ = false;
};

CellRef setting_cell(const BellModel& m, Eigen::Index ia, Eigen::Index ib,
                     Eigen::Index il) {
  CellRef c;
  c.add(kCoordA, m.settings_a()[ia]);
  c.add(kCoordB, m.settings_b()[ib]);
  c.add(kAxisLambda, m.lambdas()[il]);
  return c;
}

ProbTable marginal_a(const BellModel& m, Eigen::Index ia, Eigen::Index ib,
                     Eigen::Index il, const Tolerance& tol) {
  return marginalize(m.kernel(ia, ib, il), {kAxisOutcomeA}, tol);
}

ProbTable marginal_b(const BellModel& m, Eigen::Index ia, Eigen::Index ib,
                     Eigen::Index il, const Tolerance& tol) {
  return marginalize(m.kernel(ia, ib, il), {kAxisOutcomeB}, tol);
}

bool in_support(const BellModel& m, Eigen::Index ia, Eigen::Index ib,
                Eigen::Index il, const Tolerance& tol) {
  return m.prior(ia, ib)[il] > tol.tau_eq;
}

/// Shared traversal for the two outcome-conditioning checks: condition
/// each side on every supported value of the distant outcome and
/// compare against the near-side marginal.  The target keeps both
/// setting labels for the outcome clause; the sharpened condition
/// instead takes it at the first distant setting.
AuditReport outcome_conditioning_check(const BellModel& m,
                                       const char* condition_id,
                                       bool reference_first_setting,
                                       const Tolerance& tol) {
  SupTracker sup;
  std::vector<CellRef> skipped;

  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        const ProbTable& k = m.kernel(ia, ib, il);
        const ProbTable mass_b = marginal_b(m, ia, ib, il, tol);
        const ProbTable target =
            marginal_a(m, ia, reference_first_setting ? 0 : ib, il, tol);
        const bool supported = in_support(m, ia, ib, il, tol);
        for (Eigen::Index iB = 0; iB < mass_b.size(); ++iB) {
          CellRef base = setting_cell(m, ia, ib, il);
          base.add(kAxisOutcomeB, m.outcomes_b()[iB]);
          if (mass_b[iB] <= tol.tau_norm) {
            skipped.push_back(std::move(base));
            continue;
          }
          const ProbTable conditioned =
              condition(k, kAxisOutcomeB, m.outcomes_b()[iB], tol);
          for (Eigen::Index iA = 0; iA < conditioned.size(); ++iA) {
            CellRef cell = base;
            cell.add(kAxisOutcomeA, m.outcomes_a()[iA]);
            sup.offer(std::abs(conditioned[iA] - target[iA]), supported,
                      std::move(cell));
          }
        }
      }
    }
  }

  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        const ProbTable& k = m.kernel(ia, ib, il);
        const ProbTable mass_a = marginal_a(m, ia, ib, il, tol);
        const ProbTable target =
            marginal_b(m, reference_first_setting ? 0 : ia, ib, il, tol);
        const bool supported = in_support(m, ia, ib, il, tol);
        for (Eigen::Index iA = 0; iA < mass_a.size(); ++iA) {
          CellRef base = setting_cell(m, ia, ib, il);
          base.add(kAxisOutcomeA, m.outcomes_a()[iA]);
          if (mass_a[iA] <= tol.tau_norm) {
            skipped.push_back(std::move(base));
            continue;
          }
          const ProbTable conditioned =
              condition(k, kAxisOutcomeA, m.outcomes_a()[iA], tol);
          for (Eigen::Index iB = 0; iB < conditioned.size(); ++iB) {
            CellRef cell = base;
            cell.add(kAxisOutcomeB, m.outcomes_b()[iB]);
            sup.offer(std::abs(conditioned[iB] - target[iB]), supported,
                      std::move(cell));
          }
        }
      }
    }
  }

  return std::move(sup).finish(condition_id, std::move(skipped), tol);
}

}  // namespace

AuditReport check_free_variables(const BellModel& m, const Tolerance& tol) {
  SupTracker sup;
  const Eigen::Index nb = m.n_settings_b();
  const Eigen::Index pairs = m.n_settings_a() * nb;
  auto pair_cell = [&](Eigen::Index p, Eigen::Index q, Eigen::Index il) {
    CellRef c;
    c.add(kCoordA, m.settings_a()[p / nb]);
    c.add(kCoordB, m.settings_b()[p % nb]);
    c.add("a'", m.settings_a()[q / nb]);
    c.add("b'", m.settings_b()[q % nb]);
    c.add(kAxisLambda, m.lambdas()[il]);
    return c;
  };
  if (pairs == 1) {
    // A single setting pair is vacuously setting-independent; compare
    // the prior with itself so the report still carries a witness.
    for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
      sup.offer(0.0, m.prior(0, 0)[il] > tol.tau_eq, pair_cell(0, 0, il));
    }
  }
  for (Eigen::Index p = 0; p < pairs; ++p) {
    for (Eigen::Index q = p + 1; q < pairs; ++q) {
      const ProbTable& rp = m.prior(p / nb, p % nb);
      const ProbTable& rq = m.prior(q / nb, q % nb);
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        const bool supported =
            rp[il] > tol.tau_eq || rq[il] > tol.tau_eq;
        sup.offer(std::abs(rp[il] - rq[il]), supported, pair_cell(p, q, il));
      }
    }
  }
  return std::move(sup).finish(kCondFreeVariables, {}, tol);
}

AuditReport check_statistical_sufficiency(const BellModel& m,
                                          const Tolerance& tol) {
  return outcome_conditioning_check(m, kCondStatisticalSufficiency, false,
                                    tol);
}

AuditReport check_local_causality(const BellModel& m, const Tolerance& tol) {
  AuditReport r =
      outcome_conditioning_check(m, kCondLocalCausality, true, tol);
  if (check_functional_sufficiency(m, tol).verdict == Verdict::fail) {
    r.caveats.insert(
        r.caveats.begin(),
        "local marginals depend on the distant setting (functional "
        "sufficiency fails), so the reference marginal P_a(A|lambda) is "
        "ambiguous; it was taken at the first distant setting in the "
        "declared alphabet");
  }
  return r;
}

AuditReport check_factorizability(const BellModel& m, const Tolerance& tol) {
  SupTracker sup;
  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        const ProbTable& k = m.kernel(ia, ib, il);
        const ProbTable ref_a = marginal_a(m, ia, 0, il, tol);
        const ProbTable ref_b = marginal_b(m, 0, ib, il, tol);
        const bool supported = in_support(m, ia, ib, il, tol);
        for (Eigen::Index iA = 0; iA < ref_a.size(); ++iA) {
          for (Eigen::Index iB = 0; iB < ref_b.size(); ++iB) {
            CellRef cell = setting_cell(m, ia, ib, il);
            cell.add(kAxisOutcomeA, m.outcomes_a()[iA]);
            cell.add(kAxisOutcomeB, m.outcomes_b()[iB]);
            sup.offer(std::abs(k.at({iA, iB}) - ref_a[iA] * ref_b[iB]),
                      supported, std::move(cell));
          }
        }
      }
    }
  }
  return std::move(sup).finish(kCondFactorizability, {}, tol);
}

AuditReport check_functional_sufficiency(const BellModel& m,
                                         const Tolerance& tol) {
  SupTracker sup;
  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        const ProbTable cur = marginal_a(m, ia, ib, il, tol);
        const ProbTable ref = marginal_a(m, ia, 0, il, tol);
        const bool supported = in_support(m, ia, ib, il, tol);
        for (Eigen::Index iA = 0; iA < cur.size(); ++iA) {
          CellRef cell = setting_cell(m, ia, ib, il);
          cell.add(kAxisOutcomeA, m.outcomes_a()[iA]);
          sup.offer(std::abs(cur[iA] - ref[iA]), supported, std::move(cell));
        }
      }
    }
  }
  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        const ProbTable cur = marginal_b(m, ia, ib, il, tol);
        const ProbTable ref = marginal_b(m, 0, ib, il, tol);
        const bool supported = in_support(m, ia, ib, il, tol);
        for (Eigen::Index iB = 0; iB < cur.size(); ++iB) {
          CellRef cell = setting_cell(m, ia, ib, il);
          cell.add(kAxisOutcomeB, m.outcomes_b()[iB]);
          sup.offer(std::abs(cur[iB] - ref[iB]), supported, std::move(cell));
        }
      }
    }
  }
  return std::move(sup).finish(kCondFunctionalSufficiency, {}, tol);
}

AuditReport check_no_signalling(const Phenomenology& ph, const Tolerance& tol) {
  SupTracker sup;
  for (Eigen::Index ia = 0; ia < ph.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < ph.n_settings_b(); ++ib) {
      const ProbTable cur =
          marginalize(ph.table(ia, ib), {kAxisOutcomeA}, tol);
      const ProbTable ref = marginalize(ph.table(ia, 0), {kAxisOutcomeA}, tol);
      for (Eigen::Index iA = 0; iA < cur.size(); ++iA) {
        CellRef cell;
        cell.add(kCoordA, ph.settings_a()[ia]);
        cell.add(kCoordB, ph.settings_b()[ib]);
        cell.add(kAxisOutcomeA, ph.outcomes_a()[iA]);
        sup.offer(std::abs(cur[iA] - ref[iA]), true, std::move(cell));
      }
    }
  }
  for (Eigen::Index ia = 0; ia < ph.n_settings_a(); ++ia) {
    for (Eigen::Index ib = 0; ib < ph.n_settings_b(); ++ib) {
      const ProbTable cur =
          marginalize(ph.table(ia, ib), {kAxisOutcomeB}, tol);
      const ProbTable ref = marginalize(ph.table(0, ib), {kAxisOutcomeB}, tol);
      for (Eigen::Index iB = 0; iB < cur.size(); ++iB) {
        CellRef cell;
        cell.add(kCoordA, ph.settings_a()[ia]);
        cell.add(kCoordB, ph.settings_b()[ib]);
        cell.add(kAxisOutcomeB, ph.outcomes_b()[iB]);
        sup.offer(std::abs(cur[iB] - ref[iB]), true, std::move(cell));
      }
    }
  }
  return std::move(sup).finish(kCondNoSignalling, {}, tol);
}

AuditReport check_legacy(const BellModel& m, const Tolerance& tol) {
  SupTracker sup;
  std::vector<CellRef> skipped;
  const Eigen::Index na = m.n_settings_a();
  const Eigen::Index nb = m.n_settings_b();
  const Eigen::Index nl = m.n_lambdas();

  // Targets P(A | a, lambda) and P(B | b, lambda), formed from the
  // joint over (a, b, lambda, A, B) with a uniform weight injected over
  // setting pairs.  The uniform weight cancels, leaving a prior-weighted
  // mean over the distant setting; it is undefined where the summed
  // prior mass vanishes.
  std::vector<Eigen::ArrayXd> target_a(na * nl);
  std::vector<char> target_a_ok(na * nl, 0);
  for (Eigen::Index ia = 0; ia < na; ++ia) {
    for (Eigen::Index il = 0; il < nl; ++il) {
      Eigen::ArrayXd num =
          Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(m.outcomes_a().size()));
      double den = 0.0;
      for (Eigen::Index ib = 0; ib < nb; ++ib) {
        const double w = m.prior(ia, ib)[il];
        den += w;
        num += w * marginal_a(m, ia, ib, il, tol).values();
      }
      if (den > tol.tau_norm) {
        target_a[ia * nl + il] = num / den;
        target_a_ok[ia * nl + il] = 1;
      }
    }
  }
  std::vector<Eigen::ArrayXd> target_b(nb * nl);
  std::vector<char> target_b_ok(nb * nl, 0);
  for (Eigen::Index ib = 0; ib < nb; ++ib) {
    for (Eigen::Index il = 0; il < nl; ++il) {
      Eigen::ArrayXd num =
          Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(m.outcomes_b().size()));
      double den = 0.0;
      for (Eigen::Index ia = 0; ia < na; ++ia) {
        const double w = m.prior(ia, ib)[il];
        den += w;
        num += w * marginal_b(m, ia, ib, il, tol).values();
      }
      if (den > tol.tau_norm) {
        target_b[ib * nl + il] = num / den;
        target_b_ok[ib * nl + il] = 1;
      }
    }
  }

  for (Eigen::Index ia = 0; ia < na; ++ia) {
    for (Eigen::Index ib = 0; ib < nb; ++ib) {
      for (Eigen::Index il = 0; il < nl; ++il) {
        const double rho = m.prior(ia, ib)[il];
        const ProbTable& k = m.kernel(ia, ib, il);
        const ProbTable mass_b = marginal_b(m, ia, ib, il, tol);
        const bool supported = rho > tol.tau_eq;
        for (Eigen::Index iB = 0; iB < mass_b.size(); ++iB) {
          CellRef base = setting_cell(m, ia, ib, il);
          base.add(kAxisOutcomeB, m.outcomes_b()[iB]);
          if (rho <= tol.tau_norm || mass_b[iB] <= tol.tau_norm ||
              !target_a_ok[ia * nl + il]) {
            skipped.push_back(std::move(base));
            continue;
          }
          const ProbTable conditioned =
              condition(k, kAxisOutcomeB, m.outcomes_b()[iB], tol);
          const Eigen::ArrayXd& target = target_a[ia * nl + il];
          for (Eigen::Index iA = 0; iA < conditioned.size(); ++iA) {
            CellRef cell = base;
            cell.add(kAxisOutcomeA, m.outcomes_a()[iA]);
            sup.offer(std::abs(conditioned[iA] - target[iA]), supported,
                      std::move(cell));
          }
        }
      }
    }
  }
  for (Eigen::Index ia = 0; ia < na; ++ia) {
    for (Eigen::Index ib = 0; ib < nb; ++ib) {
      for (Eigen::Index il = 0; il < nl; ++il) {
        const double rho = m.prior(ia, ib)[il];
        const ProbTable& k = m.kernel(ia, ib, il);
        const ProbTable mass_a = marginal_a(m, ia, ib, il, tol);
        const bool supported = rho > tol.tau_eq;
        for (Eigen::Index iA = 0; iA < mass_a.size(); ++iA) {
          CellRef base = setting_cell(m, ia, ib, il);
          base.add(kAxisOutcomeA, m.outcomes_a()[iA]);
          if (rho <= tol.tau_norm || mass_a[iA] <= tol.tau_norm ||
              !target_b_ok[ib * nl + il]) {
            skipped.push_back(std::move(base));
            continue;
          }
          const ProbTable conditioned =
              condition(k, kAxisOutcomeA, m.outcomes_a()[iA], tol);
          const Eigen::ArrayXd& target = target_b[ib * nl + il];
          for (Eigen::Index iB = 0; iB < conditioned.size(); ++iB) {
            CellRef cell = base;
            cell.add(kAxisOutcomeB, m.outcomes_b()[iB]);
            sup.offer(std::abs(conditioned[iB] - target[iB]), supported,
                      std::move(cell));
          }
        }
      }
    }
  }

  AuditReport r =
      std::move(sup).finish(kCondLegacyLocalCausality, std::move(skipped), tol);
  r.caveats.push_back(
      "settings carry no probabilities in the model; a uniform "
      "distribution over setting pairs was injected to form the "
      "setting-averaged conditionals");

  const Verdict v_outcome = check_statistical_sufficiency(m, tol).verdict;
  const Verdict v_setting = check_functional_sufficiency(m, tol).verdict;
  Verdict conjunction = Verdict::pass;
  if (v_outcome == Verdict::fail || v_setting == Verdict::fail) {
    conjunction = Verdict::fail;
  } else if (v_outcome == Verdict::undefined_cells ||
             v_setting == Verdict::undefined_cells) {
    conjunction = Verdict::undefined_cells;
  }
  if (r.verdict == conjunction) {
    r.caveats.push_back(
        "verdict agrees with the conjunction of the statistical-sufficiency "
        "and functional-sufficiency checks");
  } else {
    r.caveats.push_back(
        "verdict differs from the conjunction of the "
        "statistical-sufficiency and functional-sufficiency checks "
        "(hidden states with zero prior weight are invisible to the "
        "setting-averaged conditionals but are audited by the per-setting "
        "checks)");
  }
  return r;
}

const std::vector<std::string>& all_condition_ids() {
  static const std::vector<std::string> ids = {
      kCondFreeVariables,          kCondLocalCausality,
      kCondFactorizability,        kCondStatisticalSufficiency,
      kCondFunctionalSufficiency,  kCondNoSignalling,
      kCondLegacyLocalCausality};
  return ids;
}

std::vector<AuditReport> audit_model(const BellModel& m,
                                     const std::vector<std::string>& conditions,
                                     const Tolerance& tol) {
  const std::vector<std::string>& all = all_condition_ids();
  const std::vector<std::string>& selected =
      conditions.empty() ? all : conditions;
  for (const std::string& c : selected) {
    if (std::find(all.begin(), all.end(), c) == all.end()) {
      throw Error("unknown check '" + c + "'");
    }
  }

  const AuditReport free_vars = check_free_variables(m, tol);
  std::vector<AuditReport> out;
  out.reserve(selected.size());
  for (const std::string& c : selected) {
    AuditReport r;
    if (c == kCondFreeVariables) {
      r = free_vars;
    } else if (c == kCondLocalCausality) {
      r = check_local_causality(m, tol);
    } else if (c == kCondFactorizability) {
      r = check_factorizability(m, tol);
    } else if (c == kCondStatisticalSufficiency) {
      r = check_statistical_sufficiency(m, tol);
    } else if (c == kCondFunctionalSufficiency) {
      r = check_functional_sufficiency(m, tol);
    } else if (c == kCondNoSignalling) {
      r = check_no_signalling(predict(m, tol), tol);
    } else {
      r = check_legacy(m, tol);
    }
    if (free_vars.verdict != Verdict::pass && c != kCondFreeVariables) {
      r.caveats.insert(
          r.caveats.begin(),
          "the hidden-state prior depends on the settings (free-variables "
          "check fails); the per-setting-pair results below remain "
          "well-formed");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace bellaudit
