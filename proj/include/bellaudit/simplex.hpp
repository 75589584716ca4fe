// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <Eigen/Dense>

namespace bellaudit {

/// Result of a dense equality-form linear program.
struct LpResult {
  bool feasible = false;
  bool bounded = true;
  double objective = 0.0;
  /// Phase-1 optimum (residual equality violation); feasible means it
  /// stayed at or below the feasibility threshold.
  double infeasibility = 0.0;
  /// Primal solution over the structural columns, when feasible.
  Eigen::VectorXd x;
  /// Total pivot count across both phases (diagnostic).
  long pivots = 0;
};

/// Minimizes c.x subject to A x = b, x >= 0, by two-phase dense
/// simplex.  Pricing is Dantzig's rule (most negative reduced cost,
/// lowest column index on exact ties); after a long run of degenerate
/// pivots it permanently switches to Bland's rule, which cannot cycle,
/// so termination is guaranteed.  The leaving row is the minimum-ratio
/// row, lowest basic-variable index among ties.  Every choice is a pure
/// function of the tableau values, so the solve is deterministic across
/// runs and platforms.  Redundant rows are tolerated: their artificial
/// variables simply stay basic at zero.
///
/// `eps` guards pivot magnitudes and the ratio test; `feas_eps` is the
/// cutoff on the phase-1 optimum below which the program counts as
/// feasible.
LpResult solve_lp(Eigen::MatrixXd A, Eigen::VectorXd b,
                  const Eigen::VectorXd& c, double eps = 1e-11,
                  double feas_eps = 1e-9);

}  // namespace bellaudit
