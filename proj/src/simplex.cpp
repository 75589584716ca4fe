// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bellaudit/errors.hpp"

namespace bellaudit {

namespace {

// Row-major storage keeps the pivot row operations contiguous.
using Tableau =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Recomputes the reduced-cost row (row m) from scratch for the given
/// objective: row m becomes c - c_B B^-1 A, with -c_B B^-1 b in the
/// rhs column.
void set_costs(Tableau& T, const std::vector<Eigen::Index>& basis,
               const Eigen::VectorXd& cost) {
  const Eigen::Index m = T.rows() - 1;
  T.row(m).setZero();
  T.row(m).head(cost.size()) = cost.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double f = cost[basis[i]];
    if (f != 0.0) T.row(m) -= f * T.row(i);
  }
}

void pivot(Tableau& T, std::vector<Eigen::Index>& basis, Eigen::Index row,
           Eigen::Index col) {
  T.row(row) /= T(row, col);
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    if (i == row) continue;
    const double f = T(i, col);
    if (f != 0.0) T.row(i) -= f * T.row(row);
  }
  basis[row] = col;
}

/// Runs simplex iterations over columns [0, ncols).  Dantzig pricing
/// (most negative reduced cost) converges in few pivots but can cycle
/// on degenerate vertices, so after a long run of pivots with no
/// objective progress the loop switches to Bland's rule for good, which
/// restores the termination guarantee.  Returns false when the
/// objective is unbounded below.
bool iterate(Tableau& T, std::vector<Eigen::Index>& basis, Eigen::Index ncols,
             double eps, long& pivots) {
  const Eigen::Index m = T.rows() - 1;
  const Eigen::Index rhs = T.cols() - 1;
  const long stall_limit = 2 * (m + ncols) + 64;
  // The cap only guards against a numeric stall under Bland's rule and
  // is far beyond any plausible pivot count at this scale.
  const long max_pivots = 10000L * (m + ncols);
  bool bland = false;
  long stalled = 0;
  for (long step = 0; step < max_pivots; ++step) {
    Eigen::Index enter = -1;
    if (bland) {
      for (Eigen::Index j = 0; j < ncols; ++j) {
        if (T(m, j) < -eps) {
          enter = j;
          break;
        }
      }
    } else {
      double best_cost = -eps;
      for (Eigen::Index j = 0; j < ncols; ++j) {
        if (T(m, j) < best_cost) {
          best_cost = T(m, j);
          enter = j;
        }
      }
    }
    if (enter < 0) return true;

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (T(i, enter) <= eps) continue;
      const double ratio = T(i, rhs) / T(i, enter);
      if (ratio < best - eps) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + eps && leave >= 0 &&
                 basis[i] < basis[leave]) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave < 0) return false;
    // Row m holds minus the current objective, so progress in a
    // minimization shows up as an increase.
    const double before = T(m, rhs);
    pivot(T, basis, leave, enter);
    ++pivots;
    if (!bland) {
      stalled = T(m, rhs) > before + 1e-13 ? 0 : stalled + 1;
      if (stalled > stall_limit) bland = true;
    }
  }
  throw Error("simplex pivot limit exceeded");
}

}  // namespace

LpResult solve_lp(Eigen::MatrixXd A, Eigen::VectorXd b,
                  const Eigen::VectorXd& c, double eps, double feas_eps) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m || c.size() != n) {
    throw Error("linear program dimensions disagree");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      A.row(i) = -A.row(i);
      b[i] = -b[i];
    }
  }

  // Structural columns that are exact unit vectors (one +1, zeros
  // elsewhere) serve as the initial basis for their rows; only the
  // rows left over get an artificial column.
  std::vector<Eigen::Index> basis(m, -1);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index row = -1;
    bool unit = true;
    for (Eigen::Index i = 0; i < m && unit; ++i) {
      const double v = A(i, j);
      if (v == 0.0) continue;
      if (v == 1.0 && row < 0) {
        row = i;
      } else {
        unit = false;
      }
    }
    if (unit && row >= 0 && basis[row] < 0) basis[row] = j;
  }
  std::vector<Eigen::Index> art_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < 0) art_rows.push_back(i);
  }
  const Eigen::Index n_art = static_cast<Eigen::Index>(art_rows.size());

  const Eigen::Index total = n + n_art;
  Tableau T = Tableau::Zero(m + 1, total + 1);
  T.topLeftCorner(m, n) = A;
  for (Eigen::Index k = 0; k < n_art; ++k) {
    T(art_rows[k], n + k) = 1.0;
    basis[art_rows[k]] = n + k;
  }
  T.col(total).head(m) = b;

  LpResult res;

  // Phase 1: minimize the artificial sum.
  Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(total);
  cost1.tail(n_art).setOnes();
  set_costs(T, basis, cost1);
  if (!iterate(T, basis, total, eps, res.pivots)) {
    throw Error("phase-1 objective unbounded");  // cannot happen: >= 0
  }

  res.infeasibility = std::max(0.0, -T(m, total));
  if (res.infeasibility > feas_eps) {
    return res;
  }

  // Drive leftover artificials out of the basis where a structural
  // pivot exists; rows without one are redundant and keep their
  // artificial basic at zero.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(T(i, j)) > eps) {
        pivot(T, basis, i, j);
        ++res.pivots;
        break;
      }
    }
  }

  // Phase 2 over the structural columns only.
  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(total);
  cost2.head(n) = c;
  set_costs(T, basis, cost2);
  res.feasible = true;
  if (!iterate(T, basis, n, eps, res.pivots)) {
    res.bounded = false;
    return res;
  }
  res.objective = -T(m, total);
  res.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = T(i, total);
  }
  return res;
}

}  // namespace bellaudit
