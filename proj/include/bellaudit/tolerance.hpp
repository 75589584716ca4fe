// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <cmath>

#include "bellaudit/errors.hpp"

namespace bellaudit {

/// Numeric slack used everywhere: tau_eq for equality of probabilities,
/// tau_norm for normalization checks.  The defaults separate genuine
/// violations (O(0.1) for the built-in models) from double roundoff.
struct Tolerance {
  double tau_eq = 1e-9;
  double tau_norm = 1e-9;

  Tolerance() = default;
  Tolerance(double eq, double norm) : tau_eq(eq), tau_norm(norm) {
    if (!(std::isfinite(eq) && std::isfinite(norm)) || eq < 0.0 || norm < 0.0) {
      throw Error("tolerance values must be finite and nonnegative");
    }
  }
};

}  // namespace bellaudit
