// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/bell_bounds.hpp"

#include <cmath>
#include <string>

#include "bellaudit/audit.hpp"
#include "bellaudit/simplex.hpp"

namespace bellaudit {

namespace {

void require_binary(const Phenomenology& ph) {
  if (ph.outcomes_a().size() != 2 || ph.outcomes_b().size() != 2) {
    throw ScenarioError("correlators need binary outcome alphabets on both "
                        "sides");
  }
}

}  // namespace

double correlator(const Phenomenology& ph, Eigen::Index ia, Eigen::Index ib) {
  require_binary(ph);
  const ProbTable& t = ph.table(ia, ib);
  double e = 0.0;
  for (Eigen::Index iA = 0; iA < 2; ++iA) {
    for (Eigen::Index iB = 0; iB < 2; ++iB) {
      const int sign = (iA == iB) ? 1 : -1;
      e += sign * t.at({iA, iB});
    }
  }
  return e;
}

double chsh(const Phenomenology& ph, std::string_view a1, std::string_view a2,
            std::string_view b1, std::string_view b2) {
  require_binary(ph);
  const Eigen::Index ia1 = ph.setting_index_a(a1);
  const Eigen::Index ia2 = ph.setting_index_a(a2);
  const Eigen::Index ib1 = ph.setting_index_b(b1);
  const Eigen::Index ib2 = ph.setting_index_b(b2);
  return correlator(ph, ia1, ib1) + correlator(ph, ia1, ib2) +
         correlator(ph, ia2, ib1) - correlator(ph, ia2, ib2);
}

std::vector<DetStrategy> enumerate_product_strategies(
    const std::vector<std::string>& settings_a,
    const std::vector<std::string>& settings_b,
    const std::vector<std::string>& outcomes_a,
    const std::vector<std::string>& outcomes_b, Eigen::Index cap) {
  const std::size_t oa = outcomes_a.size();
  const std::size_t ob = outcomes_b.size();
  const double count_d = std::pow(static_cast<double>(oa),
                                  static_cast<double>(settings_a.size())) *
                         std::pow(static_cast<double>(ob),
                                  static_cast<double>(settings_b.size()));
  if (!(count_d <= static_cast<double>(cap))) {
    throw CapacityError("deterministic strategy count would exceed the cap "
                        "of " +
                        std::to_string(cap));
  }
  std::size_t ra_count = 1;
  for (std::size_t k = 0; k < settings_a.size(); ++k) ra_count *= oa;
  std::size_t rb_count = 1;
  for (std::size_t k = 0; k < settings_b.size(); ++k) rb_count *= ob;

  std::vector<DetStrategy> out;
  out.reserve(ra_count * rb_count);
  for (std::size_t ra = 0; ra < ra_count; ++ra) {
    DetStrategy base;
    std::size_t rest_a = ra;
    for (const std::string& setting : settings_a) {
      base.response_a[setting] = outcomes_a[rest_a % oa];
      rest_a /= oa;
    }
    for (std::size_t rb = 0; rb < rb_count; ++rb) {
      DetStrategy s = base;
      std::size_t rest_b = rb;
      for (const std::string& setting : settings_b) {
        s.response_b[setting] = outcomes_b[rest_b % ob];
        rest_b /= ob;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

double lhv_bound_chsh() {
  const std::vector<std::string> bits = {"0", "1"};
  const std::vector<DetStrategy> strategies =
      enumerate_product_strategies(bits, bits, bits, bits);
  double bound = 0.0;
  for (const DetStrategy& s : strategies) {
    const double sa0 = s.response_a.at("0") == "0" ? 1.0 : -1.0;
    const double sa1 = s.response_a.at("1") == "0" ? 1.0 : -1.0;
    const double sb0 = s.response_b.at("0") == "0" ? 1.0 : -1.0;
    const double sb1 = s.response_b.at("1") == "0" ? 1.0 : -1.0;
    const double S = sa0 * sb0 + sa0 * sb1 + sa1 * sb0 - sa1 * sb1;
    bound = std::max(bound, std::abs(S));
  }
  return bound;
}

LhvCertificate lhv_membership(const Phenomenology& ph, Eigen::Index cap,
                              const Tolerance& tol) {
  LhvCertificate cert;
  cert.strategies = enumerate_product_strategies(
      ph.settings_a(), ph.settings_b(), ph.outcomes_a(), ph.outcomes_b(),
      cap);
  cert.signalling_input =
      check_no_signalling(ph, tol).verdict != Verdict::pass;

  const Eigen::Index nstrat =
      static_cast<Eigen::Index>(cert.strategies.size());
  const Eigen::Index na = ph.n_settings_a();
  const Eigen::Index nb = ph.n_settings_b();
  const Eigen::Index oa = static_cast<Eigen::Index>(ph.outcomes_a().size());
  const Eigen::Index ob = static_cast<Eigen::Index>(ph.outcomes_b().size());
  const Eigen::Index cells = na * nb * oa * ob;

  // Target cells in (a, b, A, B) row-major order.
  Eigen::VectorXd p(cells);
  for (Eigen::Index ia = 0; ia < na; ++ia) {
    for (Eigen::Index ib = 0; ib < nb; ++ib) {
      p.segment((ia * nb + ib) * oa * ob, oa * ob) =
          ph.table(ia, ib).values().matrix();
    }
  }

  // Cell predictions of each strategy (0/1 indicator matrix).
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(cells, nstrat);
  for (Eigen::Index s = 0; s < nstrat; ++s) {
    const DetStrategy& strat = cert.strategies[s];
    for (Eigen::Index ia = 0; ia < na; ++ia) {
      const std::string& ra = strat.response_a.at(ph.settings_a()[ia]);
      Eigen::Index iA = 0;
      while (ph.outcomes_a()[iA] != ra) ++iA;
      for (Eigen::Index ib = 0; ib < nb; ++ib) {
        const std::string& rb = strat.response_b.at(ph.settings_b()[ib]);
        Eigen::Index iB = 0;
        while (ph.outcomes_b()[iB] != rb) ++iB;
        M((ia * nb + ib) * oa * ob + iA * ob + iB, s) = 1.0;
      }
    }
  }

  // Chebyshev program over variables [q, t, slack_up, slack_down]:
  //   minimize t
  //   M q - t + s_up   = p      (mixture does not overshoot by more than t)
  //   M q + t - s_down = p      (nor undershoot)
  //   sum q            = 1
  // always feasible (q uniform, t = 1 covers every cell).
  const Eigen::Index ncols = nstrat + 1 + 2 * cells;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * cells + 1, ncols);
  Eigen::VectorXd b(2 * cells + 1);
  A.block(0, 0, cells, nstrat) = M;
  A.block(cells, 0, cells, nstrat) = M;
  A.block(0, nstrat, cells, 1).setConstant(-1.0);
  A.block(cells, nstrat, cells, 1).setConstant(1.0);
  A.block(0, nstrat + 1, cells, cells).setIdentity();
  A.block(cells, nstrat + 1 + cells, cells, cells) =
      -Eigen::MatrixXd::Identity(cells, cells);
  A.row(2 * cells).head(nstrat).setOnes();
  b.head(cells) = p;
  b.segment(cells, cells) = p;
  b[2 * cells] = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(ncols);
  c[nstrat] = 1.0;

  const LpResult lp = solve_lp(std::move(A), std::move(b), c);
  if (!lp.feasible || !lp.bounded) {
    throw Error("membership program did not solve; this formulation is "
                "always feasible and bounded");
  }
  cert.infeasibility_gap = std::max(0.0, lp.objective);
  cert.feasible = cert.infeasibility_gap <= tol.tau_eq;
  if (cert.feasible) {
    std::vector<std::string> labels(nstrat);
    for (Eigen::Index s = 0; s < nstrat; ++s) {
      labels[s] = "s" + std::to_string(s);
    }
    Eigen::ArrayXd weights = lp.x.head(nstrat).array().max(0.0);
    cert.weights.emplace(
        std::vector<Axis>{{kAxisStrategy, std::move(labels)}},
        std::move(weights), true, tol);
  }
  return cert;
}

BellModel certificate_model(const LhvCertificate& cert,
                            const Phenomenology& ph, const Tolerance& tol) {
  if (!cert.feasible || !cert.weights.has_value()) {
    throw Error("certificate is not feasible; no mixture model exists");
  }
  return build_lhv_mixture(cert.strategies, *cert.weights, ph.settings_a(),
                           ph.settings_b(), ph.outcomes_a(), ph.outcomes_b(),
                           tol);
}

}  // namespace bellaudit
