// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/random_models.hpp"

#include <cmath>
#include <string>

namespace bellaudit {

namespace {

std::vector<std::string> make_labels(const char* prefix, Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Eigen::Index pick(std::mt19937_64& rng, Eigen::Index lo, Eigen::Index hi) {
  return lo + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(
                                            hi - lo + 1));
}

struct Shape {
  Eigen::Index na, nb, nl, oa, ob;
};

Shape random_shape(std::mt19937_64& rng) {
  return {pick(rng, 1, 3), pick(rng, 1, 3), pick(rng, 1, 3), pick(rng, 2, 3),
          pick(rng, 2, 3)};
}

ProbTable prior_table(const std::vector<std::string>& lambdas,
                      Eigen::ArrayXd weights) {
  return ProbTable({{kAxisLambda, lambdas}}, std::move(weights));
}

ProbTable kernel_table(const std::vector<std::string>& outcomes_a,
                       const std::vector<std::string>& outcomes_b,
                       Eigen::ArrayXd weights) {
  return ProbTable({{kAxisOutcomeA, outcomes_a}, {kAxisOutcomeB, outcomes_b}},
                   std::move(weights));
}

/// Flattens an outer product of outcome factors into an (A,B) kernel.
Eigen::ArrayXd product_cells(const Eigen::ArrayXd& fa,
                             const Eigen::ArrayXd& fb) {
  Eigen::ArrayXd cells(fa.size() * fb.size());
  for (Eigen::Index iA = 0; iA < fa.size(); ++iA) {
    for (Eigen::Index iB = 0; iB < fb.size(); ++iB) {
      cells[iA * fb.size() + iB] = fa[iA] * fb[iB];
    }
  }
  return cells;
}

BellModel assemble(const Shape& s, std::vector<ProbTable> priors,
                   std::vector<ProbTable> kernels) {
  return BellModel(make_labels("a", s.na), make_labels("b", s.nb),
                   make_labels("u", s.oa), make_labels("v", s.ob),
                   make_labels("l", s.nl), std::move(priors),
                   std::move(kernels));
}

BellModel generic_model(Shape s, std::mt19937_64& rng, bool degenerate,
                        bool setting_dependent) {
  const auto lambdas = make_labels("l", s.nl);
  std::vector<ProbTable> priors;
  if (setting_dependent) {
    // Resample per-pair priors until two pairs differ by at least 0.05 in
    // some component, so the dependence is macroscopic.
    for (;;) {
      priors.clear();
      for (Eigen::Index p = 0; p < s.na * s.nb; ++p) {
        priors.push_back(prior_table(lambdas, dirichlet(s.nl, rng)));
      }
      double spread = 0.0;
      for (Eigen::Index il = 0; il < s.nl; ++il) {
        double lo = 1.0, hi = 0.0;
        for (const ProbTable& p : priors) {
          lo = std::min(lo, p[il]);
          hi = std::max(hi, p[il]);
        }
        spread = std::max(spread, hi - lo);
      }
      if (spread >= 0.05) break;
    }
  } else {
    Eigen::ArrayXd w = dirichlet(s.nl, rng);
    if (degenerate) {
      // Kill all but a random nonempty prefix of hidden states outright.
      const Eigen::Index live = pick(rng, 1, s.nl - 1);
      w.tail(s.nl - live).setZero();
      w /= w.sum();
    }
    ProbTable shared = prior_table(lambdas, std::move(w));
    priors.assign(static_cast<std::size_t>(s.na * s.nb), shared);
  }
  std::vector<ProbTable> kernels;
  const auto ua = make_labels("u", s.oa);
  const auto vb = make_labels("v", s.ob);
  for (Eigen::Index p = 0; p < s.na * s.nb * s.nl; ++p) {
    kernels.push_back(kernel_table(ua, vb, dirichlet(s.oa * s.ob, rng)));
  }
  return assemble(s, std::move(priors), std::move(kernels));
}

BellModel product_model(Shape s, std::mt19937_64& rng, bool signalling) {
  if (signalling) s.nb = pick(rng, 2, 3);  // needs a second distant setting
  const auto lambdas = make_labels("l", s.nl);
  const auto ua = make_labels("u", s.oa);
  const auto vb = make_labels("v", s.ob);
  ProbTable shared = prior_table(lambdas, dirichlet(s.nl, rng));
  std::vector<ProbTable> priors(static_cast<std::size_t>(s.na * s.nb), shared);
  // Local factors: the A side sees only (a, lambda), the B side only
  // (b, lambda); the signalling regime later tilts the A side by b.
  std::vector<Eigen::ArrayXd> fa_base, fb;
  for (Eigen::Index p = 0; p < s.na * s.nl; ++p) {
    Eigen::ArrayXd base = dirichlet(s.oa, rng);
    if (signalling) {
      // Keep enough mass off outcome 0 that tilting toward it moves the
      // marginal by at least 0.1 at the last distant setting.
      while (base[0] > 0.8) base = dirichlet(s.oa, rng);
    }
    fa_base.push_back(std::move(base));
  }
  for (Eigen::Index p = 0; p < s.nb * s.nl; ++p) {
    fb.push_back(dirichlet(s.ob, rng));
  }
  std::vector<ProbTable> kernels;
  for (Eigen::Index ia = 0; ia < s.na; ++ia) {
    for (Eigen::Index ib = 0; ib < s.nb; ++ib) {
      for (Eigen::Index il = 0; il < s.nl; ++il) {
        Eigen::ArrayXd fa = fa_base[static_cast<std::size_t>(ia * s.nl + il)];
        if (signalling) {
          const double t =
              0.5 * static_cast<double>(ib) / static_cast<double>(s.nb - 1);
          fa *= 1.0 - t;
          fa[0] += t;
        }
        kernels.push_back(kernel_table(
            ua, vb,
            product_cells(fa, fb[static_cast<std::size_t>(ib * s.nl + il)])));
      }
    }
  }
  return assemble(s, std::move(priors), std::move(kernels));
}

BellModel correlated_model(Shape s, std::mt19937_64& rng) {
  s.oa = s.ob = 2;
  s.nl = 1;
  const auto lambdas = make_labels("l", s.nl);
  const auto ua = make_labels("u", s.oa);
  const auto vb = make_labels("v", s.ob);
  std::vector<ProbTable> priors(static_cast<std::size_t>(s.na * s.nb),
                                prior_table(lambdas, Eigen::ArrayXd::Ones(1)));
  std::vector<ProbTable> kernels;
  for (Eigen::Index p = 0; p < s.na * s.nb; ++p) {
    const double c =
        (0.05 + 0.9 * u01(rng)) * (rng() % 2 == 0 ? 1.0 : -1.0);
    Eigen::ArrayXd cells(4);
    cells << 0.25 * (1 + c), 0.25 * (1 - c), 0.25 * (1 - c), 0.25 * (1 + c);
    kernels.push_back(kernel_table(ua, vb, std::move(cells)));
  }
  return assemble(s, std::move(priors), std::move(kernels));
}

DetStrategy random_strategy(const std::vector<std::string>& settings_a,
                            const std::vector<std::string>& settings_b,
                            const std::vector<std::string>& outcomes_a,
                            const std::vector<std::string>& outcomes_b,
                            std::mt19937_64& rng) {
  DetStrategy st;
  for (const std::string& a : settings_a) {
    st.response_a[a] = outcomes_a[static_cast<std::size_t>(
        pick(rng, 0, static_cast<Eigen::Index>(outcomes_a.size()) - 1))];
  }
  for (const std::string& b : settings_b) {
    st.response_b[b] = outcomes_b[static_cast<std::size_t>(
        pick(rng, 0, static_cast<Eigen::Index>(outcomes_b.size()) - 1))];
  }
  return st;
}

BellModel mixture_model(Shape s, std::mt19937_64& rng, bool single) {
  const auto sa = make_labels("a", s.na);
  const auto sb = make_labels("b", s.nb);
  const auto ua = make_labels("u", s.oa);
  const auto vb = make_labels("v", s.ob);
  if (single) {
    DetStrategy st = random_strategy(sa, sb, ua, vb, rng);
    return build_deterministic_local(st.response_a, st.response_b, ua, vb);
  }
  const Eigen::Index k = pick(rng, 1, 6);
  std::vector<DetStrategy> strategies;
  for (Eigen::Index i = 0; i < k; ++i) {
    strategies.push_back(random_strategy(sa, sb, ua, vb, rng));
  }
  ProbTable weights({{kAxisLambda, make_labels("l", k)}}, dirichlet(k, rng));
  return build_lhv_mixture(strategies, weights, sa, sb, ua, vb);
}

}  // namespace

std::vector<ModelKind> all_model_kinds() {
  return {ModelKind::generic,          ModelKind::product,
          ModelKind::product_signalling, ModelKind::correlated,
          ModelKind::lhv_mixture,      ModelKind::degenerate_prior,
          ModelKind::setting_prior,    ModelKind::deterministic};
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::ArrayXd dirichlet(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::ArrayXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = -std::log1p(-u01(rng));
  const double total = w.sum();
  if (total <= 0.0) return Eigen::ArrayXd::Constant(n, 1.0 / double(n));
  return w / total;
}

BellModel random_model(ModelKind kind, std::mt19937_64& rng) {
  Shape s = random_shape(rng);
  switch (kind) {
    case ModelKind::generic:
      return generic_model(s, rng, false, false);
    case ModelKind::product:
      return product_model(s, rng, false);
    case ModelKind::product_signalling:
      return product_model(s, rng, true);
    case ModelKind::correlated:
      return correlated_model(s, rng);
    case ModelKind::lhv_mixture:
      return mixture_model(s, rng, false);
    case ModelKind::degenerate_prior:
      s.nl = pick(rng, 2, 3);  // needs a state to kill
      return generic_model(s, rng, true, false);
    case ModelKind::setting_prior:
      s.na = pick(rng, 2, 3);  // needs a second pair to differ from
      s.nl = pick(rng, 2, 3);
      return generic_model(s, rng, false, true);
    case ModelKind::deterministic:
      return mixture_model(s, rng, true);
  }
  throw Error("unknown model kind");
}

BellModel random_model_any(std::mt19937_64& rng) {
  const auto kinds = all_model_kinds();
  return random_model(kinds[rng() % kinds.size()], rng);
}

StatFamily random_family(std::mt19937_64& rng) {
  const Eigen::Index nt = pick(rng, 2, 5);
  const Eigen::Index nx = pick(rng, 2, 8);
  Eigen::MatrixXd rows(nt, nx);
  for (Eigen::Index it = 0; it < nt; ++it) {
    rows.row(it) = dirichlet(nx, rng).matrix().transpose();
  }
  return StatFamily(make_labels("th", nt), make_labels("x", nx),
                    std::move(rows));
}

Statistic random_statistic(const StatFamily& f, std::mt19937_64& rng) {
  const Eigen::Index nx = f.n_outcomes();
  const Eigen::Index k = pick(rng, 1, nx);
  std::vector<std::string> values;
  for (Eigen::Index i = 0; i < nx; ++i) {
    values.push_back("t" + std::to_string(pick(rng, 0, k - 1)));
  }
  return Statistic(f.outcomes(), values);
}

std::pair<StatFamily, Statistic> random_sufficient_pair(
    std::mt19937_64& rng) {
  const Eigen::Index nt = pick(rng, 2, 5);
  const Eigen::Index nx = pick(rng, 3, 8);
  const Eigen::Index k = pick(rng, 1, std::min<Eigen::Index>(nx, 4));
  std::vector<std::string> values;
  for (Eigen::Index i = 0; i < nx; ++i) {
    values.push_back("t" + std::to_string(pick(rng, 0, k - 1)));
  }
  Statistic T(make_labels("x", nx), values);
  const Eigen::Index nc = static_cast<Eigen::Index>(T.codomain().size());
  // Shared within-fiber conditional g, per-parameter fiber weights h.
  std::vector<std::vector<Eigen::Index>> fibers = T.fibers();
  std::vector<Eigen::ArrayXd> g;
  for (Eigen::Index t = 0; t < nc; ++t) {
    g.push_back(dirichlet(static_cast<Eigen::Index>(fibers[t].size()), rng));
  }
  Eigen::MatrixXd rows(nt, nx);
  for (Eigen::Index it = 0; it < nt; ++it) {
    Eigen::ArrayXd h = dirichlet(nc, rng);
    for (Eigen::Index t = 0; t < nc; ++t) {
      for (std::size_t j = 0; j < fibers[t].size(); ++j) {
        rows(it, fibers[t][j]) = h[t] * g[t][static_cast<Eigen::Index>(j)];
      }
    }
  }
  StatFamily f(make_labels("th", nt), make_labels("x", nx), std::move(rows));
  return {std::move(f), std::move(T)};
}

ProbTable random_positive_prior(const std::vector<std::string>& thetas,
                                std::mt19937_64& rng) {
  const Eigen::Index n = static_cast<Eigen::Index>(thetas.size());
  Eigen::ArrayXd w =
      0.8 * dirichlet(n, rng) + Eigen::ArrayXd::Constant(n, 0.2 / double(n));
  return ProbTable({{kAxisTheta, thetas}}, std::move(w));
}

}  // namespace bellaudit
