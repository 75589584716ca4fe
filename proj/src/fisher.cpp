// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace bellaudit {

namespace {

void require_labels(const std::vector<std::string>& labels,
                    const std::string& what) {
  if (labels.empty()) {
    throw TableError(what + " alphabet is empty");
  }
  std::unordered_set<std::string_view> seen;
  for (const std::string& label : labels) {
    if (!seen.insert(label).second) {
      throw TableError(what + " alphabet repeats label '" + label + "'");
    }
  }
}

void require_matching(const StatFamily& f, const Statistic& T) {
  if (T.domain() != f.outcomes()) {
    throw AxisError("statistic domain does not match the family's outcome "
                    "alphabet");
  }
}

void require_theta_prior(const StatFamily& f, const ProbTable& prior) {
  const std::vector<Axis> expected = {{kAxisTheta, f.thetas()}};
  if (prior.axes() != expected || !prior.normalized()) {
    throw AxisError("prior must be a normalized table over the family's "
                    "parameter axis");
  }
}

/// Fiber masses p_theta(T = t), |Theta| x |codomain|.
Eigen::MatrixXd fiber_masses(const StatFamily& f, const Statistic& T) {
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(
      f.n_thetas(), static_cast<Eigen::Index>(T.codomain().size()));
  for (Eigen::Index ix = 0; ix < f.n_outcomes(); ++ix) {
    mass.col(T.value_index(ix)) += f.tables().col(ix);
  }
  return mass;
}

/// Running sup with earliest-cell tie-breaking, as in the audit module.
class Sup {
 public:
  void offer(double dev, CellRef cell) {
    evaluated_ = true;
    if (dev > max_) {
      max_ = dev;
      witness_ = std::move(cell);
    }
  }

  SufficiencyResult finish(const Tolerance& tol,
                           const char* vacuous_note) && {
    SufficiencyResult r;
    if (!evaluated_) {
      r.sufficient = true;
      r.caveats.push_back(vacuous_note);
      return r;
    }
    r.max_deviation = std::max(max_, 0.0);
    r.witness = std::move(witness_);
    r.sufficient = r.max_deviation <= tol.tau_eq;
    return r;
  }

 private:
  double max_ = -1.0;
  CellRef witness_;
  bool evaluated_ = false;
};

}  // namespace

StatFamily::StatFamily(std::vector<std::string> thetas,
                       std::vector<std::string> outcomes,
                       Eigen::MatrixXd tables, const Tolerance& tol)
    : thetas_(std::move(thetas)), outcomes_(std::move(outcomes)),
      tables_(std::move(tables)) {
  require_labels(thetas_, "parameter");
  require_labels(outcomes_, "outcome");
  if (tables_.rows() != n_thetas() || tables_.cols() != n_outcomes()) {
    throw TableError("family table must be |Theta| x |X|");
  }
  for (Eigen::Index it = 0; it < n_thetas(); ++it) {
    // Reuse the table invariants (nonnegativity, normalization).
    distribution(it, tol);
  }
}

ProbTable StatFamily::distribution(Eigen::Index itheta,
                                   const Tolerance& tol) const {
  return ProbTable({{"x", outcomes_}}, tables_.row(itheta).array().transpose(),
                   true, tol);
}

Statistic::Statistic(std::vector<std::string> domain,
                     const std::vector<std::string>& values)
    : domain_(std::move(domain)) {
  require_labels(domain_, "statistic domain");
  if (values.size() != domain_.size()) {
    throw ModelError("statistic must be total: expected one value per "
                     "domain element");
  }
  map_.reserve(values.size());
  std::unordered_map<std::string, Eigen::Index> index;
  for (const std::string& v : values) {
    auto [it, inserted] =
        index.emplace(v, static_cast<Eigen::Index>(codomain_.size()));
    if (inserted) codomain_.push_back(v);
    map_.push_back(it->second);
  }
}

Statistic Statistic::identity(std::vector<std::string> domain) {
  std::vector<std::string> values = domain;
  return Statistic(std::move(domain), values);
}

Statistic Statistic::constant(std::vector<std::string> domain,
                              std::string label) {
  std::vector<std::string> values(domain.size(), std::move(label));
  return Statistic(std::move(domain), values);
}

Statistic Statistic::from_function(
    std::vector<std::string> domain,
    const std::function<std::string(const std::string&)>& f) {
  std::vector<std::string> values;
  values.reserve(domain.size());
  for (const std::string& x : domain) values.push_back(f(x));
  return Statistic(std::move(domain), values);
}

std::vector<std::vector<Eigen::Index>> Statistic::fibers() const {
  std::vector<std::vector<Eigen::Index>> out(codomain_.size());
  for (Eigen::Index ix = 0; ix < static_cast<Eigen::Index>(map_.size());
       ++ix) {
    out[map_[ix]].push_back(ix);
  }
  return out;
}

StatFamily iid_product(const StatFamily& f, int n, Eigen::Index cap,
                       const Tolerance& tol) {
  if (n < 1) {
    throw Error("product power must be at least 1");
  }
  const Eigen::Index base = f.n_outcomes();
  Eigen::Index total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > cap / base) {
      throw CapacityError("product outcome alphabet would exceed the cap of " +
                          std::to_string(cap) + " entries");
    }
    total *= base;
  }

  std::vector<std::string> labels(total);
  Eigen::MatrixXd tables = Eigen::MatrixXd::Ones(f.n_thetas(), total);
  std::vector<Eigen::Index> digits(n);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Eigen::Index rest = flat;
    for (int i = n - 1; i >= 0; --i) {
      digits[i] = rest % base;
      rest /= base;
    }
    std::string label;
    for (int i = 0; i < n; ++i) {
      if (i) label += ',';
      label += f.outcomes()[digits[i]];
    }
    labels[flat] = std::move(label);
    for (Eigen::Index it = 0; it < f.n_thetas(); ++it) {
      double w = 1.0;
      for (int i = 0; i < n; ++i) w *= f.p(it, digits[i]);
      tables(it, flat) = w;
    }
  }
  return StatFamily(f.thetas(), std::move(labels), std::move(tables), tol);
}

SufficiencyResult is_sufficient_conditional(const StatFamily& f,
                                            const Statistic& T,
                                            const Tolerance& tol) {
  require_matching(f, T);
  const Eigen::MatrixXd mass = fiber_masses(f, T);
  const std::vector<std::vector<Eigen::Index>> fibers = T.fibers();
  Sup sup;
  for (Eigen::Index it = 0; it < static_cast<Eigen::Index>(fibers.size());
       ++it) {
    std::vector<Eigen::Index> live;
    for (Eigen::Index ith = 0; ith < f.n_thetas(); ++ith) {
      if (mass(ith, it) > tol.tau_norm) live.push_back(ith);
    }
    for (std::size_t i = 0; i < live.size(); ++i) {
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        for (Eigen::Index ix : fibers[it]) {
          const double lhs = f.p(live[i], ix) / mass(live[i], it);
          const double rhs = f.p(live[j], ix) / mass(live[j], it);
          CellRef cell;
          cell.add("t", T.codomain()[it]);
          cell.add(kAxisTheta, f.thetas()[live[i]]);
          cell.add("theta'", f.thetas()[live[j]]);
          cell.add("x", f.outcomes()[ix]);
          sup.offer(std::abs(lhs - rhs), std::move(cell));
        }
      }
    }
  }
  return std::move(sup).finish(
      tol, "no fiber carries positive mass for two parameters; the "
           "conditional criterion holds vacuously");
}

SufficiencyResult is_sufficient_factorization(const StatFamily& f,
                                              const Statistic& T,
                                              const Tolerance& tol) {
  require_matching(f, T);
  const std::vector<std::vector<Eigen::Index>> fibers = T.fibers();
  Sup sup;
  for (Eigen::Index it = 0; it < static_cast<Eigen::Index>(fibers.size());
       ++it) {
    std::vector<Eigen::Index> supported;
    for (Eigen::Index ix : fibers[it]) {
      if (f.tables().col(ix).sum() > tol.tau_norm) supported.push_back(ix);
    }
    for (std::size_t i = 0; i < supported.size(); ++i) {
      const Eigen::ArrayXd u =
          f.tables().col(supported[i]).array() /
          f.tables().col(supported[i]).sum();
      for (std::size_t j = i + 1; j < supported.size(); ++j) {
        const Eigen::ArrayXd v =
            f.tables().col(supported[j]).array() /
            f.tables().col(supported[j]).sum();
        for (Eigen::Index ith = 0; ith < f.n_thetas(); ++ith) {
          CellRef cell;
          cell.add("t", T.codomain()[it]);
          cell.add("x", f.outcomes()[supported[i]]);
          cell.add("x'", f.outcomes()[supported[j]]);
          cell.add(kAxisTheta, f.thetas()[ith]);
          sup.offer(std::abs(u[ith] - v[ith]), std::move(cell));
        }
      }
    }
  }
  return std::move(sup).finish(
      tol, "every fiber holds at most one supported outcome; the "
           "factorization criterion holds vacuously");
}

ProbTable posterior(const StatFamily& f, const ProbTable& prior,
                    std::string_view x, const Tolerance& tol) {
  require_theta_prior(f, prior);
  Eigen::Index ix = -1;
  for (Eigen::Index i = 0; i < f.n_outcomes(); ++i) {
    if (f.outcomes()[i] == x) {
      ix = i;
      break;
    }
  }
  if (ix < 0) {
    throw AxisError("unknown outcome '" + std::string(x) + "'");
  }
  Eigen::ArrayXd weights =
      prior.values() * f.tables().col(ix).array();
  const double evidence = weights.sum();
  if (evidence <= tol.tau_norm) {
    throw ZeroConditionError("outcome '" + std::string(x) +
                             "' has zero evidence under this prior");
  }
  return ProbTable({{kAxisTheta, f.thetas()}}, weights / evidence, true, tol);
}

SufficiencyResult is_sufficient_bayes(const StatFamily& f, const Statistic& T,
                                      const ProbTable& prior,
                                      const Tolerance& tol) {
  require_matching(f, T);
  require_theta_prior(f, prior);

  std::vector<Eigen::Index> live;
  std::string dead_note;
  for (Eigen::Index ith = 0; ith < f.n_thetas(); ++ith) {
    if (prior[ith] > tol.tau_eq) {
      live.push_back(ith);
    } else {
      dead_note += dead_note.empty() ? "" : ", ";
      dead_note += f.thetas()[ith];
    }
  }
  const Eigen::MatrixXd mass = fiber_masses(f, T);
  Sup sup;
  for (Eigen::Index ix = 0; ix < f.n_outcomes(); ++ix) {
    double evidence_x = 0.0;
    for (Eigen::Index ith : live) evidence_x += prior[ith] * f.p(ith, ix);
    if (evidence_x <= tol.tau_norm) continue;
    const Eigen::Index it = T.value_index(ix);
    double evidence_t = 0.0;
    for (Eigen::Index ith : live) evidence_t += prior[ith] * mass(ith, it);
    for (Eigen::Index ith : live) {
      const double post_x = prior[ith] * f.p(ith, ix) / evidence_x;
      const double post_t = prior[ith] * mass(ith, it) / evidence_t;
      CellRef cell;
      cell.add("t", T.codomain()[it]);
      cell.add("x", f.outcomes()[ix]);
      cell.add(kAxisTheta, f.thetas()[ith]);
      sup.offer(std::abs(post_x - post_t), std::move(cell));
    }
  }
  SufficiencyResult r = std::move(sup).finish(
      tol, "no outcome carries positive evidence; the posterior criterion "
           "holds vacuously");
  if (!dead_note.empty()) {
    r.caveats.push_back("parameters with zero prior weight excluded from "
                        "the posterior comparison: " +
                        dead_note);
  }
  return r;
}

Statistic minimal_sufficient_partition(const StatFamily& f,
                                       const Tolerance& tol) {
  std::vector<std::string> values(f.n_outcomes());
  std::vector<Eigen::ArrayXd> reps;
  std::vector<std::string> labels;
  Eigen::Index zero_class = -1;
  auto new_label = [&labels]() {
    labels.push_back("t" + std::to_string(labels.size()));
    return labels.back();
  };
  for (Eigen::Index ix = 0; ix < f.n_outcomes(); ++ix) {
    const Eigen::ArrayXd profile = f.tables().col(ix).array();
    const double total = profile.sum();
    if (total <= tol.tau_norm) {
      if (zero_class < 0) {
        zero_class = static_cast<Eigen::Index>(reps.size());
        reps.emplace_back();  // placeholder, never compared
        new_label();
      }
      values[ix] = labels[zero_class];
      continue;
    }
    const Eigen::ArrayXd u = profile / total;
    Eigen::Index assigned = -1;
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(reps.size());
         ++c) {
      if (c == zero_class) continue;
      if ((u - reps[c]).abs().maxCoeff() <= tol.tau_eq) {
        assigned = c;
        break;
      }
    }
    if (assigned < 0) {
      assigned = static_cast<Eigen::Index>(reps.size());
      reps.push_back(u);
      new_label();
    }
    values[ix] = labels[assigned];
  }
  Statistic out(f.outcomes(), values);
  if (!is_sufficient_conditional(f, out, tol).sufficient) {
    throw Error("minimal sufficient partition failed its own sufficiency "
                "re-check");
  }
  return out;
}

}  // namespace bellaudit
