// Apache License, Version 2.0, refer to LICENSE
//
// bellaudit — audits finite candidate theories of a bipartite Bell
// experiment: locality conditions, sufficiency criteria, CHSH values,
// and membership in the local-hidden-variable polytope.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "bellaudit/audit.hpp"
#include "bellaudit/bell_bounds.hpp"
#include "bellaudit/model_io.hpp"
#include "bellaudit/random_models.hpp"
#include "bellaudit/report.hpp"

namespace {

using namespace bellaudit;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Tolerance from --tol when given, else from BELLAUDIT_TOL, else the
/// default; both knobs set tau_eq and tau_norm together.
RenderOptions resolve_tolerance(const std::optional<double>& tol_flag) {
  RenderOptions opts;
  if (tol_flag) {
    opts.tol = Tolerance{*tol_flag, *tol_flag};
    opts.tol_source = "--tol";
    return opts;
  }
  if (const char* env = std::getenv("BELLAUDIT_TOL")) {
    opts.tol = Tolerance{std::stod(env), std::stod(env)};
    opts.tol_source = "BELLAUDIT_TOL";
  }
  return opts;
}

void emit(const std::vector<AuditReport>& reports, const RenderOptions& opts,
          const std::string& format) {
  if (format == "machine") {
    std::cout << render_machine(reports, opts) << "\n";
  } else {
    std::cout << render_text(reports, opts);
  }
}

int verdict_exit(const std::vector<AuditReport>& reports) {
  for (const AuditReport& r : reports) {
    if (r.verdict != Verdict::pass) return kExitFail;
  }
  return kExitPass;
}

/// CHSH combination of largest magnitude over ordered arrangements of
/// two distinct settings per side (the four corner positions are not
/// interchangeable, so the signed extremes live at different
/// arrangements); the signed value and its arrangement are reported.
struct ChshScan {
  double best = 0.0;
  std::string a1, a2, b1, b2;
};

ChshScan scan_chsh(const Phenomenology& ph) {
  ChshScan scan;
  const auto& sa = ph.settings_a();
  const auto& sb = ph.settings_b();
  if (sa.size() < 2 || sb.size() < 2) {
    throw ScenarioError("CHSH needs at least two settings per side");
  }
  for (const std::string& a1 : sa) {
    for (const std::string& a2 : sa) {
      if (a1 == a2) continue;
      for (const std::string& b1 : sb) {
        for (const std::string& b2 : sb) {
          if (b1 == b2) continue;
          const double s = chsh(ph, a1, a2, b1, b2);
          if (scan.a1.empty() || std::abs(s) > std::abs(scan.best)) {
            scan = {s, a1, a2, b1, b2};
          }
        }
      }
    }
  }
  return scan;
}

char num_buf[64];
std::string fmt(double v) {
  std::snprintf(num_buf, sizeof num_buf, "%.12g", v);
  return num_buf;
}

/// Pseudo-check "chsh": deviation is the amount of CHSH violation
/// beyond the classical bound of 2 (0 when unviolated).
AuditReport chsh_report(const Phenomenology& ph, const Tolerance& tol) {
  const ChshScan scan = scan_chsh(ph);
  AuditReport r;
  r.condition = "chsh";
  r.max_deviation = std::max(0.0, std::abs(scan.best) - lhv_bound_chsh());
  r.support_deviation = r.max_deviation;
  r.verdict = r.max_deviation <= tol.tau_eq ? Verdict::pass : Verdict::fail;
  CellRef arrangement;
  arrangement.add("a1", scan.a1);
  arrangement.add("a2", scan.a2);
  arrangement.add("b1", scan.b1);
  arrangement.add("b2", scan.b2);
  r.witness = arrangement;
  r.caveats.push_back("S = " + fmt(scan.best) +
                      " at the witnessed arrangement; classical bound 2");
  return r;
}

/// Pseudo-check "lhv": deviation is the Chebyshev gap to the nearest
/// mixture of deterministic strategies.
AuditReport lhv_report(const Phenomenology& ph, const Tolerance& tol) {
  const LhvCertificate cert = lhv_membership(ph, 65536, tol);
  AuditReport r;
  r.condition = "lhv";
  r.verdict = cert.feasible ? Verdict::pass : Verdict::fail;
  r.max_deviation = cert.infeasibility_gap;
  r.support_deviation = cert.infeasibility_gap;
  r.caveats.push_back(std::to_string(cert.strategies.size()) +
                      " deterministic strategies enumerated");
  if (cert.signalling_input) {
    r.caveats.push_back(
        "the observed tables are themselves signalling; no hidden-state "
        "model reproduces them exactly");
  }
  return r;
}

int cmd_audit(const std::string& path, const std::string& checks_csv,
              const RenderOptions& opts, const std::string& format) {
  ParsedModel parsed = parse_model(read_file(path), opts.tol);
  std::vector<std::string> checks = split_list(checks_csv);

  std::vector<std::string> model_checks;
  bool want_chsh = false, want_lhv = false;
  for (const std::string& c : checks) {
    if (c == "chsh") {
      want_chsh = true;
    } else if (c == "lhv") {
      want_lhv = true;
    } else {
      model_checks.push_back(c);
    }
  }

  std::vector<AuditReport> reports;
  if (const auto* m = std::get_if<BellModel>(&parsed)) {
    if (checks.empty()) {
      reports = audit_model(*m, {}, opts.tol);
    } else if (!model_checks.empty()) {
      reports = audit_model(*m, model_checks, opts.tol);
    }
    const Phenomenology ph = predict(*m, opts.tol);
    if (want_chsh) reports.push_back(chsh_report(ph, opts.tol));
    if (want_lhv) reports.push_back(lhv_report(ph, opts.tol));
  } else if (const auto* ph = std::get_if<Phenomenology>(&parsed)) {
    // Observable tables carry no hidden state; only the checks that
    // read the phenomenology alone apply.
    if (checks.empty()) {
      reports.push_back(check_no_signalling(*ph, opts.tol));
    } else {
      for (const std::string& c : model_checks) {
        if (c != kCondNoSignalling) {
          throw Error("check '" + c +
                      "' needs a hidden-state model, not observable tables");
        }
        reports.push_back(check_no_signalling(*ph, opts.tol));
      }
      if (want_chsh) reports.push_back(chsh_report(*ph, opts.tol));
      if (want_lhv) reports.push_back(lhv_report(*ph, opts.tol));
    }
  } else {
    throw Error("'" + path + "' does not hold a bipartite model");
  }
  emit(reports, opts, format);
  return verdict_exit(reports);
}

int cmd_chsh(const std::string& path, std::vector<std::string> labels,
             const RenderOptions& opts) {
  ParsedModel parsed = parse_model(read_file(path), opts.tol);
  Phenomenology ph = [&] {
    if (const auto* m = std::get_if<BellModel>(&parsed)) {
      return predict(*m, opts.tol);
    }
    if (const auto* p = std::get_if<Phenomenology>(&parsed)) return *p;
    throw Error("'" + path + "' does not hold a bipartite model");
  }();
  if (labels.empty()) {
    const ChshScan scan = scan_chsh(ph);
    std::cout << "S = " << fmt(scan.best) << " at a1=" << scan.a1
              << " a2=" << scan.a2 << " b1=" << scan.b1 << " b2=" << scan.b2
              << " (largest magnitude over arrangements; classical bound 2)\n";
  } else {
    if (labels.size() != 4) {
      throw Error("--arrangement needs a1,a2,b1,b2");
    }
    const double s = chsh(ph, labels[0], labels[1], labels[2], labels[3]);
    std::cout << "S = " << fmt(s) << " (classical bound 2)\n";
  }
  return kExitPass;
}

int cmd_lhv(const std::string& path, const RenderOptions& opts,
            const std::string& format, const std::string& weights_out) {
  ParsedModel parsed = parse_model(read_file(path), opts.tol);
  Phenomenology ph = [&] {
    if (const auto* m = std::get_if<BellModel>(&parsed)) {
      return predict(*m, opts.tol);
    }
    if (const auto* p = std::get_if<Phenomenology>(&parsed)) return *p;
    throw Error("'" + path + "' does not hold a bipartite model");
  }();
  const LhvCertificate cert = lhv_membership(ph, 65536, opts.tol);
  std::vector<AuditReport> reports{lhv_report(ph, opts.tol)};
  emit(reports, opts, format);
  if (!weights_out.empty() && cert.feasible) {
    std::ofstream out(weights_out, std::ios::binary);
    out << serialize(certificate_model(cert, ph, opts.tol));
    if (!out) throw Error("cannot write '" + weights_out + "'");
  }
  return verdict_exit(reports);
}

int cmd_suff(const std::string& family_path, const std::string& statistic_path,
             const std::string& prior_csv, const RenderOptions& opts,
             const std::string& format) {
  ParsedModel pf = parse_model(read_file(family_path), opts.tol);
  const auto* f = std::get_if<StatFamily>(&pf);
  if (!f) throw Error("'" + family_path + "' does not hold a family");
  ParsedModel pt = parse_model(read_file(statistic_path), opts.tol);
  const auto* T = std::get_if<Statistic>(&pt);
  if (!T) throw Error("'" + statistic_path + "' does not hold a statistic");

  ProbTable prior = [&] {
    if (prior_csv.empty()) return ProbTable::uniform({{kAxisTheta, f->thetas()}});
    const std::vector<std::string> parts = split_list(prior_csv);
    if (parts.size() != f->thetas().size()) {
      throw Error("--prior needs one weight per parameter");
    }
    Eigen::ArrayXd w(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) w[i] = std::stod(parts[i]);
    return ProbTable({{kAxisTheta, f->thetas()}}, w, true, opts.tol);
  }();

  auto to_report = [&](const char* name, const SufficiencyResult& s) {
    AuditReport r;
    r.condition = name;
    r.verdict = s.sufficient ? Verdict::pass : Verdict::fail;
    r.max_deviation = s.max_deviation;
    r.support_deviation = s.max_deviation;
    r.witness = s.witness;
    r.caveats = s.caveats;
    return r;
  };
  std::vector<AuditReport> reports;
  reports.push_back(
      to_report("sufficiency-conditional", is_sufficient_conditional(*f, *T, opts.tol)));
  reports.push_back(to_report("sufficiency-factorization",
                              is_sufficient_factorization(*f, *T, opts.tol)));
  reports.push_back(
      to_report("sufficiency-bayes", is_sufficient_bayes(*f, *T, prior, opts.tol)));

  // Informational row: the coarsest statistic that stays sufficient.
  const Statistic minimal = minimal_sufficient_partition(*f, opts.tol);
  AuditReport part;
  part.condition = "minimal-partition";
  std::ostringstream classes;
  classes << minimal.codomain().size() << " classes:";
  for (std::size_t i = 0; i < minimal.domain().size(); ++i) {
    classes << " " << minimal.domain()[i] << "->"
            << minimal.value_label(static_cast<Eigen::Index>(i));
  }
  part.caveats.push_back(classes.str());
  reports.push_back(std::move(part));

  emit(reports, opts, format);
  return verdict_exit(reports);
}

int cmd_gen(const std::string& name, const std::string& angles_a,
            const std::string& angles_b, int n, std::uint64_t seed,
            const RenderOptions& opts) {
  auto angles = [&](const std::string& csv, std::vector<double> fallback) {
    if (csv.empty()) return fallback;
    std::vector<double> out;
    for (const std::string& item : split_list(csv)) {
      out.push_back(parse_angle_text(item));
    }
    return out;
  };
  const double pi = 3.14159265358979323846;
  if (name == "singlet") {
    std::cout << serialize(build_singlet(angles(angles_a, {0.0, pi / 2}),
                                         angles(angles_b, {pi / 4, 3 * pi / 4}),
                                         opts.tol));
  } else if (name == "pr-box") {
    std::cout << serialize(build_pr_box());
  } else if (name == "det-local") {
    std::cout << serialize(build_deterministic_local(
        {{"a0", "+1"}, {"a1", "-1"}}, {{"b0", "+1"}, {"b1", "+1"}},
        {"+1", "-1"}, {"+1", "-1"}));
  } else if (name == "lhv-mixture") {
    std::mt19937_64 rng(seed);
    std::cerr << "seed: " << seed << "\n";
    std::cout << serialize(random_model(ModelKind::lhv_mixture, rng));
  } else if (name == "signalling") {
    std::cout << serialize(build_signalling_demo());
  } else if (name == "setting-prior") {
    // Two hidden states; the prior flips with the setting pair, which the
    // free-variables check reports with deviation 1.
    const std::vector<std::string> ls = {"l0", "l1"};
    Eigen::ArrayXd w0(2), w1(2);
    w0 << 1.0, 0.0;
    w1 << 0.0, 1.0;
    ProbTable p0({{kAxisLambda, ls}}, w0);
    ProbTable p1({{kAxisLambda, ls}}, w1);
    ProbTable k = ProbTable::uniform(
        {{kAxisOutcomeA, {"+1", "-1"}}, {kAxisOutcomeB, {"+1", "-1"}}});
    std::cout << serialize(BellModel({"a0", "a1"}, {"b0"}, {"+1", "-1"},
                                     {"+1", "-1"}, ls, {p0, p1},
                                     {k, k, k, k}));
  } else if (name == "bernoulli-family") {
    Eigen::MatrixXd rows(2, 2);
    rows << 0.8, 0.2, 0.3, 0.7;
    std::cout << serialize(StatFamily({"p=0.2", "p=0.7"}, {"0", "1"}, rows));
  } else if (name == "sum-statistic") {
    // Count of "1" digits across an n-fold product of {0,1} outcomes.
    Eigen::MatrixXd rows(1, 2);
    rows << 0.5, 0.5;
    StatFamily bit({"p"}, {"0", "1"}, rows);
    StatFamily joint = iid_product(bit, n);
    std::vector<std::string> values;
    for (const std::string& word : joint.outcomes()) {
      int ones = 0;
      for (char c : word) ones += c == '1';
      values.push_back("s" + std::to_string(ones));
    }
    std::cout << serialize(Statistic(joint.outcomes(), values));
  } else {
    throw Error("unknown model name '" + name +
                "' (try: singlet, pr-box, det-local, lhv-mixture, "
                "signalling, setting-prior, bernoulli-family, sum-statistic)");
  }
  std::cout << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Audits finite models of a bipartite experiment: locality and "
      "sufficiency conditions, CHSH values, and membership in the "
      "local-hidden-variable polytope."};
  app.require_subcommand(1);
  std::optional<double> tol_flag;
  std::string format = "text";
  app.add_option("--tol", tol_flag,
                 "verdict and normalization tolerance (default 1e-9; the "
                 "BELLAUDIT_TOL environment variable overrides the default "
                 "when the flag is absent)");
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string path, checks, labels_csv, weights_out;
  std::string family_path, statistic_path, prior_csv;
  std::string gen_name, angles_a, angles_b;
  int n = 4;
  std::uint64_t seed = kDefaultSeed;

  // Let --tol/--format appear after the subcommand name as well.
  app.fallthrough();
  CLI::App* audit = app.add_subcommand(
      "audit", "run condition checks against a model file");
  audit->add_option("model", path, "model file (JSON)")->required();
  audit->add_option("--checks", checks,
                    "comma list of checks (default: all model checks); "
                    "'chsh' and 'lhv' add phenomenology checks");

  CLI::App* chsh_cmd = app.add_subcommand(
      "chsh", "CHSH combination of a model's observable tables");
  chsh_cmd->add_option("model", path, "model file (JSON)")->required();
  chsh_cmd->add_option("--arrangement", labels_csv,
                       "a1,a2,b1,b2 setting labels (default: best)");

  CLI::App* lhv = app.add_subcommand(
      "lhv", "deterministic-mixture membership of the observable tables");
  lhv->add_option("model", path, "model file (JSON)")->required();
  lhv->add_option("--weights-out", weights_out,
                  "write the certified mixture as a model file");

  CLI::App* suff = app.add_subcommand(
      "suff", "sufficiency criteria and the minimal sufficient partition");
  suff->add_option("family", family_path, "family file (JSON)")->required();
  suff->add_option("statistic", statistic_path, "statistic file (JSON)")
      ->required();
  suff->add_option("--prior", prior_csv,
                   "comma list of parameter weights (default: uniform)");

  CLI::App* gen = app.add_subcommand("gen", "emit a built-in model file");
  gen->add_option("name", gen_name, "model name")->required();
  gen->add_option("--angles-a", angles_a,
                  "comma list of angles ('deg' suffix for degrees)");
  gen->add_option("--angles-b", angles_b, "comma list of angles");
  gen->add_option("--n", n, "product power for sum-statistic");
  gen->add_option("--seed", seed, "seed for randomized models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every usage problem exits 2.
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    const RenderOptions base = resolve_tolerance(tol_flag);
    if (audit->parsed()) return cmd_audit(path, checks, base, format);
    if (chsh_cmd->parsed()) return cmd_chsh(path, split_list(labels_csv), base);
    if (lhv->parsed()) return cmd_lhv(path, base, format, weights_out);
    if (suff->parsed()) {
      return cmd_suff(family_path, statistic_path, prior_csv, base, format);
    }
    if (gen->parsed()) {
      RenderOptions opts = base;
      if (gen_name == "lhv-mixture") opts.seed = seed;
      return cmd_gen(gen_name, angles_a, angles_b, n, seed, opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
