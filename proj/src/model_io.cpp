// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/model_io.hpp"

#include <charconv>
#include <cmath>
#include <unordered_set>
#include <utility>

#include <json.hpp>

namespace bellaudit {

namespace {

using json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail_schema(const std::string& path,
                              const std::string& what) {
  throw ParseError(ParseError::Category::schema, path, what);
}

[[noreturn]] void fail_norm(const std::string& path, const std::string& what) {
  throw ParseError(ParseError::Category::normalization, path, what);
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& require_key(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail_schema(key, "missing required key");
  return *it;
}

void require_keys_among(const json& obj,
                        const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const std::string& a : allowed) ok = ok || a == key;
    if (!ok) fail_schema(key, "unknown key");
  }
}

std::vector<std::string> read_alphabet(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    fail_schema(path, "expected a nonempty array of symbols");
  }
  std::vector<std::string> out;
  out.reserve(j.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail_schema(at(path, i), "expected a string symbol");
    std::string s = j[i].get<std::string>();
    if (!seen.insert(s).second) {
      fail_schema(at(path, i), "symbol '" + s + "' repeats");
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Reads a fixed-length array of numbers into a row of `dst` starting
/// at `offset`.
void read_numbers(const json& j, const std::string& path, std::size_t count,
                  Eigen::ArrayXd& dst, Eigen::Index offset) {
  if (!j.is_array() || j.size() != count) {
    fail_schema(path,
                "expected an array of " + std::to_string(count) + " numbers");
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!j[i].is_number()) fail_schema(at(path, i), "expected a number");
    dst[offset + static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
}

/// Builds a normalized table, converting invariant violations into
/// path-qualified normalization diagnostics.
ProbTable read_table(std::vector<Axis> axes, Eigen::ArrayXd values,
                     const std::string& path, const Tolerance& tol) {
  try {
    return ProbTable(std::move(axes), std::move(values), true, tol);
  } catch (const TableError& e) {
    fail_norm(path, e.what());
  }
}

double read_angle(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_angle_text(j.get<std::string>());
    } catch (const ParseError& e) {
      fail_schema(path, e.what());
    }
  }
  fail_schema(path, "expected an angle (number in radians or 'deg' string)");
}

int read_version(const json& obj) {
  const json& v = require_key(obj, "version");
  if (!v.is_number_integer() || v.get<int>() != 1) {
    fail_schema("version", "unsupported version (expected 1)");
  }
  return 1;
}

BellModel read_bell_model(const json& obj, const Tolerance& tol) {
  if (obj.contains("angles")) {
    require_keys_among(obj, {"kind", "version", "angles"});
    const json& angles = obj["angles"];
    if (!angles.is_object()) fail_schema("angles", "expected an object");
    require_keys_among(angles, {"a", "b"});  // paths are relative; fine
    const json& ja = require_key(angles, "a");
    const json& jb = require_key(angles, "b");
    if (!ja.is_array() || ja.empty()) {
      fail_schema("angles.a", "expected a nonempty array of angles");
    }
    if (!jb.is_array() || jb.empty()) {
      fail_schema("angles.b", "expected a nonempty array of angles");
    }
    std::vector<double> angles_a, angles_b;
    for (std::size_t i = 0; i < ja.size(); ++i) {
      angles_a.push_back(read_angle(ja[i], at("angles.a", i)));
    }
    for (std::size_t i = 0; i < jb.size(); ++i) {
      angles_b.push_back(read_angle(jb[i], at("angles.b", i)));
    }
    return build_singlet(angles_a, angles_b, tol);
  }

  require_keys_among(obj, {"kind", "version", "settings_a", "settings_b",
                           "outcomes_a", "outcomes_b", "lambda", "prior",
                           "kernels"});
  const std::vector<std::string> settings_a =
      read_alphabet(require_key(obj, "settings_a"), "settings_a");
  const std::vector<std::string> settings_b =
      read_alphabet(require_key(obj, "settings_b"), "settings_b");
  const std::vector<std::string> outcomes_a =
      read_alphabet(require_key(obj, "outcomes_a"), "outcomes_a");
  const std::vector<std::string> outcomes_b =
      read_alphabet(require_key(obj, "outcomes_b"), "outcomes_b");
  const std::vector<std::string> lambdas =
      read_alphabet(require_key(obj, "lambda"), "lambda");
  const std::size_t na = settings_a.size();
  const std::size_t nb = settings_b.size();
  const std::size_t nl = lambdas.size();
  const std::size_t oa = outcomes_a.size();
  const std::size_t ob = outcomes_b.size();

  const json& jprior = require_key(obj, "prior");
  if (!jprior.is_array() || jprior.size() != na) {
    fail_schema("prior", "expected one row of priors per setting of side A");
  }
  std::vector<ProbTable> priors;
  priors.reserve(na * nb);
  for (std::size_t ia = 0; ia < na; ++ia) {
    const json& row = jprior[ia];
    const std::string prow = at("prior", ia);
    if (!row.is_array() || row.size() != nb) {
      fail_schema(prow, "expected one prior per setting of side B");
    }
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const std::string path = at(prow, ib);
      Eigen::ArrayXd values(static_cast<Eigen::Index>(nl));
      read_numbers(row[ib], path, nl, values, 0);
      priors.push_back(
          read_table({{kAxisLambda, lambdas}}, std::move(values), path, tol));
    }
  }

  const json& jker = require_key(obj, "kernels");
  if (!jker.is_array() || jker.size() != na) {
    fail_schema("kernels", "expected one row of kernels per setting of side A");
  }
  std::vector<ProbTable> kernels;
  kernels.reserve(na * nb * nl);
  for (std::size_t ia = 0; ia < na; ++ia) {
    const json& row = jker[ia];
    const std::string prow = at("kernels", ia);
    if (!row.is_array() || row.size() != nb) {
      fail_schema(prow, "expected one column of kernels per setting of side B");
    }
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const json& col = row[ib];
      const std::string pcol = at(prow, ib);
      if (!col.is_array() || col.size() != nl) {
        fail_schema(pcol, "expected one kernel per hidden state");
      }
      for (std::size_t il = 0; il < nl; ++il) {
        const json& jk = col[il];
        const std::string path = at(pcol, il);
        if (!jk.is_array() || jk.size() != oa) {
          fail_schema(path, "expected one row per outcome of side A");
        }
        Eigen::ArrayXd values(static_cast<Eigen::Index>(oa * ob));
        for (std::size_t iA = 0; iA < oa; ++iA) {
          read_numbers(jk[iA], at(path, iA), ob, values,
                       static_cast<Eigen::Index>(iA * ob));
        }
        kernels.push_back(read_table({{kAxisOutcomeA, outcomes_a},
                                      {kAxisOutcomeB, outcomes_b}},
                                     std::move(values), path, tol));
      }
    }
  }

  try {
    return BellModel(settings_a, settings_b, outcomes_a, outcomes_b, lambdas,
                     std::move(priors), std::move(kernels), tol);
  } catch (const ModelError& e) {
    fail_schema("", e.what());
  }
}

Phenomenology read_phenomenology(const json& obj, const Tolerance& tol) {
  require_keys_among(obj, {"kind", "version", "settings_a", "settings_b",
                           "outcomes_a", "outcomes_b", "tables"});
  const std::vector<std::string> settings_a =
      read_alphabet(require_key(obj, "settings_a"), "settings_a");
  const std::vector<std::string> settings_b =
      read_alphabet(require_key(obj, "settings_b"), "settings_b");
  const std::vector<std::string> outcomes_a =
      read_alphabet(require_key(obj, "outcomes_a"), "outcomes_a");
  const std::vector<std::string> outcomes_b =
      read_alphabet(require_key(obj, "outcomes_b"), "outcomes_b");
  const std::size_t oa = outcomes_a.size();
  const std::size_t ob = outcomes_b.size();

  const json& jt = require_key(obj, "tables");
  if (!jt.is_array() || jt.size() != settings_a.size()) {
    fail_schema("tables", "expected one row of tables per setting of side A");
  }
  std::vector<ProbTable> tables;
  for (std::size_t ia = 0; ia < settings_a.size(); ++ia) {
    const json& row = jt[ia];
    const std::string prow = at("tables", ia);
    if (!row.is_array() || row.size() != settings_b.size()) {
      fail_schema(prow, "expected one table per setting of side B");
    }
    for (std::size_t ib = 0; ib < settings_b.size(); ++ib) {
      const json& cell = row[ib];
      const std::string path = at(prow, ib);
      if (!cell.is_array() || cell.size() != oa) {
        fail_schema(path, "expected one row per outcome of side A");
      }
      Eigen::ArrayXd values(static_cast<Eigen::Index>(oa * ob));
      for (std::size_t iA = 0; iA < oa; ++iA) {
        read_numbers(cell[iA], at(path, iA), ob, values,
                     static_cast<Eigen::Index>(iA * ob));
      }
      tables.push_back(read_table({{kAxisOutcomeA, outcomes_a},
                                   {kAxisOutcomeB, outcomes_b}},
                                  std::move(values), path, tol));
    }
  }
  try {
    return Phenomenology(settings_a, settings_b, outcomes_a, outcomes_b,
                         std::move(tables), tol);
  } catch (const ModelError& e) {
    fail_schema("", e.what());
  }
}

StatFamily read_stat_family(const json& obj, const Tolerance& tol) {
  require_keys_among(obj, {"kind", "version", "theta", "outcomes", "tables"});
  const std::vector<std::string> thetas =
      read_alphabet(require_key(obj, "theta"), "theta");
  const std::vector<std::string> outcomes =
      read_alphabet(require_key(obj, "outcomes"), "outcomes");
  const json& jt = require_key(obj, "tables");
  if (!jt.is_array() || jt.size() != thetas.size()) {
    fail_schema("tables", "expected one row per parameter");
  }
  Eigen::MatrixXd tables(thetas.size(), outcomes.size());
  for (std::size_t it = 0; it < thetas.size(); ++it) {
    const std::string path = at("tables", it);
    Eigen::ArrayXd row(static_cast<Eigen::Index>(outcomes.size()));
    read_numbers(jt[it], path, outcomes.size(), row, 0);
    tables.row(static_cast<Eigen::Index>(it)) = row.transpose();
    // Row invariants through the table machinery for uniform messages.
    read_table({{"x", outcomes}}, row, path, tol);
  }
  return StatFamily(thetas, outcomes, std::move(tables), tol);
}

Statistic read_statistic(const json& obj) {
  require_keys_among(obj, {"kind", "version", "domain", "codomain", "map"});
  const std::vector<std::string> domain =
      read_alphabet(require_key(obj, "domain"), "domain");
  const json& jm = require_key(obj, "map");
  if (!jm.is_array() || jm.size() != domain.size()) {
    fail_schema("map", "expected one codomain symbol per domain element");
  }
  std::vector<std::string> values;
  for (std::size_t i = 0; i < jm.size(); ++i) {
    if (!jm[i].is_string()) fail_schema(at("map", i), "expected a string symbol");
    values.push_back(jm[i].get<std::string>());
  }
  Statistic out(domain, values);
  if (obj.contains("codomain")) {
    const std::vector<std::string> declared =
        read_alphabet(obj["codomain"], "codomain");
    if (declared != out.codomain()) {
      fail_schema("codomain",
                  "declared codomain must equal the image of the map in "
                  "first-appearance order");
    }
  }
  return out;
}

json alphabet_json(const std::vector<std::string>& labels) {
  return json(labels);
}

}  // namespace

ParsedModel parse_model(const std::string& text, const Tolerance& tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseError::Category::syntax, "document", e.what());
  }
  if (!doc.is_object()) fail_schema("document", "expected a JSON object");
  const json& jkind = require_key(doc, "kind");
  if (!jkind.is_string()) fail_schema("kind", "expected a string");
  const std::string kind = jkind.get<std::string>();
  read_version(doc);
  if (kind == "bell-model") return read_bell_model(doc, tol);
  if (kind == "phenomenology") return read_phenomenology(doc, tol);
  if (kind == "stat-family") return read_stat_family(doc, tol);
  if (kind == "statistic") return read_statistic(doc);
  fail_schema("kind", "unknown kind '" + kind + "'");
}

std::string serialize(const BellModel& m) {
  json out;
  out["kind"] = "bell-model";
  out["version"] = 1;
  out["settings_a"] = alphabet_json(m.settings_a());
  out["settings_b"] = alphabet_json(m.settings_b());
  out["outcomes_a"] = alphabet_json(m.outcomes_a());
  out["outcomes_b"] = alphabet_json(m.outcomes_b());
  out["lambda"] = alphabet_json(m.lambdas());
  json prior = json::array();
  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    json row = json::array();
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      json cell = json::array();
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        cell.push_back(m.prior(ia, ib)[il]);
      }
      row.push_back(std::move(cell));
    }
    prior.push_back(std::move(row));
  }
  out["prior"] = std::move(prior);
  json kernels = json::array();
  const Eigen::Index ob = static_cast<Eigen::Index>(m.outcomes_b().size());
  for (Eigen::Index ia = 0; ia < m.n_settings_a(); ++ia) {
    json row = json::array();
    for (Eigen::Index ib = 0; ib < m.n_settings_b(); ++ib) {
      json col = json::array();
      for (Eigen::Index il = 0; il < m.n_lambdas(); ++il) {
        const ProbTable& k = m.kernel(ia, ib, il);
        json block = json::array();
        for (Eigen::Index iA = 0;
             iA < static_cast<Eigen::Index>(m.outcomes_a().size()); ++iA) {
          json line = json::array();
          for (Eigen::Index iB = 0; iB < ob; ++iB) {
            line.push_back(k.at({iA, iB}));
          }
          block.push_back(std::move(line));
        }
        col.push_back(std::move(block));
      }
      row.push_back(std::move(col));
    }
    kernels.push_back(std::move(row));
  }
  out["kernels"] = std::move(kernels);
  return out.dump(1);
}

std::string serialize(const Phenomenology& ph) {
  json out;
  out["kind"] = "phenomenology";
  out["version"] = 1;
  out["settings_a"] = alphabet_json(ph.settings_a());
  out["settings_b"] = alphabet_json(ph.settings_b());
  out["outcomes_a"] = alphabet_json(ph.outcomes_a());
  out["outcomes_b"] = alphabet_json(ph.outcomes_b());
  json tables = json::array();
  const Eigen::Index ob = static_cast<Eigen::Index>(ph.outcomes_b().size());
  for (Eigen::Index ia = 0; ia < ph.n_settings_a(); ++ia) {
    json row = json::array();
    for (Eigen::Index ib = 0; ib < ph.n_settings_b(); ++ib) {
      const ProbTable& t = ph.table(ia, ib);
      json block = json::array();
      for (Eigen::Index iA = 0;
           iA < static_cast<Eigen::Index>(ph.outcomes_a().size()); ++iA) {
        json line = json::array();
        for (Eigen::Index iB = 0; iB < ob; ++iB) {
          line.push_back(t.at({iA, iB}));
        }
        block.push_back(std::move(line));
      }
      row.push_back(std::move(block));
    }
    tables.push_back(std::move(row));
  }
  out["tables"] = std::move(tables);
  return out.dump(1);
}

std::string serialize(const StatFamily& f) {
  json out;
  out["kind"] = "stat-family";
  out["version"] = 1;
  out["theta"] = alphabet_json(f.thetas());
  out["outcomes"] = alphabet_json(f.outcomes());
  json tables = json::array();
  for (Eigen::Index it = 0; it < f.n_thetas(); ++it) {
    json row = json::array();
    for (Eigen::Index ix = 0; ix < f.n_outcomes(); ++ix) {
      row.push_back(f.p(it, ix));
    }
    tables.push_back(std::move(row));
  }
  out["tables"] = std::move(tables);
  return out.dump(1);
}

std::string serialize(const Statistic& T) {
  json out;
  out["kind"] = "statistic";
  out["version"] = 1;
  out["domain"] = alphabet_json(T.domain());
  out["codomain"] = alphabet_json(T.codomain());
  json map = json::array();
  for (Eigen::Index ix = 0; ix < static_cast<Eigen::Index>(T.domain().size());
       ++ix) {
    map.push_back(T.value_label(ix));
  }
  out["map"] = std::move(map);
  return out.dump(1);
}

double parse_angle_text(const std::string& text) {
  std::string_view s(text);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  double scale = 1.0;
  if (s.size() >= 3 && s.substr(s.size() - 3) == "deg") {
    scale = kPi / 180.0;
    s.remove_suffix(3);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  }
  double value = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ParseError(ParseError::Category::schema, "angle",
                     "expected a number in radians or with a 'deg' suffix, "
                     "got '" +
                         text + "'");
  }
  return value * scale;
}

}  // namespace bellaudit
