// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "bellaudit/errors.hpp"

namespace bellaudit {

namespace {

using json = nlohmann::ordered_json;

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string witness_str(const AuditReport& r) {
  return r.witness ? r.witness->str() : "-";
}

json cell_json(const CellRef& cell) {
  json out = json::array();
  for (const auto& [name, symbol] : cell.coords) {
    out.push_back(json::array({name, symbol}));
  }
  return out;
}

CellRef cell_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) {
    throw ParseError(ParseError::Category::schema, path,
                     "expected an array of [axis, symbol] pairs");
  }
  CellRef cell;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& pair = j[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
        !pair[1].is_string()) {
      throw ParseError(ParseError::Category::schema,
                       path + "[" + std::to_string(i) + "]",
                       "expected an [axis, symbol] pair of strings");
    }
    cell.add(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  return cell;
}

Verdict verdict_from_string(const std::string& s, const std::string& path) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "undefined-cells") return Verdict::undefined_cells;
  throw ParseError(ParseError::Category::schema, path,
                   "unknown verdict '" + s + "'");
}

}  // namespace

std::string render_text(const std::vector<AuditReport>& reports,
                        const RenderOptions& opts) {
  std::ostringstream out;
  out << "tolerance: tau_eq=" << short_num(opts.tol.tau_eq)
      << " tau_norm=" << short_num(opts.tol.tau_norm) << " (" << opts.tol_source
      << ")\n";
  if (opts.seed) out << "seed: " << *opts.seed << "\n";

  std::size_t w_cond = std::string("condition").size();
  std::size_t w_verdict = std::string("verdict").size();
  std::size_t w_dev = std::string("max-deviation").size();
  for (const AuditReport& r : reports) {
    w_cond = std::max(w_cond, r.condition.size());
    w_verdict = std::max(w_verdict, to_string(r.verdict).size());
    w_dev = std::max(w_dev, short_num(r.max_deviation).size());
  }
  out << std::left << std::setw(static_cast<int>(w_cond + 2)) << "condition"
      << std::setw(static_cast<int>(w_verdict + 2)) << "verdict"
      << std::setw(static_cast<int>(w_dev + 2)) << "max-deviation"
      << "witness\n";
  for (const AuditReport& r : reports) {
    out << std::left << std::setw(static_cast<int>(w_cond + 2)) << r.condition
        << std::setw(static_cast<int>(w_verdict + 2)) << to_string(r.verdict)
        << std::setw(static_cast<int>(w_dev + 2))
        << short_num(r.max_deviation) << witness_str(r) << "\n";
    if (r.support_deviation != r.max_deviation) {
      out << "  support deviation: " << short_num(r.support_deviation)
          << " (restricted to hidden states with positive prior)\n";
    }
    if (!r.skipped_cells.empty()) {
      out << "  skipped: " << r.skipped_cells.size()
          << " zero-probability conditioning cell"
          << (r.skipped_cells.size() == 1 ? "" : "s")
          << " (first: " << r.skipped_cells.front().str() << ")\n";
    }
    for (const std::string& caveat : r.caveats) {
      out << "  caveat: " << caveat << "\n";
    }
  }
  return out.str();
}

std::string render_machine(const std::vector<AuditReport>& reports,
                           const RenderOptions& opts) {
  json out;
  out["kind"] = "audit-report";
  out["version"] = 1;
  out["tolerance"] = {{"tau_eq", opts.tol.tau_eq},
                      {"tau_norm", opts.tol.tau_norm},
                      {"source", opts.tol_source}};
  if (opts.seed) out["seed"] = *opts.seed;
  json rows = json::array();
  for (const AuditReport& r : reports) {
    json row;
    row["condition"] = r.condition;
    row["verdict"] = to_string(r.verdict);
    row["max_deviation"] = r.max_deviation;
    row["support_deviation"] = r.support_deviation;
    row["witness"] = r.witness ? cell_json(*r.witness) : json(nullptr);
    json skipped = json::array();
    for (const CellRef& cell : r.skipped_cells) skipped.push_back(cell_json(cell));
    row["skipped_cells"] = std::move(skipped);
    row["caveats"] = json(r.caveats);
    rows.push_back(std::move(row));
  }
  out["reports"] = std::move(rows);
  return out.dump(1);
}

std::vector<AuditReport> parse_report(const std::string& machine_text) {
  json doc;
  try {
    doc = json::parse(machine_text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseError::Category::syntax, "document", e.what());
  }
  if (!doc.is_object() || doc.value("kind", "") != "audit-report") {
    throw ParseError(ParseError::Category::schema, "kind",
                     "expected an audit-report document");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != 1) {
    throw ParseError(ParseError::Category::schema, "version",
                     "unsupported version (expected 1)");
  }
  if (!doc.contains("reports") || !doc["reports"].is_array()) {
    throw ParseError(ParseError::Category::schema, "reports",
                     "expected an array of per-condition reports");
  }
  std::vector<AuditReport> out;
  const json& rows = doc["reports"];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    const std::string path = "reports[" + std::to_string(i) + "]";
    if (!row.is_object()) {
      throw ParseError(ParseError::Category::schema, path,
                       "expected an object");
    }
    AuditReport r;
    r.condition = row.value("condition", "");
    r.verdict = verdict_from_string(row.value("verdict", ""), path + ".verdict");
    if (!row.contains("max_deviation") || !row["max_deviation"].is_number()) {
      throw ParseError(ParseError::Category::schema, path + ".max_deviation",
                       "expected a number");
    }
    r.max_deviation = row["max_deviation"].get<double>();
    if (!row.contains("support_deviation") ||
        !row["support_deviation"].is_number()) {
      throw ParseError(ParseError::Category::schema,
                       path + ".support_deviation", "expected a number");
    }
    r.support_deviation = row["support_deviation"].get<double>();
    if (row.contains("witness") && !row["witness"].is_null()) {
      r.witness = cell_from_json(row["witness"], path + ".witness");
    }
    if (row.contains("skipped_cells")) {
      const json& skipped = row["skipped_cells"];
      if (!skipped.is_array()) {
        throw ParseError(ParseError::Category::schema, path + ".skipped_cells",
                         "expected an array");
      }
      for (std::size_t k = 0; k < skipped.size(); ++k) {
        r.skipped_cells.push_back(cell_from_json(
            skipped[k], path + ".skipped_cells[" + std::to_string(k) + "]"));
      }
    }
    if (row.contains("caveats")) {
      const json& caveats = row["caveats"];
      if (!caveats.is_array()) {
        throw ParseError(ParseError::Category::schema, path + ".caveats",
                         "expected an array of strings");
      }
      for (const json& c : caveats) {
        if (!c.is_string()) {
          throw ParseError(ParseError::Category::schema, path + ".caveats",
                           "expected an array of strings");
        }
        r.caveats.push_back(c.get<std::string>());
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace bellaudit
