// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellaudit/audit.hpp"

namespace bellaudit {

/// Run configuration echoed at the top of every rendered report.
struct RenderOptions {
  Tolerance tol{};
  /// Where the tolerance came from: "default", "--tol", or "BELLAUDIT_TOL".
  std::string tol_source = "default";
  /// Seed behind any randomized content, when there was any.
  std::optional<std::uint64_t> seed{};
};

/// Renders an aligned human-readable table — one row per condition with
/// verdict, worst deviation, and witness cell — preceded by a header line
/// echoing the tolerance (with its source) and the seed if present.
/// Caveats and skipped-cell summaries follow each row.
std::string render_text(const std::vector<AuditReport>& reports,
                        const RenderOptions& opts = {});

/// Renders a machine-readable JSON document (kind "audit-report",
/// version 1) carrying every verdict, deviation, witness, skipped cell,
/// and caveat. Doubles survive a render/parse cycle bit-exactly.
std::string render_machine(const std::vector<AuditReport>& reports,
                           const RenderOptions& opts = {});

/// Re-parses a document produced by render_machine; the result compares
/// equal (operator==, exact doubles) to the reports that produced it.
/// Throws ParseError on malformed input.
std::vector<AuditReport> parse_report(const std::string& machine_text);

}  // namespace bellaudit
