// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <string>
#include <variant>

#include "bellaudit/fisher.hpp"
#include "bellaudit/scenario.hpp"

namespace bellaudit {

/// Any of the four serializable object kinds.
using ParsedModel = std::variant<BellModel, Phenomenology, StatFamily,
                                 Statistic>;

/// Parses a model document (JSON, `kind` selects the object type,
/// `version` must be 1).  All alphabet and normalization invariants are
/// checked at load.  Failures raise ParseError with a path into the
/// document and one of three categories: syntax (not JSON), schema
/// (wrong shape, type, key, or alphabet), normalization (weights
/// negative or rows off one).
///
/// A bell-model document may replace its tables with an `angles` block
/// ({"a": [...], "b": [...]}) as shorthand for the built-in singlet at
/// those measurement angles.  Angle entries are radians when numeric;
/// strings take a 'deg' suffix ("90deg").
ParsedModel parse_model(const std::string& text, const Tolerance& tol = {});

/// Serializers; values written here re-parse bit-exactly.
std::string serialize(const BellModel& m);
std::string serialize(const Phenomenology& ph);
std::string serialize(const StatFamily& f);
std::string serialize(const Statistic& T);

/// Angle in radians from user text: a plain number is radians, a 'deg'
/// suffix means degrees ("45deg").  ParseError (schema) on anything
/// else.
double parse_angle_text(const std::string& text);

}  // namespace bellaudit
