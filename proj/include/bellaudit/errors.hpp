// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <stdexcept>
#include <string>

namespace bellaudit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Construction-time violation of a table invariant (negative weight,
/// broken normalization, duplicate axis names, empty alphabet).
class TableError : public Error {
 public:
  using Error::Error;
};

/// An axis name or label that does not exist in the table.
class AxisError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on (or dividing by) an event of zero probability.
class ZeroConditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid candidate-theory construction (non-total response map,
/// mismatched alphabets, bad mixture weights).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A scenario that does not support the requested operation
/// (e.g. CHSH on non-binary outcomes, unknown setting label).
class ScenarioError : public Error {
 public:
  using Error::Error;
};

/// An enumeration that would exceed the configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Model-file diagnostics, qualified by a path into the document.
class ParseError : public Error {
 public:
  enum class Category { syntax, schema, normalization };

  ParseError(Category category, std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what),
        category_(category),
        path_(std::move(path)) {}

  Category category() const { return category_; }
  const std::string& path() const { return path_; }

 private:
  Category category_;
  std::string path_;
};

}  // namespace bellaudit
