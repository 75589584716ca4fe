// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bellaudit {

/// A named joint index, e.g. {a=a0, b=b1, lambda=l0, B=+1, A=-1}.
/// Used for witnesses and skipped-cell listings; the coordinate set
/// varies per condition, so this is just an ordered list of
/// (coordinate-name, symbol) pairs.
struct CellRef {
  std::vector<std::pair<std::string, std::string>> coords;

  CellRef() = default;
  CellRef(std::initializer_list<std::pair<std::string, std::string>> init)
      : coords(init) {}

  CellRef& add(std::string name, std::string symbol) {
    coords.emplace_back(std::move(name), std::move(symbol));
    return *this;
  }

  std::string str() const {
    std::string out;
    for (const auto& [name, symbol] : coords) {
      if (!out.empty()) out += ' ';
      out += name;
      out += '=';
      out += symbol;
    }
    return out;
  }

  friend bool operator==(const CellRef&, const CellRef&) = default;
};

}  // namespace bellaudit
