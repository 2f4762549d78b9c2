#pragma once

#include "kpsym/expr.hpp"

#include <optional>
#include <set>
#include <string>

namespace kpsym {

class Space;

/// Name-resolution context for the expression grammar. Identifiers must
/// resolve to coordinates, fields, jet variables, declared parameters or
/// formal functions unless `open_world` is set (then any identifier becomes a
/// symbol; used by generic tests and table parsing).
struct SymbolTable {
  const Space* space = nullptr;            // enables jet-variable resolution
  std::set<std::string> symbols;           // parameters and other plain symbols
  std::set<std::string> functions;         // formal function names (f, beta, ...)
  bool open_world = false;

  bool knows_symbol(const std::string& name) const;
  /// function name, derivative order encoded by trailing 'p's
  std::optional<std::pair<std::string, int>> match_function(const std::string& id) const;
};

/// Parses `text` against the grammar in the project README. Throws
/// Error("parse", ...) with a 1-based character position on syntax errors and
/// unknown identifiers.
Expr parse(const std::string& text, const SymbolTable& table);

/// Convenience: open-world parse (any identifier allowed, functions f/beta).
Expr parse_any(const std::string& text);

}  // namespace kpsym
