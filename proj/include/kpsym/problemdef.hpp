#pragma once

#include "kpsym/parser.hpp"
#include "kpsym/pde.hpp"
#include "kpsym/symcheck.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kpsym {

struct NamedGenerator {
  std::string name;
  VectorField field;
  Branch branch = Branch::Generic;  // branch whose system it annihilates
  std::string note;                 // e.g. source-form discrepancy remark
};

/// A problem instance: space, equations, branch selection, parameters and the
/// named generator catalog attached to it.
struct ProblemConfig {
  std::string name;
  Space space;
  PdeSystem system;           // with the branch's f substituted
  PdeSystem system_formal;    // with f left formal (equal to `system` when generic)
  Branch branch = Branch::Generic;
  std::vector<Parameter> parameters;
  std::vector<NamedGenerator> generators;
  std::string algebra_label;  // classification metadata, free text
  SymbolTable table;          // parser context for this problem

  const NamedGenerator* find(const std::string& gen_name) const;
  Expr parse_expr(const std::string& text) const { return parse(text, table); }
};

struct CatalogEntry {
  std::string name;
  std::string description;
  Branch branch;
  int finite_dimension;          // named generators excluding the beta family
  int affine_solution_dimension; // solution space of the affine determining system
  std::string algebra_label;
};

/// Summaries of the built-in problems.
std::vector<CatalogEntry> builtin_catalog();

/// Loads a built-in ("kp21", "kp21-power", "kp21-exp", "kp31", "kp31-power",
/// "kp31-exp", "kp21-static", "kp21-travel") or a problem file path. With
/// `validate`, every named generator is residual-checked on load.
ProblemConfig load(const std::string& name_or_path, bool validate = true);

/// Parses the problem-file format (sections: space, parameters, branch,
/// equation, leading, generator; see README).
ProblemConfig load_file(const std::string& path, bool validate = true);

/// Writes a ProblemConfig in the problem-file format.
std::string to_problem_file(const ProblemConfig& cfg);

/// Y-infinity family constructor for the 3+1 system: phi1, phi2 are
/// expressions in (t,y,z); the admissibility constraint
/// alpha*d(phi1)/dy + beta*d(phi2)/dz = 0 is checked symbolically.
VectorField y_infinity(const ProblemConfig& kp31, const Expr& phi1, const Expr& phi2);

}  // namespace kpsym
