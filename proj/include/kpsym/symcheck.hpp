#pragma once

#include "kpsym/jets.hpp"
#include "kpsym/linalg.hpp"
#include "kpsym/pde.hpp"

#include <set>
#include <string>
#include <vector>

namespace kpsym {

/// On-shell residuals of the symmetry condition, one per equation. An
/// all-zero list certifies X as a Lie point symmetry of the system.
std::vector<Expr> symmetry_residual(const PdeSystem& sys, const VectorField& X);

bool is_symmetry(const PdeSystem& sys, const VectorField& X);

/// Linear homogeneous constraints on the coefficients of a polynomial
/// infinitesimal ansatz. Row = coefficient of one monomial in the jet
/// variables, base variables and formal-function atoms of the expanded
/// residual; column = one ansatz coefficient.
struct DeterminingSystem {
  std::vector<std::string> unknowns;   // ansatz coefficient names, cNN
  std::vector<std::string> targets;    // "xi_t", "xi_x", ..., "eta_v"
  std::vector<Expr> ansatz_monomials;  // per-coefficient monomial in (coords, fields)
  ExprMatrix matrix;                   // constraints x unknowns
  std::vector<Expr> keys;              // the monomial each row came from

  /// Reconstructs the vector field encoded by a coefficient assignment.
  VectorField field_from(const Space& sp, const std::vector<Expr>& coeffs) const;
};

/// Expands the symmetry condition for an undetermined ansatz whose
/// coefficients are polynomials of total degree <= degree in the base
/// coordinates and fields (degree 1 = affine, the default).
DeterminingSystem determining_equations(const PdeSystem& sys, int degree = 1);

struct SolveResult {
  std::vector<VectorField> basis;   // normalized, deterministically ordered
  std::vector<Expr> conditions;     // parameter assumptions behind the rank
};

/// Exact null-space basis of the determining system over the parameter field.
SolveResult solve_determining(const PdeSystem& sys, const DeterminingSystem& ds);

/// f(u) classification branches handled by the workbench.
enum class Branch { Generic, PowerLaw, Exponential };

std::string branch_name(Branch b);

/// Instantiates the formal f of `sys` for a branch (generic leaves f formal;
/// power law substitutes u^k + f0; exponential substitutes e^{sigma u} + f0).
PdeSystem instantiate_branch(const PdeSystem& sys, Branch b);

struct BranchReport {
  Branch branch;
  int dimension = 0;
  SolveResult solved;
  std::vector<std::string> extra_generators;  // names of known extras found in the span
};

/// Verification-mode classification over the three branches of the template
/// system (which must carry a formal f(u)).
std::vector<BranchReport> classify_branches(
    const PdeSystem& sys_template, int degree,
    const std::vector<std::pair<std::string, VectorField>>& known_extras);

/// True iff X lies in the exact span of the fields in `basis`.
bool in_span(const std::vector<VectorField>& basis, const VectorField& X);

}  // namespace kpsym
