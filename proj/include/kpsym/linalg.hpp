#pragma once

#include "kpsym/expr.hpp"

#include <optional>
#include <vector>

namespace kpsym {

/// Dense matrix of expressions (row-major).
struct ExprMatrix {
  size_t rows = 0, cols = 0;
  std::vector<Expr> a;

  ExprMatrix() = default;
  ExprMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, zero()) {}
  Expr& at(size_t i, size_t j) { return a[i * cols + j]; }
  const Expr& at(size_t i, size_t j) const { return a[i * cols + j]; }
};

/// Exact multivariate polynomial division: returns a/b when b divides a over
/// the rationals with integer-exponent monomials, nullopt otherwise.
std::optional<Expr> try_divide(const Expr& a, const Expr& b);

/// Divides through by the rational content and normalizes the leading
/// coefficient's sign.
Expr primitive_part(const Expr& e);

struct Echelon {
  ExprMatrix m;                    // row echelon form (fraction-free)
  std::vector<size_t> pivot_cols;  // one per nonzero row
  std::vector<Expr> conditions;    // parameter-dependent pivots (rank assumptions)
};

/// Fraction-free Gaussian elimination (Bareiss). Pivots preferring constant
/// entries; every division is exact.
Echelon row_echelon(ExprMatrix m);

/// Basis of the right null space, entries polynomial, content-normalized,
/// deterministically ordered. `conditions` of the echelon apply.
std::vector<std::vector<Expr>> null_space(const ExprMatrix& m,
                                          std::vector<Expr>* conditions = nullptr);

/// Solves A x = b exactly when a unique solution exists; nullopt when the
/// system is inconsistent. Throws if the solution is underdetermined.
std::optional<std::vector<Expr>> solve_unique(const ExprMatrix& A, const std::vector<Expr>& b);

}  // namespace kpsym
