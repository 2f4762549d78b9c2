#pragma once

#include "kpsym/expr.hpp"
#include "kpsym/space.hpp"

#include <map>
#include <string>
#include <vector>

namespace kpsym {

/// Largest jet order materialized anywhere. The expanded single-equation form
/// of the KP system reaches order 4; on-shell images of mixed derivatives can
/// raise pure-x orders one step further during intermediate rewriting.
constexpr int kMaxJetOrder = 6;

/// Total derivative D_i e = de/dx^i + sum_J u^A_{J+i} * de/du^A_J over every
/// jet variable (including order-0 fields) present in e.
Expr total_derivative(const Space& sp, const Expr& e, const std::string& coord);

/// Applies a multi-index of total derivatives.
Expr total_derivative(const Space& sp, const Expr& e, const std::vector<int>& index);

/// Point vector field: one coefficient per independent coordinate (xi) and
/// per dependent field (eta). Coefficients may depend only on base
/// coordinates and order-0 fields.
struct VectorField {
  Space space;
  std::vector<Expr> xi;
  std::vector<Expr> eta;

  VectorField() = default;
  VectorField(Space sp, std::vector<Expr> xi_, std::vector<Expr> eta_);

  /// X applied to a base-space function (no jet variables).
  Expr apply_point(const Expr& e) const;

  bool is_zero_field() const;
};

VectorField vf_add(const VectorField& a, const VectorField& b);
VectorField vf_scale(const Expr& c, const VectorField& a);

/// Lie bracket [X,Y] = X(Y) - Y(X) on coefficients.
VectorField commutator(const VectorField& X, const VectorField& Y);

/// A vector field with its jet-space extension: eta^J for every jet variable
/// up to `order`, built by the recursion
///   eta^{J+i} = D_i eta^J - sum_j u^A_{J+j} D_i xi^j.
class Prolonged {
public:
  Prolonged(const VectorField& X, int order);

  const VectorField& base() const { return X_; }
  int order() const { return order_; }

  /// Prolonged coefficient for a jet variable (order 0 gives eta^A).
  const Expr& eta(const JetVar& j) const;

  /// Full prolonged action on a jet-space expression. Throws if e contains
  /// jet variables above the prolongation order.
  Expr apply(const Expr& e) const;

private:
  VectorField X_;
  int order_;
  std::map<std::string, Expr> etaJ_;
};

}  // namespace kpsym
