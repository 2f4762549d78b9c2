#pragma once

#include "kpsym/expr.hpp"
#include "kpsym/jets.hpp"
#include "kpsym/space.hpp"

#include <string>
#include <vector>

namespace kpsym {

/// One parameter with its nonvanishing assumption ("eps != 0").
struct Parameter {
  std::string name;
  bool nonzero = false;
};

/// A system of equations (each expression required to vanish) together with
/// the designated leading jet variable each equation is solved for when
/// restricting to the solution manifold.
class PdeSystem {
public:
  PdeSystem() = default;
  PdeSystem(Space sp, std::vector<Expr> eqs, std::vector<std::string> leading,
            std::vector<Parameter> params = {});

  const Space& space() const { return space_; }
  const std::vector<Expr>& equations() const { return eqs_; }
  const std::vector<std::string>& leading() const { return leading_; }
  const std::vector<Parameter>& parameters() const { return params_; }

  /// Highest jet order appearing in equation i.
  int order(size_t i) const;
  int max_order() const;

  /// Right-hand side the leading variable of equation i equals on shell.
  const Expr& solved_rhs(size_t i) const { return rhs_[i]; }
  const JetVar& leading_jet(size_t i) const { return ljet_[i]; }

  /// Restriction to the solution manifold: repeatedly replaces every leading
  /// jet variable and its total-derivative images until none remains.
  Expr on_shell(const Expr& e) const;

private:
  Space space_;
  std::vector<Expr> eqs_;
  std::vector<std::string> leading_;
  std::vector<Parameter> params_;
  std::vector<Expr> rhs_;
  std::vector<JetVar> ljet_;
};

int jet_order_of(const Space& sp, const Expr& e);

}  // namespace kpsym
