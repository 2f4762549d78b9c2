#pragma once

#include "kpsym/expr.hpp"

#include <string>

namespace kpsym {

/// Renders an expression in the workbench grammar; parse(to_string(e)) == e
/// for canonical e.
std::string to_string(const Expr& e);

/// LaTeX rendering (for table emitters).
std::string to_latex(const Expr& e);

}  // namespace kpsym
