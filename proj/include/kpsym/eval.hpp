#pragma once

#include "kpsym/expr.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace kpsym {

/// Numeric environment: symbol values plus callables for formal functions.
/// A single-argument callable receives the derivative order and the argument
/// value; the general form receives the full derivative multi-index.
struct EvalEnv {
  std::map<std::string, double> vars;
  std::map<std::string, std::function<double(int, double)>> funs;
  std::map<std::string, std::function<double(const std::vector<int>&, const std::vector<double>&)>>
      funs_nd;

  EvalEnv& set(const std::string& n, double v) {
    vars[n] = v;
    return *this;
  }
};

double eval(const Expr& e, const EvalEnv& env);

}  // namespace kpsym
