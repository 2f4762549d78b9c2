#include "kpsym/eval.hpp"

#include <cmath>

namespace kpsym {

double eval(const Expr& e, const EvalEnv& env) {
  switch (e->kind) {
    case Kind::Num:
      return e->num.get_d();
    case Kind::Sym: {
      auto it = env.vars.find(e->name);
      if (it == env.vars.end()) throw Error("eval", "unbound symbol " + e->name);
      return it->second;
    }
    case Kind::Add: {
      double s = 0;
      for (const auto& k : e->kids) s += eval(k, env);
      return s;
    }
    case Kind::Mul: {
      double p = 1;
      for (const auto& k : e->kids) p *= eval(k, env);
      return p;
    }
    case Kind::Pow: {
      double b = eval(e->kids[0], env);
      if (is_int(e->kids[1])) {
        long n = as_long(e->kids[1]);
        double r = 1, base = n < 0 ? 1.0 / b : b;
        for (long i = 0, m = n < 0 ? -n : n; i < m; ++i) r *= base;
        return r;
      }
      return std::pow(b, eval(e->kids[1], env));
    }
    case Kind::Exp:
      return std::exp(eval(e->kids[0], env));
    case Kind::Log:
      return std::log(eval(e->kids[0], env));
    case Kind::Fun: {
      std::vector<double> args;
      args.reserve(e->kids.size());
      for (const auto& k : e->kids) args.push_back(eval(k, env));
      if (args.size() == 1) {
        auto it = env.funs.find(e->name);
        if (it != env.funs.end()) return it->second(e->deriv[0], args[0]);
      }
      auto it = env.funs_nd.find(e->name);
      if (it != env.funs_nd.end()) return it->second(e->deriv, args);
      throw Error("eval", "unbound formal function " + e->name);
    }
  }
  throw Error("internal", "eval: unexpected node");
}

}  // namespace kpsym
