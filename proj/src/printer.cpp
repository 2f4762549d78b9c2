#include "kpsym/printer.hpp"

#include <sstream>

namespace kpsym {

namespace {

enum class Ctx { Top, Factor, PowBase, PowExp };

std::string rat_str(const Rat& q) {
  std::ostringstream os;
  os << q.get_num().get_str();
  if (q.get_den() != 1) os << "/" << q.get_den().get_str();
  return os.str();
}

std::string fun_str(const ExprNode& e, bool latex, const std::string& args) {
  int total = 0;
  for (int d : e.deriv) total += d;
  bool single = e.kids.size() == 1;
  std::ostringstream os;
  if (single) {
    os << e.name;
    for (int i = 0; i < e.deriv[0]; ++i) os << (latex ? "'" : "p");
    os << "(" << args << ")";
  } else {
    if (total == 0) {
      os << e.name << "(" << args << ")";
    } else {
      os << "D(" << e.name << ";";
      for (size_t i = 0; i < e.deriv.size(); ++i) {
        if (i) os << ",";
        os << e.deriv[i];
      }
      os << ")(" << args << ")";
    }
  }
  return os.str();
}

struct Printer {
  bool latex = false;

  std::string paren(const std::string& s) const {
    return latex ? "\\left(" + s + "\\right)" : "(" + s + ")";
  }

  std::string print(const Expr& e, Ctx ctx) const {
    switch (e->kind) {
      case Kind::Num: {
        if (latex && e->num.get_den() != 1) {
          Rat a = abs(e->num);
          std::string s = (e->num < 0 ? std::string("-") : std::string()) + "\\frac{" +
                          a.get_num().get_str() + "}{" + a.get_den().get_str() + "}";
          if (ctx == Ctx::PowBase || (ctx == Ctx::Factor && e->num < 0)) return paren(s);
          return s;
        }
        std::string s = rat_str(e->num);
        bool needs = (ctx == Ctx::PowBase) ||
                     (ctx != Ctx::Top && (e->num < 0 || e->num.get_den() != 1));
        return needs ? paren(s) : s;
      }
      case Kind::Sym:
        return e->name;
      case Kind::Fun: {
        std::string args;
        for (size_t i = 0; i < e->kids.size(); ++i) {
          if (i) args += ",";
          args += print(e->kids[i], Ctx::Top);
        }
        return fun_str(*e, latex, args);
      }
      case Kind::Exp: {
        if (latex) return "e^{" + print(e->kids[0], Ctx::Top) + "}";
        return "exp(" + print(e->kids[0], Ctx::Top) + ")";
      }
      case Kind::Log: {
        if (latex) return "\\ln\\left(" + print(e->kids[0], Ctx::Top) + "\\right)";
        return "log(" + print(e->kids[0], Ctx::Top) + ")";
      }
      case Kind::Pow: {
        std::string b = print(e->kids[0], Ctx::PowBase);
        if (latex) return b + "^{" + print(e->kids[1], Ctx::Top) + "}";
        const Expr& n = e->kids[1];
        bool simple = (n->kind == Kind::Sym) || (is_int(n) && n->num > 0);
        std::string x = print(n, Ctx::Top);
        return b + "^" + (simple ? x : paren(x));
      }
      case Kind::Mul: {
        Rat c(1);
        std::vector<Expr> fs;
        for (const auto& k : e->kids)
          if (k->kind == Kind::Num)
            c = k->num;
          else
            fs.push_back(k);
        std::ostringstream os;
        bool neg = c < 0;
        Rat a = abs(c);
        std::string sep = latex ? " " : "*";
        bool first = true;
        if (a != 1) {
          os << print(num(a), Ctx::Factor);
          first = false;
        }
        for (const auto& f : fs) {
          if (!first) os << sep;
          os << print(f, f->kind == Kind::Add ? Ctx::PowBase : Ctx::Factor);
          first = false;
        }
        std::string body = os.str();
        if (neg) body = "-" + body;
        if (ctx == Ctx::PowBase || (ctx != Ctx::Top && neg)) return paren(body);
        return body;
      }
      case Kind::Add: {
        std::ostringstream os;
        bool first = true;
        for (const auto& t : e->kids) {
          auto [c, fs] = coeff_factors(t);
          if (first) {
            os << print(t, Ctx::Top);
            first = false;
            continue;
          }
          if (c < 0) {
            Expr pos = mul(num(-1), t);
            os << " - " << print(pos, Ctx::Top);
          } else {
            os << " + " << print(t, Ctx::Top);
          }
        }
        std::string body = os.str();
        if (ctx != Ctx::Top) return paren(body);
        return body;
      }
    }
    return "?";
  }
};

}  // namespace

std::string to_string(const Expr& e) { return Printer{false}.print(e, Ctx::Top); }
std::string to_latex(const Expr& e) { return Printer{true}.print(e, Ctx::Top); }

}  // namespace kpsym
