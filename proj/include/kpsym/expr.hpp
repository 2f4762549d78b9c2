#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpsym {

using Rat = mpq_class;

/// Error with a short machine-readable kind tag ("parse", "domain", "internal", ...).
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

enum class Kind : std::uint8_t { Num, Sym, Add, Mul, Pow, Exp, Log, Fun };

class ExprNode;
/// Immutable canonical expression handle. All construction goes through the
/// smart constructors below, which maintain the canonical form:
/// sums of distinct terms, products of distinct power factors, rational
/// constants in lowest terms, positive integer powers of sums expanded.
using Expr = std::shared_ptr<const ExprNode>;

class ExprNode {
public:
  Kind kind;
  Rat num;                 // Num
  std::string name;        // Sym, Fun
  std::vector<Expr> kids;  // Add/Mul operands; Pow {base,exponent}; Exp/Log {arg}; Fun args
  std::vector<int> deriv;  // Fun: per-argument derivative order
  std::size_t hash = 0;
};

// -- construction ------------------------------------------------------------

Expr num(long n);
Expr num(long n, long d);
Expr num(const Rat& q);
Expr sym(const std::string& name);
Expr add(std::vector<Expr> terms);
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr neg(const Expr& a);
Expr mul(std::vector<Expr> factors);
Expr mul(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b, const Expr& c);
Expr div(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr ipow(const Expr& base, long n);
Expr exp_(const Expr& arg);
Expr log_(const Expr& arg);
Expr fun(const std::string& name, std::vector<Expr> args, std::vector<int> deriv = {});

Expr zero();
Expr one();

// -- inspection --------------------------------------------------------------

int compare(const Expr& a, const Expr& b);  // total order; 0 iff structurally equal
bool equal(const Expr& a, const Expr& b);
bool is_zero(const Expr& e);
bool is_one(const Expr& e);
bool is_num(const Expr& e);
bool is_int(const Expr& e);          // Num with denominator 1
long as_long(const Expr& e);         // requires is_int and fits
bool occurs(const Expr& e, const std::string& name);  // symbol or formal-function name
void collect_symbols(const Expr& e, std::set<std::string>& out);
void collect_fun_names(const Expr& e, std::set<std::string>& out);

/// Splits a canonical expression into additive terms (a non-Add expression is
/// a single term).
std::vector<Expr> terms_of(const Expr& e);
/// Splits a canonical term into (rational coefficient, non-numeric factors).
std::pair<Rat, std::vector<Expr>> coeff_factors(const Expr& term);

// -- operations --------------------------------------------------------------

/// Simultaneous substitution of symbols. Throws on a cyclic binding set.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

/// Instantiation template for a formal function: `body` in terms of the
/// placeholder symbol `arg`.
struct FunTemplate {
  std::string arg;
  Expr body;
};

/// Replaces single-argument formal functions by templates: an atom with
/// derivative order d becomes the d-th derivative of the template body
/// evaluated at the atom's argument.
Expr substitute_funs(const Expr& e, const std::map<std::string, FunTemplate>& bindings);

/// Partial derivative with respect to a symbol; all other symbols are held
/// constant. Formal function atoms follow the chain rule with a derivative
/// index increment.
Expr diff(const Expr& e, const std::string& s);

struct ExprCmp {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

}  // namespace kpsym
