#include "kpsym/expr.hpp"

#include <algorithm>
#include <cassert>

namespace kpsym {

namespace {

constexpr long kExpandCap = 16;  // largest integer power of a sum we expand

std::size_t hash_combine(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

std::size_t hash_rat(const Rat& q) {
  std::hash<std::string> hs;
  return hs(q.get_str());
}

std::size_t node_hash(Kind kind, const Rat& num, const std::string& name,
                      const std::vector<Expr>& kids, const std::vector<int>& deriv) {
  std::size_t h = static_cast<std::size_t>(kind) * 0x9e3779b9;
  if (kind == Kind::Num) h = hash_combine(h, hash_rat(num));
  h = hash_combine(h, std::hash<std::string>{}(name));
  for (const auto& k : kids) h = hash_combine(h, k->hash);
  for (int d : deriv) h = hash_combine(h, static_cast<std::size_t>(d) + 1);
  return h;
}

Expr make(Kind kind, Rat num, std::string name, std::vector<Expr> kids,
          std::vector<int> deriv = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->num = std::move(num);
  n->name = std::move(name);
  n->kids = std::move(kids);
  n->deriv = std::move(deriv);
  n->hash = node_hash(n->kind, n->num, n->name, n->kids, n->deriv);
  return n;
}

int kind_rank(Kind k) {
  switch (k) {
    case Kind::Num: return 0;
    case Kind::Sym: return 1;
    case Kind::Fun: return 2;
    case Kind::Exp: return 3;
    case Kind::Log: return 4;
    case Kind::Pow: return 5;
    case Kind::Mul: return 6;
    case Kind::Add: return 7;
  }
  return 8;
}

}  // namespace

Expr zero() {
  static const Expr z = make(Kind::Num, Rat(0), "", {});
  return z;
}

Expr one() {
  static const Expr o = make(Kind::Num, Rat(1), "", {});
  return o;
}

Expr num(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  if (c == 0) return zero();
  if (c == 1) return one();
  return make(Kind::Num, c, "", {});
}

Expr num(long n) { return num(Rat(n)); }

Expr num(long n, long d) {
  if (d == 0) throw Error("domain", "rational with zero denominator");
  return num(Rat(n, d));
}

Expr sym(const std::string& name) {
  if (name.empty()) throw Error("domain", "empty symbol name");
  return make(Kind::Sym, Rat(0), name, {});
}

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case Kind::Num:
      return cmp(a->num, b->num) < 0 ? -1 : (cmp(a->num, b->num) > 0 ? 1 : 0);
    case Kind::Sym:
      return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
    case Kind::Fun: {
      int c = a->name.compare(b->name);
      if (c != 0) return c < 0 ? -1 : 1;
      if (a->deriv != b->deriv) return a->deriv < b->deriv ? -1 : 1;
      break;
    }
    default:
      break;
  }
  size_t n = std::min(a->kids.size(), b->kids.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(a->kids[i], b->kids[i]);
    if (c != 0) return c;
  }
  if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
  return 0;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash) return false;
  return compare(a, b) == 0;
}

bool is_zero(const Expr& e) { return e->kind == Kind::Num && e->num == 0; }
bool is_one(const Expr& e) { return e->kind == Kind::Num && e->num == 1; }
bool is_num(const Expr& e) { return e->kind == Kind::Num; }

bool is_int(const Expr& e) {
  return e->kind == Kind::Num && e->num.get_den() == 1;
}

long as_long(const Expr& e) {
  if (!is_int(e)) throw Error("internal", "as_long on non-integer");
  if (!e->num.get_num().fits_slong_p()) throw Error("internal", "integer too large");
  return e->num.get_num().get_si();
}

std::vector<Expr> terms_of(const Expr& e) {
  if (e->kind == Kind::Add) return e->kids;
  return {e};
}

std::pair<Rat, std::vector<Expr>> coeff_factors(const Expr& term) {
  if (term->kind == Kind::Num) return {term->num, {}};
  if (term->kind == Kind::Mul) {
    Rat c(1);
    std::vector<Expr> fs;
    for (const auto& k : term->kids) {
      if (k->kind == Kind::Num)
        c *= k->num;
      else
        fs.push_back(k);
    }
    return {c, fs};
  }
  return {Rat(1), {term}};
}

namespace {

// Rebuilds coefficient * factors as a canonical term node. The factors must
// already be canonical, sorted and distinct.
Expr build_term(const Rat& c, std::vector<Expr> fs) {
  if (c == 0) return zero();
  if (fs.empty()) return num(c);
  if (c == 1 && fs.size() == 1) return fs[0];
  std::vector<Expr> kids;
  if (c != 1) kids.push_back(num(c));
  for (auto& f : fs) kids.push_back(std::move(f));
  if (kids.size() == 1) return kids[0];
  return make(Kind::Mul, Rat(0), "", std::move(kids));
}

}  // namespace

Expr add(std::vector<Expr> in) {
  // core (product sans numeric coefficient) -> accumulated coefficient
  std::map<Expr, Rat, ExprCmp> acc;
  std::vector<Expr> stack(in.rbegin(), in.rend());
  while (!stack.empty()) {
    Expr t = stack.back();
    stack.pop_back();
    if (t->kind == Kind::Add) {
      for (auto it = t->kids.rbegin(); it != t->kids.rend(); ++it) stack.push_back(*it);
      continue;
    }
    auto [c, fs] = coeff_factors(t);
    if (c == 0) continue;
    Expr core = fs.empty() ? one() : build_term(Rat(1), fs);
    auto it = acc.find(core);
    if (it == acc.end())
      acc.emplace(std::move(core), c);
    else
      it->second += c;
  }
  std::vector<Expr> out;
  out.reserve(acc.size());
  for (auto& [core, c] : acc) {
    if (c == 0) continue;
    if (is_one(core)) {
      out.push_back(num(c));
    } else {
      auto [c2, fs] = coeff_factors(core);
      out.push_back(build_term(c, std::move(fs)));
    }
  }
  if (out.empty()) return zero();
  if (out.size() == 1) return out[0];
  return make(Kind::Add, Rat(0), "", std::move(out));
}

Expr add(const Expr& a, const Expr& b) { return add(std::vector<Expr>{a, b}); }
Expr sub(const Expr& a, const Expr& b) { return add(a, neg(b)); }
Expr neg(const Expr& a) { return mul(num(-1), a); }

namespace {

Rat rat_ipow(const Rat& q, long n) {
  if (n == 0) return Rat(1);
  Rat base = n > 0 ? q : Rat(1) / q;
  long m = n > 0 ? n : -n;
  Rat r(1);
  while (m > 0) {
    if (m & 1) r *= base;
    base *= base;
    m >>= 1;
  }
  return r;
}

struct ProductParts {
  Rat coeff{1};
  std::map<Expr, std::vector<Expr>, ExprCmp> powers;  // base -> exponent terms
  std::vector<Expr> exp_args;                         // accumulated exp() arguments
  std::vector<std::pair<Expr, long>> sums;            // sum factors to distribute
};

std::pair<Rat, Expr> sum_content(const Expr& s);

void absorb(ProductParts& p, const Expr& f);

void absorb_power(ProductParts& p, const Expr& base, const Expr& expo) {
  if (is_zero(expo)) return;
  if (base->kind == Kind::Exp) {
    p.exp_args.push_back(mul(base->kids[0], expo));
    return;
  }
  if (base->kind == Kind::Pow) {
    absorb_power(p, base->kids[0], mul(base->kids[1], expo));
    return;
  }
  if (base->kind == Kind::Mul) {
    for (const auto& k : base->kids) absorb_power(p, k, expo);
    return;
  }
  if (base->kind == Kind::Num) {
    if (base->num == 0) {
      if (is_int(expo) && expo->num < 0) throw Error("domain", "zero to negative power");
      p.coeff = 0;
      return;
    }
    if (is_int(expo)) {
      p.coeff *= rat_ipow(base->num, as_long(expo));
      return;
    }
    if (base->num == 1) return;
  }
  if (base->kind == Kind::Add && is_int(expo)) {
    auto [content, prim] = sum_content(base);
    if (content != 1) p.coeff *= rat_ipow(content, as_long(expo));
    p.powers[prim].push_back(expo);
    return;
  }
  p.powers[base].push_back(expo);
}

void absorb(ProductParts& p, const Expr& f) {
  switch (f->kind) {
    case Kind::Num:
      p.coeff *= f->num;
      return;
    case Kind::Mul:
      for (const auto& k : f->kids) absorb(p, k);
      return;
    case Kind::Pow:
      absorb_power(p, f->kids[0], f->kids[1]);
      return;
    case Kind::Exp:
      p.exp_args.push_back(f->kids[0]);
      return;
    case Kind::Add:
      absorb_power(p, f, one());
      return;
    default:
      p.powers[f].push_back(one());
      return;
  }
}

}  // namespace

Expr mul(std::vector<Expr> in) {
  ProductParts p;
  for (const auto& f : in) {
    absorb(p, f);
    if (p.coeff == 0) return zero();
  }

  std::vector<Expr> factors;
  for (auto& [base, exps] : p.powers) {
    Expr e = add(exps);
    if (is_zero(e)) continue;
    if (base->kind == Kind::Add && is_int(e)) {
      long n = as_long(e);
      if (n > 0) {
        if (n > kExpandCap) throw Error("internal", "sum power exceeds expansion cap");
        p.sums.emplace_back(base, n);
        continue;
      }
    }
    if (is_one(e))
      factors.push_back(base);
    else
      factors.push_back(make(Kind::Pow, Rat(0), "", {base, e}));
  }
  if (!p.exp_args.empty()) {
    Expr a = add(p.exp_args);
    Expr ex = exp_(a);
    if (!is_one(ex)) {
      // exp_() may have folded log terms into powers; re-absorb if non-atomic
      if (ex->kind == Kind::Exp)
        factors.push_back(ex);
      else
        p.sums.emplace_back(ex, 1);  // handled below via distribution path
    }
  }

  if (p.sums.empty()) {
    std::sort(factors.begin(), factors.end(),
              [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    return build_term(p.coeff, std::move(factors));
  }

  // Distribute sum factors: the product becomes a sum of simple products.
  std::vector<Expr> partials{build_term(p.coeff, factors)};
  for (auto& [s, n] : p.sums) {
    std::vector<Expr> sterms = terms_of(s);
    for (long rep = 0; rep < n; ++rep) {
      std::vector<Expr> next;
      next.reserve(partials.size() * sterms.size());
      for (const auto& part : partials)
        for (const auto& st : sterms) next.push_back(mul(part, st));
      Expr folded = add(std::move(next));
      partials = terms_of(folded);
    }
  }
  return add(std::move(partials));
}

Expr mul(const Expr& a, const Expr& b) { return mul(std::vector<Expr>{a, b}); }
Expr mul(const Expr& a, const Expr& b, const Expr& c) {
  return mul(std::vector<Expr>{a, b, c});
}

Expr div(const Expr& a, const Expr& b) {
  if (is_zero(b)) throw Error("domain", "division by zero");
  return mul(a, pow(b, num(-1)));
}

namespace {

// Extracts the rational content (including sign of the leading term) of a
// canonical sum, so that (2*x + 2*y)^-1 and (x + y)^-1 share a base shape.
std::pair<Rat, Expr> sum_content(const Expr& s) {
  assert(s->kind == Kind::Add);
  Rat g(0);
  for (const auto& t : s->kids) {
    auto [c, fs] = coeff_factors(t);
    Rat a = abs(c);
    if (g == 0)
      g = a;
    else {
      // gcd of rationals: gcd(num)/lcm(den)
      mpz_class gn, gl;
      mpz_gcd(gn.get_mpz_t(), g.get_num().get_mpz_t(), a.get_num().get_mpz_t());
      mpz_lcm(gl.get_mpz_t(), g.get_den().get_mpz_t(), a.get_den().get_mpz_t());
      g = Rat(gn, gl);
      g.canonicalize();
    }
  }
  if (g == 0) return {Rat(1), s};
  auto [c0, fs0] = coeff_factors(s->kids.front());
  if (c0 < 0) g = -g;
  if (g == 1) return {Rat(1), s};
  std::vector<Expr> scaled;
  scaled.reserve(s->kids.size());
  Expr inv = num(Rat(1) / g);
  for (const auto& t : s->kids) scaled.push_back(mul(inv, t));
  return {g, add(scaled)};
}

}  // namespace

Expr pow(const Expr& base, const Expr& exponent) {
  if (is_zero(exponent)) return one();
  if (is_one(exponent)) return base;
  if (base->kind == Kind::Num) {
    if (is_int(exponent)) {
      if (base->num == 0) {
        if (exponent->num < 0) throw Error("domain", "zero to negative power");
        return zero();
      }
      return num(rat_ipow(base->num, as_long(exponent)));
    }
    if (base->num == 1) return one();
    if (base->num == 0) return zero();
    return make(Kind::Pow, Rat(0), "", {base, exponent});
  }
  if (base->kind == Kind::Exp) return exp_(mul(base->kids[0], exponent));
  if (base->kind == Kind::Pow) return pow(base->kids[0], mul(base->kids[1], exponent));
  if (base->kind == Kind::Mul) {
    std::vector<Expr> fs;
    fs.reserve(base->kids.size());
    for (const auto& k : base->kids) fs.push_back(pow(k, exponent));
    return mul(std::move(fs));
  }
  if (base->kind == Kind::Add) {
    if (is_int(exponent)) {
      long n = as_long(exponent);
      if (n > 0) {
        if (n > kExpandCap) throw Error("internal", "sum power exceeds expansion cap");
        Expr r = one();
        for (long i = 0; i < n; ++i) r = mul(r, base);
        return r;
      }
      auto [content, prim] = sum_content(base);
      Expr atom = make(Kind::Pow, Rat(0), "", {prim, exponent});
      if (content == 1) return atom;
      return mul(num(rat_ipow(content, n)), atom);
    }
    return make(Kind::Pow, Rat(0), "", {base, exponent});
  }
  return make(Kind::Pow, Rat(0), "", {base, exponent});
}

Expr ipow(const Expr& base, long n) { return pow(base, num(n)); }

Expr exp_(const Expr& arg) {
  if (is_zero(arg)) return one();
  // fold exp(c*log(b) + rest) -> b^c * exp(rest)
  std::vector<Expr> rest;
  std::vector<Expr> powers;
  for (const auto& t : terms_of(arg)) {
    auto [c, fs] = coeff_factors(t);
    const Expr* logf = nullptr;
    for (const auto& f : fs)
      if (f->kind == Kind::Log) {
        logf = &f;
        break;
      }
    if (logf) {
      std::vector<Expr> others;
      for (const auto& f : fs)
        if (f.get() != logf->get()) others.push_back(f);
      powers.push_back(pow((*logf)->kids[0], build_term(c, std::move(others))));
    } else {
      rest.push_back(t);
    }
  }
  if (powers.empty()) return make(Kind::Exp, Rat(0), "", {arg});
  Expr r = add(rest);
  if (!is_zero(r)) powers.push_back(make(Kind::Exp, Rat(0), "", {r}));
  return mul(std::move(powers));
}

Expr log_(const Expr& arg) {
  if (is_one(arg)) return zero();
  if (is_zero(arg)) throw Error("domain", "log of zero");
  return make(Kind::Log, Rat(0), "", {arg});
}

Expr fun(const std::string& name, std::vector<Expr> args, std::vector<int> deriv) {
  if (args.empty()) throw Error("domain", "formal function needs arguments");
  if (deriv.empty()) deriv.assign(args.size(), 0);
  if (deriv.size() != args.size())
    throw Error("domain", "derivative index size mismatch for " + name);
  for (int d : deriv)
    if (d < 0) throw Error("domain", "negative derivative order");
  return make(Kind::Fun, Rat(0), name, std::move(args), std::move(deriv));
}

bool occurs(const Expr& e, const std::string& name) {
  if ((e->kind == Kind::Sym || e->kind == Kind::Fun) && e->name == name) return true;
  for (const auto& k : e->kids)
    if (occurs(k, name)) return true;
  return false;
}

void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e->kind == Kind::Sym) out.insert(e->name);
  for (const auto& k : e->kids) collect_symbols(k, out);
}

void collect_fun_names(const Expr& e, std::set<std::string>& out) {
  if (e->kind == Kind::Fun) out.insert(e->name);
  for (const auto& k : e->kids) collect_fun_names(k, out);
}

namespace {

Expr rebuild(const Expr& e, const std::map<std::string, Expr>& bindings) {
  switch (e->kind) {
    case Kind::Num:
      return e;
    case Kind::Sym: {
      auto it = bindings.find(e->name);
      return it == bindings.end() ? e : it->second;
    }
    default: {
      std::vector<Expr> kids;
      kids.reserve(e->kids.size());
      bool changed = false;
      for (const auto& k : e->kids) {
        kids.push_back(rebuild(k, bindings));
        changed = changed || kids.back().get() != k.get();
      }
      if (!changed) return e;
      switch (e->kind) {
        case Kind::Add: return add(std::move(kids));
        case Kind::Mul: return mul(std::move(kids));
        case Kind::Pow: return pow(kids[0], kids[1]);
        case Kind::Exp: return exp_(kids[0]);
        case Kind::Log: return log_(kids[0]);
        case Kind::Fun: return fun(e->name, std::move(kids), e->deriv);
        default: throw Error("internal", "rebuild: unexpected node");
      }
    }
  }
}

}  // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  if (bindings.empty()) return e;
  // reject cyclic binding sets (u -> v, v -> u+1, ...)
  for (const auto& [k, v] : bindings) {
    std::vector<const Expr*> todo{&v};
    std::set<std::string> reach;
    while (!todo.empty()) {
      const Expr* cur = todo.back();
      todo.pop_back();
      std::set<std::string> syms;
      collect_symbols(*cur, syms);
      for (const auto& s : syms) {
        if (s == k) throw Error("domain", "cyclic substitution through " + k);
        auto it = bindings.find(s);
        if (it != bindings.end() && reach.insert(s).second) todo.push_back(&it->second);
      }
    }
  }
  return rebuild(e, bindings);
}

Expr substitute_funs(const Expr& e, const std::map<std::string, FunTemplate>& bindings) {
  switch (e->kind) {
    case Kind::Num:
    case Kind::Sym:
      return e;
    case Kind::Fun: {
      std::vector<Expr> args;
      args.reserve(e->kids.size());
      for (const auto& a : e->kids) args.push_back(substitute_funs(a, bindings));
      auto it = bindings.find(e->name);
      if (it == bindings.end()) return fun(e->name, std::move(args), e->deriv);
      if (args.size() != 1)
        throw Error("domain", "instantiation of multi-argument function " + e->name);
      Expr body = it->second.body;
      for (int d = 0; d < e->deriv[0]; ++d) body = diff(body, it->second.arg);
      return substitute(body, {{it->second.arg, args[0]}});
    }
    default: {
      std::vector<Expr> kids;
      kids.reserve(e->kids.size());
      for (const auto& k : e->kids) kids.push_back(substitute_funs(k, bindings));
      switch (e->kind) {
        case Kind::Add: return add(std::move(kids));
        case Kind::Mul: return mul(std::move(kids));
        case Kind::Pow: return pow(kids[0], kids[1]);
        case Kind::Exp: return exp_(kids[0]);
        case Kind::Log: return log_(kids[0]);
        default: throw Error("internal", "substitute_funs: unexpected node");
      }
    }
  }
}

Expr diff(const Expr& e, const std::string& s) {
  switch (e->kind) {
    case Kind::Num:
      return zero();
    case Kind::Sym:
      return e->name == s ? one() : zero();
    case Kind::Add: {
      std::vector<Expr> ds;
      ds.reserve(e->kids.size());
      for (const auto& k : e->kids) ds.push_back(diff(k, s));
      return add(std::move(ds));
    }
    case Kind::Mul: {
      std::vector<Expr> terms;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        Expr dk = diff(e->kids[i], s);
        if (is_zero(dk)) continue;
        std::vector<Expr> fs;
        fs.reserve(e->kids.size());
        for (size_t j = 0; j < e->kids.size(); ++j) fs.push_back(j == i ? dk : e->kids[j]);
        terms.push_back(mul(std::move(fs)));
      }
      return add(std::move(terms));
    }
    case Kind::Pow: {
      const Expr& b = e->kids[0];
      const Expr& n = e->kids[1];
      Expr db = diff(b, s);
      Expr r = zero();
      if (!is_zero(db)) r = mul(n, pow(b, sub(n, one())), db);
      if (occurs(n, s)) {
        Expr dn = diff(n, s);
        if (!is_zero(dn)) r = add(r, mul(e, log_(b), dn));
      }
      return r;
    }
    case Kind::Exp:
      return mul(e, diff(e->kids[0], s));
    case Kind::Log:
      return div(diff(e->kids[0], s), e->kids[0]);
    case Kind::Fun: {
      std::vector<Expr> terms;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        Expr da = diff(e->kids[i], s);
        if (is_zero(da)) continue;
        auto dv = e->deriv;
        dv[i] += 1;
        terms.push_back(mul(fun(e->name, e->kids, dv), da));
      }
      return add(std::move(terms));
    }
  }
  throw Error("internal", "diff: unexpected node");
}

}  // namespace kpsym
