#include "kpsym/linalg.hpp"

#include <algorithm>
#include <map>

namespace kpsym {

namespace {

using Monomial = std::map<Expr, long, ExprCmp>;  // atom -> positive exponent

struct Poly {
  // term list with graded-lex comparable monomials
  std::vector<std::pair<Rat, Monomial>> terms;
};

long total_degree(const Monomial& m) {
  long d = 0;
  for (const auto& [a, e] : m) d += e;
  return d;
}

// graded lex; returns <0, 0, >0
int mono_cmp(const Monomial& x, const Monomial& y) {
  long dx = total_degree(x), dy = total_degree(y);
  if (dx != dy) return dx < dy ? -1 : 1;
  auto ix = x.begin(), iy = y.begin();
  while (ix != x.end() && iy != y.end()) {
    int c = compare(ix->first, iy->first);
    if (c != 0) return c;  // smaller atom first => lex on sorted maps
    if (ix->second != iy->second) return ix->second < iy->second ? -1 : 1;
    ++ix;
    ++iy;
  }
  if (ix != x.end()) return 1;
  if (iy != y.end()) return -1;
  return 0;
}

std::optional<Poly> to_poly(const Expr& e) {
  Poly p;
  if (is_zero(e)) return p;
  for (const auto& t : terms_of(e)) {
    auto [c, fs] = coeff_factors(t);
    Monomial m;
    for (const auto& f : fs) {
      if (f->kind == Kind::Pow && is_int(f->kids[1])) {
        long n = as_long(f->kids[1]);
        if (n < 0) return std::nullopt;
        m[f->kids[0]] += n;
      } else {
        m[f] += 1;
      }
    }
    p.terms.emplace_back(c, std::move(m));
  }
  std::sort(p.terms.begin(), p.terms.end(),
            [](const auto& a, const auto& b) { return mono_cmp(a.second, b.second) > 0; });
  return p;
}

Expr from_monomial(const Rat& c, const Monomial& m) {
  std::vector<Expr> fs;
  fs.push_back(num(c));
  for (const auto& [a, e] : m) fs.push_back(ipow(a, e));
  return mul(std::move(fs));
}

Expr poly_expr(const Poly& p) {
  std::vector<Expr> ts;
  ts.reserve(p.terms.size());
  for (const auto& [c, m] : p.terms) ts.push_back(from_monomial(c, m));
  return add(std::move(ts));
}

std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
  Monomial q = a;
  for (const auto& [atom, e] : b) {
    auto it = q.find(atom);
    if (it == q.end() || it->second < e) return std::nullopt;
    it->second -= e;
    if (it->second == 0) q.erase(it);
  }
  return q;
}

}  // namespace

std::optional<Expr> try_divide(const Expr& a, const Expr& b) {
  if (is_zero(b)) return std::nullopt;
  if (is_zero(a)) return zero();
  if (is_num(b)) return mul(a, num(Rat(1) / b->num));
  auto pa = to_poly(a), pb = to_poly(b);
  if (!pa || !pb) return std::nullopt;
  std::vector<Expr> quotient;
  const auto& lead_b = pb->terms.front();
  int guard = 0;
  while (!pa->terms.empty()) {
    if (++guard > 10000) return std::nullopt;
    const auto& lead_a = pa->terms.front();
    auto qm = mono_div(lead_a.second, lead_b.second);
    if (!qm) return std::nullopt;
    Rat qc = lead_a.first / lead_b.first;
    Expr qt = from_monomial(qc, *qm);
    quotient.push_back(qt);
    Expr rest = sub(poly_expr(*pa), mul(qt, poly_expr(*pb)));
    pa = to_poly(rest);
    if (!pa) return std::nullopt;
  }
  return add(std::move(quotient));
}

Expr primitive_part(const Expr& e) {
  if (is_zero(e)) return e;
  Rat g(0);
  bool lead_neg = false;
  bool first = true;
  for (const auto& t : terms_of(e)) {
    auto [c, fs] = coeff_factors(t);
    if (first) {
      lead_neg = c < 0;
      first = false;
    }
    Rat a = abs(c);
    if (g == 0)
      g = a;
    else {
      mpz_class gn, gl;
      mpz_gcd(gn.get_mpz_t(), g.get_num().get_mpz_t(), a.get_num().get_mpz_t());
      mpz_lcm(gl.get_mpz_t(), g.get_den().get_mpz_t(), a.get_den().get_mpz_t());
      g = Rat(gn, gl);
      g.canonicalize();
    }
  }
  if (g == 0) return e;
  if (lead_neg) g = -g;
  if (g == 1) return e;
  return mul(num(Rat(1) / g), e);
}

Echelon row_echelon(ExprMatrix m) {
  Echelon out;
  size_t r = 0;
  Expr prev = one();
  for (size_t c = 0; c < m.cols && r < m.rows; ++c) {
    // pivot choice: plain rationals first, then lowest term count
    size_t best = m.rows;
    size_t best_score = SIZE_MAX;
    for (size_t i = r; i < m.rows; ++i) {
      const Expr& e = m.at(i, c);
      if (is_zero(e)) continue;
      size_t score = is_num(e) ? 0 : 100 + terms_of(e).size();
      if (score < best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best == m.rows) continue;
    if (best != r)
      for (size_t j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(best, j));
    const Expr pivot = m.at(r, c);
    if (!is_num(pivot)) out.conditions.push_back(primitive_part(pivot));
    for (size_t i = r + 1; i < m.rows; ++i) {
      if (is_zero(m.at(i, c))) {
        // still rescale untouched rows for Bareiss consistency
        for (size_t j = c + 1; j < m.cols; ++j) {
          if (is_zero(m.at(i, j))) continue;
          Expr v = mul(pivot, m.at(i, j));
          auto q = try_divide(v, prev);
          if (!q) throw Error("internal", "fraction-free elimination: inexact division");
          m.at(i, j) = *q;
        }
        continue;
      }
      for (size_t j = c + 1; j < m.cols; ++j) {
        Expr v = sub(mul(pivot, m.at(i, j)), mul(m.at(i, c), m.at(r, j)));
        if (is_zero(v)) {
          m.at(i, j) = zero();
          continue;
        }
        auto q = try_divide(v, prev);
        if (!q) throw Error("internal", "fraction-free elimination: inexact division");
        m.at(i, j) = *q;
      }
      m.at(i, c) = zero();
    }
    out.pivot_cols.push_back(c);
    prev = pivot;
    ++r;
  }
  out.m = std::move(m);
  return out;
}

std::vector<std::vector<Expr>> null_space(const ExprMatrix& m, std::vector<Expr>* conditions) {
  Echelon ech = row_echelon(m);
  if (conditions) *conditions = ech.conditions;
  const size_t rank = ech.pivot_cols.size();
  std::vector<bool> is_pivot(m.cols, false);
  for (size_t c : ech.pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<Expr>> basis;
  for (size_t f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Expr> x(m.cols, zero());
    x[f] = one();
    // back-substitute, keeping entries polynomial by rescaling the vector by
    // each pivot before solving its row
    for (size_t k = rank; k-- > 0;) {
      size_t pc = ech.pivot_cols[k];
      Expr acc = zero();
      for (size_t j = pc + 1; j < m.cols; ++j) {
        if (is_zero(ech.m.at(k, j)) || is_zero(x[j])) continue;
        acc = add(acc, mul(ech.m.at(k, j), x[j]));
      }
      const Expr& piv = ech.m.at(k, pc);
      if (is_zero(acc)) {
        x[pc] = zero();
        continue;
      }
      for (size_t j = 0; j < m.cols; ++j)
        if (j != pc && !is_zero(x[j])) x[j] = mul(piv, x[j]);
      x[pc] = neg(acc);
    }
    // strip the common monomial factor of all entries (e.g. eps*k)
    {
      bool have = false;
      Monomial common;
      for (const auto& e : x) {
        if (is_zero(e)) continue;
        auto p = to_poly(e);
        if (!p) {
          have = false;
          break;
        }
        for (const auto& [c, m] : p->terms) {
          if (!have) {
            common = m;
            have = true;
          } else {
            for (auto it = common.begin(); it != common.end();) {
              auto jt = m.find(it->first);
              if (jt == m.end()) {
                it = common.erase(it);
              } else {
                it->second = std::min(it->second, jt->second);
                ++it;
              }
            }
          }
        }
        if (common.empty()) break;
      }
      if (have && !common.empty()) {
        Expr divisor = from_monomial(Rat(1), common);
        for (auto& e : x) {
          if (is_zero(e)) continue;
          auto q = try_divide(e, divisor);
          if (q) e = *q;
        }
      }
    }
    // content normalization; prefer unit leading entry when exact
    Expr lead;
    for (const auto& e : x)
      if (!is_zero(e)) {
        lead = e;
        break;
      }
    if (lead) {
      bool all_div = true;
      std::vector<Expr> scaled(x.size());
      for (size_t j = 0; j < x.size(); ++j) {
        if (is_zero(x[j])) {
          scaled[j] = zero();
          continue;
        }
        auto q = try_divide(x[j], lead);
        if (!q) {
          all_div = false;
          break;
        }
        scaled[j] = *q;
      }
      if (all_div)
        x = std::move(scaled);
      else {
        // fall back to rational-content normalization across the vector
        Rat content(0);
        bool lead_neg = false;
        bool first = true;
        for (const auto& e : x) {
          for (const auto& t : terms_of(e)) {
            auto [c, fs] = coeff_factors(t);
            if (first) {
              lead_neg = c < 0;
              first = false;
            }
            Rat a = abs(c);
            if (content == 0)
              content = a;
            else {
              mpz_class gn, gl;
              mpz_gcd(gn.get_mpz_t(), content.get_num().get_mpz_t(), a.get_num().get_mpz_t());
              mpz_lcm(gl.get_mpz_t(), content.get_den().get_mpz_t(), a.get_den().get_mpz_t());
              content = Rat(gn, gl);
              content.canonicalize();
            }
          }
        }
        if (content != 0) {
          if (lead_neg) content = -content;
          Expr inv = num(Rat(1) / content);
          for (auto& e : x) e = mul(inv, e);
        }
      }
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<std::vector<Expr>> solve_unique(const ExprMatrix& A, const std::vector<Expr>& b) {
  if (b.size() != A.rows) throw Error("domain", "rhs size mismatch");
  ExprMatrix aug(A.rows, A.cols + 1);
  for (size_t i = 0; i < A.rows; ++i) {
    for (size_t j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols) = b[i];
  }
  Echelon ech = row_echelon(std::move(aug));
  // consistency: no pivot in the rhs column
  for (size_t c : ech.pivot_cols)
    if (c == A.cols) return std::nullopt;
  size_t rank = ech.pivot_cols.size();
  if (rank < A.cols) throw Error("domain", "underdetermined system in solve_unique");
  std::vector<Expr> x(A.cols, zero());
  for (size_t k = rank; k-- > 0;) {
    size_t pc = ech.pivot_cols[k];
    Expr acc = ech.m.at(k, A.cols);
    for (size_t j = pc + 1; j < A.cols; ++j)
      if (!is_zero(ech.m.at(k, j)) && !is_zero(x[j]))
        acc = sub(acc, mul(ech.m.at(k, j), x[j]));
    const Expr& piv = ech.m.at(k, pc);
    auto q = try_divide(acc, piv);
    x[pc] = q ? *q : div(acc, piv);
  }
  return x;
}

}  // namespace kpsym
