#include "kpsym/symcheck.hpp"

#include "kpsym/printer.hpp"

#include <algorithm>

namespace kpsym {

std::vector<Expr> symmetry_residual(const PdeSystem& sys, const VectorField& X) {
  std::vector<Expr> out;
  Prolonged p(X, sys.max_order());
  for (const auto& eq : sys.equations()) out.push_back(sys.on_shell(p.apply(eq)));
  return out;
}

bool is_symmetry(const PdeSystem& sys, const VectorField& X) {
  for (const auto& r : symmetry_residual(sys, X))
    if (!is_zero(r)) return false;
  return true;
}

namespace {

// monomials in vars of total degree <= degree, deterministic order
void monomials_rec(const std::vector<std::string>& vars, size_t i, int left, Expr cur,
                   std::vector<Expr>& out) {
  if (i == vars.size()) {
    out.push_back(cur);
    return;
  }
  for (int d = 0; d <= left; ++d)
    monomials_rec(vars, i + 1, left - d, mul(cur, ipow(sym(vars[i]), d)), out);
}

std::vector<Expr> ansatz_monomials(const Space& sp, int degree) {
  std::vector<std::string> vars = sp.coords();
  for (const auto& f : sp.fields()) vars.push_back(f);
  std::vector<Expr> out;
  monomials_rec(vars, 0, degree, one(), out);
  std::sort(out.begin(), out.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  return out;
}

bool is_variable_symbol(const Space& sp, const std::string& s) {
  return sp.coord_index(s) >= 0 || sp.parse_jet(s).has_value();
}

// true if the factor carries any dependence on coordinates, fields or jets
bool is_variable_factor(const Space& sp, const Expr& f) {
  std::set<std::string> syms;
  collect_symbols(f, syms);
  for (const auto& s : syms)
    if (is_variable_symbol(sp, s)) return true;
  std::set<std::string> funs;
  collect_fun_names(f, funs);
  return !funs.empty();
}

}  // namespace

VectorField DeterminingSystem::field_from(const Space& sp, const std::vector<Expr>& coeffs) const {
  if (coeffs.size() != unknowns.size()) throw Error("domain", "coefficient count mismatch");
  size_t nslots = sp.coords().size() + sp.fields().size();
  size_t per = unknowns.size() / nslots;
  std::vector<Expr> slot(nslots, zero());
  for (size_t i = 0; i < coeffs.size(); ++i) {
    size_t s = i / per;
    slot[s] = add(slot[s], mul(coeffs[i], ansatz_monomials[i]));
  }
  std::vector<Expr> xi(slot.begin(), slot.begin() + sp.coords().size());
  std::vector<Expr> eta(slot.begin() + sp.coords().size(), slot.end());
  return VectorField(sp, std::move(xi), std::move(eta));
}

DeterminingSystem determining_equations(const PdeSystem& sys, int degree) {
  const Space& sp = sys.space();
  DeterminingSystem ds;
  std::vector<Expr> monos = ansatz_monomials(sp, degree);

  for (const auto& c : sp.coords()) ds.targets.push_back("xi_" + c);
  for (const auto& f : sp.fields()) ds.targets.push_back("eta_" + f);

  std::vector<Expr> xi, eta;
  size_t idx = 0;
  for (size_t s = 0; s < ds.targets.size(); ++s) {
    Expr coeff = zero();
    for (const auto& m : monos) {
      std::string name = "c" + std::to_string(idx++);
      ds.unknowns.push_back(name);
      ds.ansatz_monomials.push_back(m);
      coeff = add(coeff, mul(sym(name), m));
    }
    if (s < sp.coords().size())
      xi.push_back(coeff);
    else
      eta.push_back(coeff);
  }
  VectorField X(sp, std::move(xi), std::move(eta));

  std::set<std::string> unknown_set(ds.unknowns.begin(), ds.unknowns.end());
  // row key: (equation index, residual monomial) -> (unknown -> coefficient)
  std::map<std::pair<size_t, Expr>, std::map<size_t, Expr>,
           decltype([](const auto& a, const auto& b) {
             if (a.first != b.first) return a.first < b.first;
             return compare(a.second, b.second) < 0;
           })>
      rows;
  std::map<std::string, size_t> unknown_index;
  for (size_t i = 0; i < ds.unknowns.size(); ++i) unknown_index[ds.unknowns[i]] = i;

  auto residuals = symmetry_residual(sys, X);
  for (size_t ei = 0; ei < residuals.size(); ++ei) {
    const Expr& r = residuals[ei];
    for (const auto& term : terms_of(r)) {
      auto [c, fs] = coeff_factors(term);
      Expr key = one();
      Expr coef = num(c);
      int which = -1;
      for (const auto& f : fs) {
        if (f->kind == Kind::Sym && unknown_set.count(f->name)) {
          if (which >= 0) throw Error("internal", "residual not linear in ansatz coefficients");
          which = static_cast<int>(unknown_index[f->name]);
          continue;
        }
        if (is_variable_factor(sp, f))
          key = mul(key, f);
        else
          coef = mul(coef, f);
      }
      if (which < 0) throw Error("internal", "residual term free of ansatz coefficients");
      auto& row = rows[{ei, key}];
      auto it = row.find(which);
      if (it == row.end())
        row.emplace(which, coef);
      else
        it->second = add(it->second, coef);
    }
  }

  ds.matrix = ExprMatrix(rows.size(), ds.unknowns.size());
  size_t r = 0;
  for (auto& [key, row] : rows) {
    ds.keys.push_back(key.second);
    for (auto& [j, v] : row) ds.matrix.at(r, j) = v;
    ++r;
  }
  return ds;
}

namespace {

// deterministic presentation order: geometric fields (nonzero xi) before pure
// field shifts, then by printed form
bool field_less(const VectorField& a, const VectorField& b) {
  auto rank = [](const VectorField& v) {
    int r = 0;
    for (const auto& e : v.xi)
      if (!is_zero(e)) return 0;
    (void)r;
    return 1;
  };
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  std::string sa, sb;
  for (const auto& e : a.xi) sa += to_string(e) + ";";
  for (const auto& e : a.eta) sa += to_string(e) + ";";
  for (const auto& e : b.xi) sb += to_string(e) + ";";
  for (const auto& e : b.eta) sb += to_string(e) + ";";
  return sa < sb;
}

}  // namespace

SolveResult solve_determining(const PdeSystem& sys, const DeterminingSystem& ds) {
  SolveResult out;
  auto basis_vecs = null_space(ds.matrix, &out.conditions);
  for (const auto& v : basis_vecs) out.basis.push_back(ds.field_from(sys.space(), v));
  std::sort(out.basis.begin(), out.basis.end(), field_less);
  return out;
}

std::string branch_name(Branch b) {
  switch (b) {
    case Branch::Generic: return "generic";
    case Branch::PowerLaw: return "power_law";
    case Branch::Exponential: return "exponential";
  }
  return "?";
}

PdeSystem instantiate_branch(const PdeSystem& sys, Branch b) {
  if (b == Branch::Generic) return sys;
  FunTemplate tpl;
  if (b == Branch::PowerLaw)
    tpl = FunTemplate{"zz", add(pow(sym("zz"), sym("k")), sym("f0"))};
  else
    tpl = FunTemplate{"zz", add(exp_(mul(sym("sigma"), sym("zz"))), sym("f0"))};
  std::vector<Expr> eqs;
  for (const auto& e : sys.equations()) eqs.push_back(substitute_funs(e, {{"f", tpl}}));
  auto params = sys.parameters();
  params.push_back({b == Branch::PowerLaw ? "k" : "sigma", true});
  return PdeSystem(sys.space(), std::move(eqs), sys.leading(), std::move(params));
}

bool in_span(const std::vector<VectorField>& basis, const VectorField& X) {
  if (basis.empty()) return X.is_zero_field();
  const Space& sp = X.space;
  // coefficient slots stacked; rows = var-monomials occurring anywhere
  auto slots = [&](const VectorField& v) {
    std::vector<Expr> s = v.xi;
    s.insert(s.end(), v.eta.begin(), v.eta.end());
    return s;
  };
  std::map<std::pair<size_t, std::string>, std::map<size_t, Expr>> rows;
  auto scan = [&](const VectorField& v, size_t col, bool rhs) {
    auto ss = slots(v);
    for (size_t s = 0; s < ss.size(); ++s) {
      for (const auto& term : terms_of(ss[s])) {
        if (is_zero(term)) continue;
        auto [c, fs] = coeff_factors(term);
        Expr key = one();
        Expr coef = num(c);
        for (const auto& f : fs) {
          if (is_variable_factor(sp, f))
            key = mul(key, f);
          else
            coef = mul(coef, f);
        }
        auto& row = rows[{s, to_string(key)}];
        size_t j = rhs ? basis.size() : col;
        auto it = row.find(j);
        if (it == row.end())
          row.emplace(j, coef);
        else
          it->second = add(it->second, coef);
      }
    }
  };
  for (size_t b = 0; b < basis.size(); ++b) scan(basis[b], b, false);
  scan(X, 0, true);

  ExprMatrix A(rows.size(), basis.size());
  std::vector<Expr> rhsv(rows.size(), zero());
  size_t r = 0;
  for (auto& [key, row] : rows) {
    for (auto& [j, v] : row) {
      if (j == basis.size())
        rhsv[r] = v;
      else
        A.at(r, j) = v;
    }
    ++r;
  }
  // consistent iff rank doesn't grow with the rhs column appended
  Echelon e1 = row_echelon(A);
  ExprMatrix aug(rows.size(), basis.size() + 1);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < basis.size(); ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, basis.size()) = rhsv[i];
  }
  Echelon e2 = row_echelon(std::move(aug));
  return e1.pivot_cols.size() == e2.pivot_cols.size();
}

std::vector<BranchReport> classify_branches(
    const PdeSystem& sys_template, int degree,
    const std::vector<std::pair<std::string, VectorField>>& known_extras) {
  std::vector<BranchReport> out;
  for (Branch b : {Branch::Generic, Branch::PowerLaw, Branch::Exponential}) {
    BranchReport rep;
    rep.branch = b;
    PdeSystem sys = instantiate_branch(sys_template, b);
    DeterminingSystem ds = determining_equations(sys, degree);
    rep.solved = solve_determining(sys, ds);
    rep.dimension = static_cast<int>(rep.solved.basis.size());
    for (const auto& [name, X] : known_extras)
      if (is_symmetry(sys, X) && in_span(rep.solved.basis, X))
        rep.extra_generators.push_back(name);
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace kpsym
