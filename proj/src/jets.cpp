#include "kpsym/jets.hpp"

namespace kpsym {

namespace {

// Jet variables (including order-0 fields) occurring in e.
void collect_jets(const Space& sp, const Expr& e, std::map<std::string, JetVar>& out) {
  std::set<std::string> syms;
  collect_symbols(e, syms);
  for (const auto& s : syms) {
    auto j = sp.parse_jet(s);
    if (j) out.emplace(s, *j);
  }
}

}  // namespace

Expr total_derivative(const Space& sp, const Expr& e, const std::string& coord) {
  int ci = sp.coord_index(coord);
  if (ci < 0) throw Error("domain", "not an independent coordinate: " + coord);
  Expr r = diff(e, coord);
  std::map<std::string, JetVar> jets;
  collect_jets(sp, e, jets);
  for (const auto& [name, j] : jets) {
    Expr pd = diff(e, name);
    if (is_zero(pd)) continue;
    JetVar up = j;
    up.index[ci] += 1;
    if (up.order() > kMaxJetOrder) throw Error("domain", "jet order cap exceeded");
    r = add(r, mul(pd, sp.jet(up)));
  }
  return r;
}

Expr total_derivative(const Space& sp, const Expr& e, const std::vector<int>& index) {
  Expr r = e;
  for (size_t i = 0; i < index.size(); ++i)
    for (int k = 0; k < index[i]; ++k) r = total_derivative(sp, r, sp.coords()[i]);
  return r;
}

VectorField::VectorField(Space sp, std::vector<Expr> xi_, std::vector<Expr> eta_)
    : space(std::move(sp)), xi(std::move(xi_)), eta(std::move(eta_)) {
  if (xi.size() != space.coords().size() || eta.size() != space.fields().size())
    throw Error("domain", "vector field coefficient count mismatch");
  auto point_ok = [&](const Expr& c) {
    std::set<std::string> syms;
    collect_symbols(c, syms);
    for (const auto& s : syms) {
      auto j = space.parse_jet(s);
      if (j && j->order() > 0) return false;
    }
    return true;
  };
  for (const auto& c : xi)
    if (!point_ok(c)) throw Error("domain", "non-point coefficient in vector field");
  for (const auto& c : eta)
    if (!point_ok(c)) throw Error("domain", "non-point coefficient in vector field");
}

Expr VectorField::apply_point(const Expr& e) const {
  std::vector<Expr> parts;
  for (size_t i = 0; i < xi.size(); ++i) {
    Expr d = diff(e, space.coords()[i]);
    if (!is_zero(d)) parts.push_back(mul(xi[i], d));
  }
  for (size_t a = 0; a < eta.size(); ++a) {
    Expr d = diff(e, space.fields()[a]);
    if (!is_zero(d)) parts.push_back(mul(eta[a], d));
  }
  return add(std::move(parts));
}

bool VectorField::is_zero_field() const {
  for (const auto& c : xi)
    if (!is_zero(c)) return false;
  for (const auto& c : eta)
    if (!is_zero(c)) return false;
  return true;
}

VectorField vf_add(const VectorField& a, const VectorField& b) {
  VectorField r = a;
  for (size_t i = 0; i < r.xi.size(); ++i) r.xi[i] = add(r.xi[i], b.xi[i]);
  for (size_t i = 0; i < r.eta.size(); ++i) r.eta[i] = add(r.eta[i], b.eta[i]);
  return r;
}

VectorField vf_scale(const Expr& c, const VectorField& a) {
  VectorField r = a;
  for (auto& e : r.xi) e = mul(c, e);
  for (auto& e : r.eta) e = mul(c, e);
  return r;
}

VectorField commutator(const VectorField& X, const VectorField& Y) {
  std::vector<Expr> xi, eta;
  for (size_t i = 0; i < X.xi.size(); ++i)
    xi.push_back(sub(X.apply_point(Y.xi[i]), Y.apply_point(X.xi[i])));
  for (size_t a = 0; a < X.eta.size(); ++a)
    eta.push_back(sub(X.apply_point(Y.eta[a]), Y.apply_point(X.eta[a])));
  return VectorField(X.space, std::move(xi), std::move(eta));
}

Prolonged::Prolonged(const VectorField& X, int order) : X_(X), order_(order) {
  if (order < 0 || order > kMaxJetOrder) throw Error("domain", "unsupported prolongation order");
  const Space& sp = X.space;
  const size_t nc = sp.coords().size();

  // D_i xi^j, reused across the recursion
  std::vector<std::vector<Expr>> dxi(nc, std::vector<Expr>(nc));
  for (size_t i = 0; i < nc; ++i)
    for (size_t j = 0; j < nc; ++j)
      dxi[i][j] = total_derivative(sp, X.xi[j], sp.coords()[i]);

  for (size_t a = 0; a < sp.fields().size(); ++a) {
    const std::string& fld = sp.fields()[a];
    std::map<std::vector<int>, Expr> level;
    level[std::vector<int>(nc, 0)] = X.eta[a];
    etaJ_[fld] = X.eta[a];
    for (int ord = 0; ord < order; ++ord) {
      std::map<std::vector<int>, Expr> next;
      for (const auto& [J, etaJ] : level) {
        for (size_t i = 0; i < nc; ++i) {
          auto Ji = J;
          Ji[i] += 1;
          if (next.count(Ji)) continue;  // symmetric index reached twice
          Expr v = total_derivative(sp, etaJ, sp.coords()[i]);
          for (size_t j = 0; j < nc; ++j) {
            if (is_zero(dxi[i][j])) continue;
            auto Jj = J;
            Jj[j] += 1;
            v = sub(v, mul(sp.jet(fld, Jj), dxi[i][j]));
          }
          next[Ji] = v;
          etaJ_[sp.jet_name(JetVar{fld, Ji})] = v;
        }
      }
      level = std::move(next);
    }
  }
}

const Expr& Prolonged::eta(const JetVar& j) const {
  auto it = etaJ_.find(X_.space.jet_name(j));
  if (it == etaJ_.end()) throw Error("domain", "insufficient prolongation order");
  return it->second;
}

Expr Prolonged::apply(const Expr& e) const {
  const Space& sp = X_.space;
  std::vector<Expr> parts;
  for (size_t i = 0; i < X_.xi.size(); ++i) {
    Expr d = diff(e, sp.coords()[i]);
    if (!is_zero(d)) parts.push_back(mul(X_.xi[i], d));
  }
  std::map<std::string, JetVar> jets;
  collect_jets(sp, e, jets);
  for (const auto& [name, j] : jets) {
    Expr d = diff(e, name);
    if (is_zero(d)) continue;
    auto it = etaJ_.find(name);
    if (it == etaJ_.end()) throw Error("domain", "insufficient prolongation order for " + name);
    if (!is_zero(it->second)) parts.push_back(mul(it->second, d));
  }
  return add(std::move(parts));
}

}  // namespace kpsym
