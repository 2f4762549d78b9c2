#include "kpsym/pde.hpp"

#include <algorithm>

namespace kpsym {

int jet_order_of(const Space& sp, const Expr& e) {
  std::set<std::string> syms;
  collect_symbols(e, syms);
  int best = 0;
  for (const auto& s : syms) {
    auto j = sp.parse_jet(s);
    if (j) best = std::max(best, j->order());
  }
  return best;
}

PdeSystem::PdeSystem(Space sp, std::vector<Expr> eqs, std::vector<std::string> leading,
                     std::vector<Parameter> params)
    : space_(std::move(sp)),
      eqs_(std::move(eqs)),
      leading_(std::move(leading)),
      params_(std::move(params)) {
  if (eqs_.size() != leading_.size())
    throw Error("domain", "one leading jet variable per equation required");
  for (size_t i = 0; i < eqs_.size(); ++i) {
    auto j = space_.parse_jet(leading_[i]);
    if (!j || j->order() == 0)
      throw Error("domain", "leading variable must be a jet variable: " + leading_[i]);
    std::string canon = space_.jet_name(*j);
    Expr coef = diff(eqs_[i], canon);
    if (is_zero(coef) || occurs(coef, canon))
      throw Error("domain", "leading variable must appear linearly: " + leading_[i]);
    // rhs = -(eq - coef*L)/coef
    Expr rest = substitute(eqs_[i], {{canon, zero()}});
    rhs_.push_back(div(neg(rest), coef));
    ljet_.push_back(*j);
    leading_[i] = canon;
  }
}

int PdeSystem::order(size_t i) const { return jet_order_of(space_, eqs_[i]); }

int PdeSystem::max_order() const {
  int m = 0;
  for (size_t i = 0; i < eqs_.size(); ++i) m = std::max(m, order(i));
  return m;
}

namespace {

// substitution priority: more t-like derivatives first so rewriting descends
int weight(const JetVar& j) {
  int w = 0;
  for (size_t i = 0; i < j.index.size(); ++i) w += j.index[i];
  return w;
}

}  // namespace

Expr PdeSystem::on_shell(const Expr& e) const {
  Expr cur = e;
  for (int round = 0; round < 400; ++round) {
    std::set<std::string> syms;
    collect_symbols(cur, syms);
    std::string pick;
    size_t pick_eq = 0;
    JetVar pick_jet;
    int pick_w = -1;
    for (const auto& s : syms) {
      auto j = space_.parse_jet(s);
      if (!j) continue;
      for (size_t i = 0; i < ljet_.size(); ++i) {
        if (j->field != ljet_[i].field) continue;
        bool covers = true;
        for (size_t c = 0; c < j->index.size(); ++c)
          if (j->index[c] < ljet_[i].index[c]) covers = false;
        if (!covers) continue;
        int w = weight(*j);
        if (w > pick_w) {
          pick_w = w;
          pick = s;
          pick_eq = i;
          pick_jet = *j;
        }
      }
    }
    if (pick_w < 0) return cur;
    std::vector<int> extra = pick_jet.index;
    for (size_t c = 0; c < extra.size(); ++c) extra[c] -= ljet_[pick_eq].index[c];
    Expr value = total_derivative(space_, rhs_[pick_eq], extra);
    cur = substitute(cur, {{pick, value}});
  }
  throw Error("domain", "on-shell substitution did not terminate within order bound");
}

}  // namespace kpsym
