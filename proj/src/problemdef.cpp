#include "kpsym/problemdef.hpp"

#include "kpsym/printer.hpp"

#include <fstream>
#include <sstream>

namespace kpsym {

const NamedGenerator* ProblemConfig::find(const std::string& gen_name) const {
  for (const auto& g : generators)
    if (g.name == gen_name) return &g;
  return nullptr;
}

namespace {

SymbolTable make_table(const Space& sp, const std::vector<Parameter>& params,
                       std::set<std::string> funs) {
  SymbolTable t;
  t.space = &sp;
  for (const auto& p : params) t.symbols.insert(p.name);
  // group/class parameters usable in generator and table expressions
  t.symbols.insert({"s", "gamma", "delta", "x0", "c1", "E"});
  t.functions = std::move(funs);
  return t;
}

VectorField parse_generator(const ProblemConfig& cfg, const std::string& text) {
  SymbolTable t = cfg.table;
  std::vector<std::string> slots;
  for (const auto& c : cfg.space.coords()) slots.push_back(c);
  for (const auto& f : cfg.space.fields()) slots.push_back(f);
  for (const auto& s : slots) t.symbols.insert("D" + s);
  Expr e = parse(text, t);
  std::map<std::string, Expr> zeros;
  for (const auto& s : slots) zeros["D" + s] = zero();
  if (!is_zero(substitute(e, zeros)))
    throw Error("parse", "generator must be a combination of D<coordinate> terms");
  std::vector<Expr> xi, eta;
  for (const auto& s : slots) {
    Expr coef = diff(e, "D" + s);
    for (const auto& s2 : slots)
      if (occurs(coef, "D" + s2))
        throw Error("parse", "generator must be linear in D<coordinate> symbols");
    if ((size_t)xi.size() < cfg.space.coords().size())
      xi.push_back(coef);
    else
      eta.push_back(coef);
  }
  return VectorField(cfg.space, std::move(xi), std::move(eta));
}

std::string print_generator(const ProblemConfig& cfg, const VectorField& X) {
  std::vector<std::pair<std::string, Expr>> parts;
  for (size_t i = 0; i < cfg.space.coords().size(); ++i)
    parts.emplace_back("D" + cfg.space.coords()[i], X.xi[i]);
  for (size_t a = 0; a < cfg.space.fields().size(); ++a)
    parts.emplace_back("D" + cfg.space.fields()[a], X.eta[a]);
  Expr acc = zero();
  for (auto& [d, c] : parts) acc = add(acc, mul(c, sym(d)));
  return to_string(acc);
}

struct BuiltinSpec {
  std::string name;
  std::string description;
  Branch branch;
  int finite_dim;
  int affine_dim;
  std::string label;
};

const std::vector<BuiltinSpec>& builtin_specs() {
  static const std::vector<BuiltinSpec> specs = {
      {"kp21", "2+1 generalized KP system, arbitrary f(u)", Branch::Generic, 4, 6, "A_{4,3}"},
      {"kp21-power", "2+1 generalized KP system, f(u) = u^k + f0", Branch::PowerLaw, 5, 7,
       "A_{5,37}"},
      {"kp21-exp", "2+1 generalized KP system, f(u) = e^{sigma u} + f0", Branch::Exponential, 6,
       7, "A_{5,37} (x)_s A_1"},
      {"kp31", "3+1 generalized KP system, arbitrary f(u)", Branch::Generic, 7, -1, ""},
      {"kp31-power", "3+1 generalized KP system, f(u) = u^k + f0", Branch::PowerLaw, 8, -1, ""},
      {"kp31-exp", "3+1 generalized KP system, f(u) = e^{sigma u} + f0", Branch::Exponential, 8,
       -1, ""},
      {"kp21-static", "static reduction of kp21 (no t dependence)", Branch::Generic, 3, -1, ""},
      {"kp21-travel", "travel-wave reduction of kp21 along x - gamma t", Branch::Generic, 3, -1,
       ""},
  };
  return specs;
}

ProblemConfig build_kp21(Branch b) {
  ProblemConfig cfg;
  cfg.space = Space({"t", "x", "y"}, {"u", "v"});
  cfg.parameters = {{"eps", true}, {"f0", false}};
  if (b == Branch::PowerLaw) cfg.parameters.push_back({"k", true});
  if (b == Branch::Exponential) cfg.parameters.push_back({"sigma", true});
  cfg.branch = b;
  cfg.table = make_table(cfg.space, cfg.parameters, {"f", "beta"});

  Expr eq1 = parse("u_t + f(u)*u_x + u_xxx + eps*v_y", cfg.table);
  Expr eq2 = parse("v_x - u_y", cfg.table);
  cfg.system_formal =
      PdeSystem(cfg.space, {eq1, eq2}, {"u_t", "v_x"}, cfg.parameters);
  cfg.system = instantiate_branch(cfg.system_formal, b);

  auto G = [&](const std::string& name, const std::string& text, Branch br,
               const std::string& note = "") {
    cfg.generators.push_back({name, parse_generator(cfg, text), br, note});
  };
  G("X1", "Dt", Branch::Generic);
  G("X2", "Dx", Branch::Generic);
  G("X3", "Dy", Branch::Generic);
  G("X4", "2*eps*t*Dy - y*Dx + u*Dv", Branch::Generic);
  if (b == Branch::PowerLaw)
    G("X5", "2*u*Du + (k+2)*v*Dv - k*(3*t*Dt + (x+2*f0*t)*Dx + 2*y*Dy)", Branch::PowerLaw);
  if (b == Branch::Exponential) {
    G("X5b", "2*Du + sigma*v*Dv - sigma*(3*t*Dt + (x+2*f0*t)*Dx + 2*y*Dy)",
      Branch::Exponential);
    G("X6", "Dv", Branch::Generic, "member of the beta(t) family");
  }
  G("Xbeta", "beta(t)*Dv", Branch::Generic, "beta(t) kept formal");
  return cfg;
}

ProblemConfig build_kp31(Branch b) {
  ProblemConfig cfg;
  cfg.space = Space({"t", "x", "y", "z"}, {"u", "v", "w"});
  cfg.parameters = {{"alpha", true}, {"beta", true}, {"f0", false}};
  if (b == Branch::PowerLaw) cfg.parameters.push_back({"k", true});
  if (b == Branch::Exponential) cfg.parameters.push_back({"sigma", true});
  cfg.branch = b;
  cfg.table = make_table(cfg.space, cfg.parameters, {"f"});

  Expr eq1 = parse("u_t + f(u)*u_x + u_xxx + alpha*v_y + beta*w_z", cfg.table);
  Expr eq2 = parse("v_x - u_y", cfg.table);
  Expr eq3 = parse("w_x - u_z", cfg.table);
  cfg.system_formal =
      PdeSystem(cfg.space, {eq1, eq2, eq3}, {"u_t", "v_x", "w_x"}, cfg.parameters);
  cfg.system = instantiate_branch(cfg.system_formal, b);

  auto G = [&](const std::string& name, const std::string& text, Branch br,
               const std::string& note = "") {
    cfg.generators.push_back({name, parse_generator(cfg, text), br, note});
  };
  G("Y1", "Dt", Branch::Generic);
  G("Y2", "Dx", Branch::Generic);
  G("Y3", "Dy", Branch::Generic);
  G("Y4", "Dz", Branch::Generic);
  G("Y5", "2*alpha*t*Dy - y*Dx + u*Dv", Branch::Generic);
  G("Y6", "2*beta*t*Dz - z*Dx + u*Dw", Branch::Generic,
    "source prints the first term as 2*beta*t*Dy; that variant fails the symmetry condition");
  G("Y7", "beta*y*Dz - alpha*z*Dy + alpha*v*Dw - beta*w*Dv", Branch::Generic);
  if (b == Branch::PowerLaw)
    G("Y8",
      "k*(3*t*Dt + (x+2*f0*t)*Dx + 2*y*Dy + 2*z*Dz) - 2*u*Du - (k+2)*(v*Dv + w*Dw)",
      Branch::PowerLaw,
      "source prints y*Dy + z*Dz and +(k+2)(v Dv + w Dw); that variant fails the symmetry "
      "condition");
  if (b == Branch::Exponential)
    G("Y8b",
      "sigma*(3*t*Dt + (x+2*f0*t)*Dx + 2*y*Dy + 2*z*Dz) - 2*Du - sigma*(v*Dv + w*Dw)",
      Branch::Exponential,
      "source prints y*Dy + z*Dz and +sigma(v Dv + w Dw); that variant fails the symmetry "
      "condition");
  // admissible Y-infinity samples: alpha*d(phi1)/dy + beta*d(phi2)/dz = 0
  G("Yinf1", "beta*y*Dv - alpha*z*Dw", Branch::Generic, "phi1 = beta*y, phi2 = -alpha*z");
  G("Yinf2", "beta*z*Dv", Branch::Generic, "phi1 = beta*z, phi2 = 0");
  G("Yinf3", "t^2*Dv + t^3*Dw", Branch::Generic, "phi1 = t^2, phi2 = t^3");
  return cfg;
}

ProblemConfig build_static() {
  ProblemConfig cfg;
  cfg.space = Space({"x", "y"}, {"u", "v"});
  cfg.parameters = {{"eps", true}};
  cfg.branch = Branch::Generic;
  cfg.table = make_table(cfg.space, cfg.parameters, {"f"});
  Expr eq1 = parse("f(u)*u_x + u_xxx + eps*v_y", cfg.table);
  Expr eq2 = parse("v_x - u_y", cfg.table);
  cfg.system_formal = PdeSystem(cfg.space, {eq1, eq2}, {"u_xxx", "v_x"}, cfg.parameters);
  cfg.system = cfg.system_formal;
  auto G = [&](const std::string& name, const std::string& text) {
    cfg.generators.push_back({name, parse_generator(cfg, text), Branch::Generic, ""});
  };
  G("X2", "Dx");
  G("X3", "Dy");
  G("Xv", "Dv");
  return cfg;
}

ProblemConfig build_travel() {
  ProblemConfig cfg;
  cfg.space = Space({"z", "y"}, {"u", "v"});
  cfg.parameters = {{"eps", true}, {"gamma", false}};
  cfg.branch = Branch::Generic;
  cfg.table = make_table(cfg.space, cfg.parameters, {"f"});
  Expr eq1 = parse("(f(u) - gamma)*u_z + u_zzz + eps*v_y", cfg.table);
  Expr eq2 = parse("v_z - u_y", cfg.table);
  cfg.system_formal = PdeSystem(cfg.space, {eq1, eq2}, {"u_zzz", "v_z"}, cfg.parameters);
  cfg.system = cfg.system_formal;
  auto G = [&](const std::string& name, const std::string& text) {
    cfg.generators.push_back({name, parse_generator(cfg, text), Branch::Generic, ""});
  };
  G("X2", "Dz");
  G("X3", "Dy");
  G("Xv", "Dv");
  return cfg;
}

void validate_generators(ProblemConfig& cfg) {
  for (const auto& g : cfg.generators) {
    auto rs = symmetry_residual(cfg.system, g.field);
    for (size_t i = 0; i < rs.size(); ++i)
      if (!is_zero(rs[i]))
        throw Error("validate", "generator " + g.name + " fails equation " +
                                    std::to_string(i + 1) + ": residual " + to_string(rs[i]));
  }
}

}  // namespace

std::vector<CatalogEntry> builtin_catalog() {
  std::vector<CatalogEntry> out;
  for (const auto& s : builtin_specs())
    out.push_back({s.name, s.description, s.branch, s.finite_dim, s.affine_dim, s.label});
  return out;
}

ProblemConfig load(const std::string& name_or_path, bool validate) {
  ProblemConfig cfg;
  if (name_or_path == "kp21")
    cfg = build_kp21(Branch::Generic);
  else if (name_or_path == "kp21-power")
    cfg = build_kp21(Branch::PowerLaw);
  else if (name_or_path == "kp21-exp")
    cfg = build_kp21(Branch::Exponential);
  else if (name_or_path == "kp31")
    cfg = build_kp31(Branch::Generic);
  else if (name_or_path == "kp31-power")
    cfg = build_kp31(Branch::PowerLaw);
  else if (name_or_path == "kp31-exp")
    cfg = build_kp31(Branch::Exponential);
  else if (name_or_path == "kp21-static" || name_or_path == "static")
    cfg = build_static();
  else if (name_or_path == "kp21-travel" || name_or_path == "travel")
    cfg = build_travel();
  else
    return load_file(name_or_path, validate);
  cfg.name = name_or_path == "static" ? "kp21-static"
             : name_or_path == "travel" ? "kp21-travel"
                                        : name_or_path;
  for (const auto& s : builtin_specs())
    if (s.name == cfg.name) cfg.algebra_label = s.label;
  if (validate) validate_generators(cfg);
  return cfg;
}

ProblemConfig load_file(const std::string& path, bool validate) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open problem file " + path);
  ProblemConfig cfg;
  cfg.name = path;
  std::vector<std::string> coords, fields;
  std::vector<std::pair<std::string, std::string>> equations;  // text, leading
  std::vector<std::pair<std::string, std::string>> generators; // name, text
  std::set<std::string> funs = {"f"};
  std::string branch_str = "generic";

  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto rest = [&]() {
      std::string r;
      std::getline(ls, r);
      size_t b = r.find_first_not_of(" \t");
      return b == std::string::npos ? std::string() : r.substr(b);
    };
    if (kw == "problem") {
      cfg.name = rest();
    } else if (kw == "space") {
      bool after_bar = false;
      std::string tok;
      while (ls >> tok) {
        if (tok == "|") {
          after_bar = true;
          continue;
        }
        (after_bar ? fields : coords).push_back(tok);
      }
    } else if (kw == "parameter") {
      std::string nm, flag;
      ls >> nm;
      bool nz = (ls >> flag) && flag == "nonzero";
      cfg.parameters.push_back({nm, nz});
    } else if (kw == "function") {
      std::string nm;
      while (ls >> nm) funs.insert(nm);
    } else if (kw == "branch") {
      ls >> branch_str;
    } else if (kw == "equation") {
      std::string body = rest();
      auto pos = body.rfind(" leading ");
      if (pos == std::string::npos)
        throw Error("parse", "equation without leading clause (line " +
                                 std::to_string(lineno) + ")");
      equations.emplace_back(body.substr(0, pos), body.substr(pos + 9));
    } else if (kw == "generator") {
      std::string body = rest();
      auto eq = body.find('=');
      if (eq == std::string::npos)
        throw Error("parse", "generator needs name = expression (line " +
                                 std::to_string(lineno) + ")");
      std::string nm = body.substr(0, eq);
      nm.erase(nm.find_last_not_of(" \t") + 1);
      generators.emplace_back(nm, body.substr(eq + 1));
    } else if (kw == "label") {
      cfg.algebra_label = rest();
    } else {
      throw Error("parse", "unknown keyword '" + kw + "' (line " + std::to_string(lineno) + ")");
    }
  }
  if (coords.empty() || fields.empty())
    throw Error("parse", "problem file missing space declaration");
  cfg.space = Space(coords, fields);
  if (branch_str == "generic")
    cfg.branch = Branch::Generic;
  else if (branch_str == "power_law")
    cfg.branch = Branch::PowerLaw;
  else if (branch_str == "exponential")
    cfg.branch = Branch::Exponential;
  else
    throw Error("parse", "unknown branch " + branch_str);
  if (cfg.branch == Branch::PowerLaw) cfg.parameters.push_back({"k", true});
  if (cfg.branch == Branch::Exponential) cfg.parameters.push_back({"sigma", true});
  cfg.table = make_table(cfg.space, cfg.parameters, funs);

  std::vector<Expr> eqs;
  std::vector<std::string> leading;
  for (auto& [text, lead] : equations) {
    eqs.push_back(parse(text, cfg.table));
    std::string l = lead;
    l.erase(l.find_last_not_of(" \t") + 1);
    leading.push_back(l);
  }
  cfg.system_formal = PdeSystem(cfg.space, eqs, leading, cfg.parameters);
  cfg.system = instantiate_branch(cfg.system_formal, cfg.branch);
  for (auto& [nm, text] : generators)
    cfg.generators.push_back({nm, parse_generator(cfg, text), cfg.branch, ""});
  if (validate) validate_generators(cfg);
  return cfg;
}

std::string to_problem_file(const ProblemConfig& cfg) {
  std::ostringstream os;
  os << "problem " << cfg.name << "\n";
  os << "space";
  for (const auto& c : cfg.space.coords()) os << " " << c;
  os << " |";
  for (const auto& f : cfg.space.fields()) os << " " << f;
  os << "\n";
  for (const auto& p : cfg.parameters)
    os << "parameter " << p.name << (p.nonzero ? " nonzero" : "") << "\n";
  os << "branch " << branch_name(cfg.branch) << "\n";
  const auto& eqs = cfg.system_formal.equations();
  for (size_t i = 0; i < eqs.size(); ++i)
    os << "equation " << to_string(eqs[i]) << " leading " << cfg.system_formal.leading()[i]
       << "\n";
  for (const auto& g : cfg.generators)
    os << "generator " << g.name << " = " << print_generator(cfg, g.field) << "\n";
  if (!cfg.algebra_label.empty()) os << "label " << cfg.algebra_label << "\n";
  return os.str();
}

VectorField y_infinity(const ProblemConfig& kp31, const Expr& phi1, const Expr& phi2) {
  const Space& sp = kp31.space;
  if (sp.fields().size() != 3)
    throw Error("domain", "y_infinity needs the 3+1 system");
  for (const auto& bad : {"x", "u", "v", "w"})
    if (occurs(phi1, bad) || occurs(phi2, bad))
      throw Error("domain", std::string("phi may depend on (t,y,z) only, found ") + bad);
  Expr constraint = add(mul(sym("alpha"), diff(phi1, "y")), mul(sym("beta"), diff(phi2, "z")));
  if (!is_zero(constraint))
    throw Error("domain",
                "inadmissible Y-infinity pair: alpha*phi1_y + beta*phi2_z = " +
                    to_string(constraint));
  std::vector<Expr> xi(sp.coords().size(), zero());
  return VectorField(sp, xi, {zero(), phi1, phi2});
}

}  // namespace kpsym
