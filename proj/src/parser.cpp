#include "kpsym/parser.hpp"

#include "kpsym/space.hpp"

#include <cctype>

namespace kpsym {

bool SymbolTable::knows_symbol(const std::string& name) const {
  if (open_world) return true;
  if (symbols.count(name)) return true;
  if (space) {
    if (space->coord_index(name) >= 0) return true;
    if (space->parse_jet(name)) return true;
  }
  return false;
}

std::optional<std::pair<std::string, int>> SymbolTable::match_function(
    const std::string& id) const {
  size_t primes = 0;
  while (primes < id.size() && id[id.size() - 1 - primes] == 'p') primes++;
  for (size_t d = 0; d <= primes; ++d) {
    std::string base = id.substr(0, id.size() - d);
    if (functions.count(base)) return std::make_pair(base, static_cast<int>(d));
  }
  if (open_world) return std::make_pair(id, 0);
  return std::nullopt;
}

namespace {

struct Parser {
  const std::string& text;
  const SymbolTable& table;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("parse", msg + " at position " + std::to_string(pos + 1));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      pos++;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (true) {
      if (eat('+'))
        e = add(e, parse_term());
      else if (eat('-'))
        e = sub(e, parse_term());
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (true) {
      if (eat('*'))
        e = mul(e, parse_factor());
      else if (eat('/'))
        e = div(e, parse_factor());
      else
        return e;
    }
  }

  Expr parse_factor() {
    if (eat('-')) return neg(parse_factor());
    if (eat('+')) return parse_factor();
    Expr base = parse_primary();
    if (eat('^')) {
      Expr expo = parse_exponent();
      return pow(base, expo);
    }
    return base;
  }

  Expr parse_exponent() {
    if (eat('-')) return neg(parse_exponent());
    Expr e = parse_primary();
    if (eat('^')) return pow(e, parse_exponent());
    return e;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      pos++;
      Expr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) pos++;
    return num(Rat(text.substr(start, pos - start)));
  }

  std::string read_name() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      pos++;
    return text.substr(start, pos - start);
  }

  Expr parse_identifier() {
    size_t start = pos;
    std::string id = read_name();

    if (peek() == '(') {
      if (id == "exp") {
        eat('(');
        Expr a = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return exp_(a);
      }
      if (id == "log") {
        eat('(');
        Expr a = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return log_(a);
      }
      if (id == "D") {
        // D(name;d1,d2,...)(a1,a2,...)
        eat('(');
        skip_ws();
        std::string name = read_name();
        if (!eat(';')) fail("expected ';' in D(...)");
        std::vector<int> dv;
        do {
          skip_ws();
          size_t s0 = pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) pos++;
          if (pos == s0) fail("expected derivative order");
          dv.push_back(std::stoi(text.substr(s0, pos - s0)));
        } while (eat(','));
        if (!eat(')')) fail("expected ')'");
        if (!eat('(')) fail("expected '(' for arguments");
        std::vector<Expr> args;
        do args.push_back(parse_expr());
        while (eat(','));
        if (!eat(')')) fail("expected ')'");
        if (!table.open_world && !table.functions.count(name)) {
          pos = start;
          fail("unknown function '" + name + "'");
        }
        return fun(name, std::move(args), std::move(dv));
      }
      auto fm = table.match_function(id);
      if (fm) {
        eat('(');
        std::vector<Expr> args;
        do args.push_back(parse_expr());
        while (eat(','));
        if (!eat(')')) fail("expected ')'");
        std::vector<int> dv(args.size(), 0);
        if (args.size() == 1)
          dv[0] = fm->second;
        else if (fm->second != 0) {
          pos = start;
          fail("prime notation needs a single-argument function");
        }
        return fun(fm->first, std::move(args), std::move(dv));
      }
      pos = start;
      fail("unknown function '" + id + "'");
    }

    if (!table.knows_symbol(id)) {
      pos = start;
      fail("unknown identifier '" + id + "'");
    }
    if (table.space) {
      auto j = table.space->parse_jet(id);
      if (j) return sym(table.space->jet_name(*j));  // canonical jet spelling
    }
    return sym(id);
  }
};

}  // namespace

Expr parse(const std::string& text, const SymbolTable& table) {
  Parser p{text, table};
  Expr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

Expr parse_any(const std::string& text) {
  SymbolTable t;
  t.open_world = true;
  return parse(text, t);
}

}  // namespace kpsym
