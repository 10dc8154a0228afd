// Reader for the line-oriented `.tb` net format:
//
//   place <name>
//   init <place> { <var> (, <var>)* }
//   constraint <linexpr> (<=|>=|=) <linexpr>
//   transition <name> [weak|strong] { in <arcs> ; out [<arcs>] ; tf [ <expr> , <expr> ] }
//
// `#` starts a comment. Names are resolved after the whole file is read, so
// declarations may appear in any order.

#include "tbcover/net.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace tbcover {
namespace {

enum class Tok { ident, number, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 0;
  int column = 0;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok{Tok::end, "", line, column};
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                src[j] == '\'')) {
        ++j;
      }
      tok.kind = Tok::ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      auto digits = [&] {
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      };
      digits();
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        digits();
      } else if (j + 1 < src.size() && src[j] == '/' &&
                 std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        digits();
      }
      tok.kind = Tok::number;
    } else if ((c == '<' || c == '>') && i + 1 < src.size() && src[i + 1] == '=') {
      j += 2;
      tok.kind = Tok::punct;
    } else if (std::string_view("{}[](),;*+-=").find(c) != std::string_view::npos) {
      j += 1;
      tok.kind = Tok::punct;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, column);
    }
    tok.text = std::string(src.substr(i, j - i));
    out.push_back(std::move(tok));
    advance(j - i);
  }
  out.push_back(Token{Tok::end, "<end of input>", line, column});
  return out;
}

struct Position {
  int line = 0;
  int column = 0;
};

// Linear combination over still-unresolved symbol names.
struct SymExpr {
  std::map<std::string, Rational> terms;
  std::map<std::string, Position> where;
  Rational constant = 0;

  void add(const SymExpr& o, const Rational& k) {
    for (const auto& [s, q] : o.terms) {
      Rational& slot = terms[s];
      slot += k * q;
      where.try_emplace(s, o.where.at(s));
      if (slot == 0) terms.erase(s);
    }
    constant += k * o.constant;
  }
  bool is_constant() const { return terms.empty(); }
};

struct RawArc {
  std::string place;
  unsigned weight = 1;
  Position pos;
};

struct RawTransition {
  std::string name;
  Position pos;
  Strength strength = Strength::strong;
  std::vector<RawArc> preset;
  std::vector<RawArc> postset;
  SymExpr lower;
  SymExpr upper;
};

struct RawInit {
  std::string place;
  Position pos;
  std::vector<std::pair<std::string, Position>> vars;
};

struct RawConstraint {
  SymExpr lhs;
  Rel rel = Rel::le;
  SymExpr rhs;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  TBNet parse() {
    while (peek().kind != Tok::end) statement();
    return resolve();
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void fail(const std::string& what, const Token& at) const {
    throw ParseError(what + " (found '" + at.text + "')", at.line, at.column);
  }
  [[noreturn]] static void fail_at(const std::string& what, Position p) {
    throw ParseError(what, p.line, p.column);
  }

  bool accept(std::string_view punct) {
    if (peek().kind == Tok::punct && peek().text == punct) {
      next();
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'", peek());
  }
  const Token& expect_ident(const std::string& what) {
    if (peek().kind != Tok::ident) fail("expected " + what, peek());
    return next();
  }

  void statement() {
    const Token& kw = expect_ident("a declaration keyword");
    if (kw.text == "place") {
      const Token& name = expect_ident("place name");
      places_.emplace_back(name.text, Position{name.line, name.column});
    } else if (kw.text == "init") {
      init();
    } else if (kw.text == "constraint") {
      RawConstraint c;
      c.lhs = expr();
      const Token& op = next();
      if (op.kind != Tok::punct || (op.text != "<=" && op.text != ">=" && op.text != "=")) {
        fail("expected '<=', '>=' or '='", op);
      }
      c.rel = op.text == "<=" ? Rel::le : op.text == ">=" ? Rel::ge : Rel::eq;
      c.rhs = expr();
      constraints_.push_back(std::move(c));
    } else if (kw.text == "transition") {
      transition();
    } else {
      fail("unknown declaration '" + kw.text + "'", kw);
    }
  }

  void init() {
    const Token& place = expect_ident("place name");
    RawInit raw{place.text, {place.line, place.column}, {}};
    expect("{");
    do {
      const Token& v = expect_ident("timestamp variable");
      raw.vars.emplace_back(v.text, Position{v.line, v.column});
    } while (accept(","));
    expect("}");
    inits_.push_back(std::move(raw));
  }

  std::vector<RawArc> arcs() {
    std::vector<RawArc> out;
    if (peek().kind != Tok::ident) return out;
    do {
      const Token& p = expect_ident("place name");
      RawArc a{p.text, 1, {p.line, p.column}};
      if (accept("*")) {
        const Token& w = next();
        if (w.kind != Tok::number || w.text.find_first_not_of("0123456789") != std::string::npos ||
            std::stoul(w.text) == 0) {
          fail("expected a positive integer arc weight", w);
        }
        a.weight = static_cast<unsigned>(std::stoul(w.text));
      }
      out.push_back(std::move(a));
    } while (accept(","));
    return out;
  }

  void transition() {
    const Token& name = expect_ident("transition name");
    RawTransition t;
    t.name = name.text;
    t.pos = {name.line, name.column};
    if (peek().kind == Tok::ident && (peek().text == "weak" || peek().text == "strong")) {
      t.strength = next().text == "weak" ? Strength::weak : Strength::strong;
    }
    expect("{");
    const Token& in = expect_ident("'in'");
    if (in.text != "in") fail("expected 'in'", in);
    t.preset = arcs();
    if (t.preset.empty()) fail("expected at least one input place", peek());
    expect(";");
    const Token& out = expect_ident("'out'");
    if (out.text != "out") fail("expected 'out'", out);
    t.postset = arcs();
    expect(";");
    const Token& tf = expect_ident("'tf'");
    if (tf.text != "tf") fail("expected 'tf'", tf);
    expect("[");
    t.lower = expr();
    expect(",");
    t.upper = expr();
    expect("]");
    expect("}");
    transitions_.push_back(std::move(t));
  }

  SymExpr expr() {
    SymExpr out;
    Rational sign = 1;
    if (accept("-")) {
      sign = -1;
    } else {
      accept("+");
    }
    out.add(term(), sign);
    while (true) {
      if (accept("+")) {
        out.add(term(), 1);
      } else if (accept("-")) {
        out.add(term(), -1);
      } else {
        return out;
      }
    }
  }

  SymExpr term() {
    SymExpr acc = factor();
    while (true) {
      const Token& at = peek();
      if (!accept("*")) return acc;
      SymExpr rhs = factor();
      if (acc.is_constant()) {
        SymExpr scaled;
        scaled.add(rhs, acc.constant);
        acc = std::move(scaled);
      } else if (rhs.is_constant()) {
        SymExpr scaled;
        scaled.add(acc, rhs.constant);
        acc = std::move(scaled);
      } else {
        fail("non-linear product", at);
      }
    }
  }

  SymExpr factor() {
    const Token& tok = next();
    SymExpr out;
    if (tok.kind == Tok::number) {
      out.constant = parse_rational(tok.text);
    } else if (tok.kind == Tok::ident) {
      out.terms[tok.text] = 1;
      out.where[tok.text] = Position{tok.line, tok.column};
    } else if (tok.kind == Tok::punct && tok.text == "(") {
      out = expr();
      expect(")");
    } else if (tok.kind == Tok::punct && tok.text == "-") {
      out.add(factor(), -1);
    } else {
      fail("expected a number, a name or '('", tok);
    }
    return out;
  }

  TBNet resolve() {
    TBNet net;
    std::map<std::string, PlaceId> place_ids;
    for (const auto& [name, pos] : places_) {
      place_ids.try_emplace(name, net.places.size());
      net.places.push_back(name);
    }
    auto place_of = [&](const std::string& name, Position pos) {
      auto it = place_ids.find(name);
      if (it == place_ids.end()) fail_at("undeclared place '" + name + "'", pos);
      return it->second;
    };

    // Variables are numbered by place order, then token order.
    net.initial_marking.assign(net.places.size(), {});
    std::vector<std::vector<std::pair<std::string, Position>>> per_place(net.places.size());
    for (const RawInit& init : inits_) {
      PlaceId p = place_of(init.place, init.pos);
      per_place[p].insert(per_place[p].end(), init.vars.begin(), init.vars.end());
    }
    std::map<std::string, Var> var_ids;
    for (PlaceId p = 0; p < per_place.size(); ++p) {
      for (const auto& [name, pos] : per_place[p]) {
        if (name == "enab" || place_ids.contains(name)) {
          fail_at("timestamp variable '" + name + "' clashes with a reserved name", pos);
        }
        auto [it, fresh] = var_ids.try_emplace(name, Var{static_cast<std::uint32_t>(net.variables.size())});
        if (fresh) net.variables.push_back(name);
        net.initial_marking[p].push_back(it->second);
      }
    }

    std::set<Var> all_vars;
    for (const auto& [name, v] : var_ids) all_vars.insert(v);
    net.initial_constraint = ConstraintSystem(all_vars);
    for (const RawConstraint& c : constraints_) {
      auto lower = [&](const SymExpr& e) {
        LinearExpr out(e.constant);
        for (const auto& [name, q] : e.terms) {
          auto it = var_ids.find(name);
          if (it == var_ids.end()) fail_at("undeclared variable '" + name + "'", e.where.at(name));
          out.add_term(it->second, q);
        }
        return out;
      };
      net.initial_constraint.add(lower(c.lhs), c.rel, lower(c.rhs));
    }

    for (const RawTransition& raw : transitions_) {
      Transition t;
      t.name = raw.name;
      t.strength = raw.strength;
      for (const RawArc& a : raw.preset) t.preset.push_back(Arc{place_of(a.place, a.pos), a.weight});
      for (const RawArc& a : raw.postset) t.postset.push_back(Arc{place_of(a.place, a.pos), a.weight});
      auto time_expr = [&](const SymExpr& e) {
        TimeExpr out;
        out.constant = e.constant;
        for (const auto& [name, q] : e.terms) {
          if (name == "enab") {
            out.enab_coeff += q;
            continue;
          }
          PlaceId p = place_of(name, e.where.at(name));
          if (!t.consumes(p)) {
            fail_at("time function of '" + t.name + "' references place '" + name +
                        "' outside its preset",
                    e.where.at(name));
          }
          out.place_coeffs[p] += q;
          if (out.place_coeffs[p] == 0) out.place_coeffs.erase(p);
        }
        return out;
      };
      t.lower = time_expr(raw.lower);
      t.upper = time_expr(raw.upper);
      net.transitions.push_back(std::move(t));
    }

    std::vector<Diagnostic> diagnostics = validate(net);
    if (!diagnostics.empty()) throw InvalidNet(std::move(diagnostics));
    return net;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::pair<std::string, Position>> places_;
  std::vector<RawInit> inits_;
  std::vector<RawConstraint> constraints_;
  std::vector<RawTransition> transitions_;
};

}  // namespace

TBNet parse_net(std::string_view text) { return Parser(text).parse(); }

TBNet load_net(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_net(buffer.str());
}

}  // namespace tbcover
