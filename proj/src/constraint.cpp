#include "tbcover/constraint.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace tbcover {

// ---------------------------------------------------------------------------
// LinearExpr / Constraint / Interval
// ---------------------------------------------------------------------------

LinearExpr LinearExpr::variable(Var v, Rational coeff) {
  LinearExpr e;
  e.add_term(v, coeff);
  return e;
}

Rational LinearExpr::coefficient(Var v) const {
  auto it = terms_.find(v);
  return it == terms_.end() ? Rational(0) : it->second;
}

LinearExpr& LinearExpr::add_term(Var v, const Rational& coeff) {
  if (coeff == 0) return *this;
  auto [it, inserted] = terms_.try_emplace(v, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  for (const auto& [v, q] : other.terms_) add_term(v, q);
  constant_ += other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  for (const auto& [v, q] : other.terms_) add_term(v, -q);
  constant_ -= other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(const Rational& k) {
  if (k == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [v, q] : terms_) q *= k;
  constant_ *= k;
  return *this;
}

LinearExpr& LinearExpr::operator+=(const Rational& k) {
  constant_ += k;
  return *this;
}

LinearExpr LinearExpr::renamed(const std::map<Var, Var>& rename) const {
  LinearExpr out(constant_);
  for (const auto& [v, q] : terms_) {
    auto it = rename.find(v);
    out.add_term(it == rename.end() ? v : it->second, q);
  }
  return out;
}

Constraint Constraint::make(const LinearExpr& lhs, Rel rel, const LinearExpr& rhs) {
  LinearExpr diff = lhs - rhs;
  Constraint c;
  c.coeffs = diff.terms();
  c.rel = rel;
  c.rhs = -diff.constant();
  return c;
}

bool Constraint::holds(const std::map<Var, Rational>& point) const {
  Rational lhs = 0;
  for (const auto& [v, q] : coeffs) {
    auto it = point.find(v);
    if (it == point.end()) throw std::out_of_range("point misses a variable");
    lhs += q * it->second;
  }
  switch (rel) {
    case Rel::le: return lhs <= rhs;
    case Rel::ge: return lhs >= rhs;
    case Rel::eq: return lhs == rhs;
  }
  return false;
}

Interval Interval::closed(Rational lo, Rational hi) {
  Interval iv{std::move(lo), std::move(hi), false};
  if (*iv.lower > *iv.upper) return make_empty();
  return iv;
}

bool Interval::contains(const Interval& other) const {
  if (other.empty) return true;
  if (empty) return false;
  if (lower && (!other.lower || *other.lower < *lower)) return false;
  if (upper && (!other.upper || *other.upper > *upper)) return false;
  return true;
}

bool Interval::contains(const Rational& q) const {
  if (empty) return false;
  return (!lower || *lower <= q) && (!upper || q <= *upper);
}

std::string to_string(const Interval& iv) {
  if (iv.empty) return "[]";
  std::string lo = iv.lower ? to_decimal_string(*iv.lower) : "-inf";
  std::string hi = iv.upper ? to_decimal_string(*iv.upper) : "+inf";
  return (iv.lower ? "[" : "(") + lo + "," + hi + (iv.upper ? "]" : ")");
}

std::string default_var_name(Var v) { return "x" + std::to_string(v.id); }

std::string to_string(const Constraint& c, const VarNamer& namer) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [v, q] : c.coeffs) {
    Rational mag = abs(q);
    if (first) {
      if (q < 0) out << "-";
    } else {
      out << (q < 0 ? " - " : " + ");
    }
    if (mag != 1) out << to_string(mag) << "*";
    out << namer(v);
    first = false;
  }
  if (first) out << "0";
  switch (c.rel) {
    case Rel::le: out << " <= "; break;
    case Rel::ge: out << " >= "; break;
    case Rel::eq: out << " = "; break;
  }
  out << to_string(c.rhs);
  return out.str();
}

// ---------------------------------------------------------------------------
// ConstraintSystem
// ---------------------------------------------------------------------------

void ConstraintSystem::add(Constraint c) {
  for (const auto& [v, q] : c.coeffs) variables_.insert(v);
  conjuncts_.push_back(std::move(c));
}

ConstraintSystem ConstraintSystem::conjoin(const ConstraintSystem& other) const {
  ConstraintSystem out = *this;
  out.variables_.insert(other.variables_.begin(), other.variables_.end());
  out.conjuncts_.insert(out.conjuncts_.end(), other.conjuncts_.begin(), other.conjuncts_.end());
  return out;
}

ConstraintSystem ConstraintSystem::renamed(const std::map<Var, Var>& rename) const {
  auto map_var = [&](Var v) {
    auto it = rename.find(v);
    return it == rename.end() ? v : it->second;
  };
  ConstraintSystem out;
  for (Var v : variables_) out.variables_.insert(map_var(v));
  for (const Constraint& c : conjuncts_) {
    Constraint r;
    r.rel = c.rel;
    r.rhs = c.rhs;
    for (const auto& [v, q] : c.coeffs) {
      Rational& slot = r.coeffs[map_var(v)];
      slot += q;
      if (slot == 0) r.coeffs.erase(map_var(v));
    }
    out.conjuncts_.push_back(std::move(r));
  }
  return out;
}

bool ConstraintSystem::holds(const std::map<Var, Rational>& point) const {
  return std::all_of(conjuncts_.begin(), conjuncts_.end(),
                     [&](const Constraint& c) { return c.holds(point); });
}

std::vector<std::string> ConstraintSystem::conjunct_strings(const VarNamer& namer) const {
  std::vector<std::string> lines;
  lines.reserve(conjuncts_.size());
  for (const Constraint& c : conjuncts_) lines.push_back(tbcover::to_string(c, namer));
  return lines;
}

std::string ConstraintSystem::to_string(const VarNamer& namer) const {
  std::string out;
  for (const std::string& line : conjunct_strings(namer)) {
    out += line;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin elimination
// ---------------------------------------------------------------------------

namespace {

using Coeffs = std::map<Var, Rational>;

// Set of original inequality indices a derived row depends on (Chernikov).
class History {
 public:
  static History single(std::size_t index) {
    History h;
    h.words_.assign(index / 64 + 1, 0);
    h.words_[index / 64] = std::uint64_t{1} << (index % 64);
    return h;
  }
  History united(const History& other) const {
    History h = *this;
    if (h.words_.size() < other.words_.size()) h.words_.resize(other.words_.size(), 0);
    for (std::size_t i = 0; i < other.words_.size(); ++i) h.words_[i] |= other.words_[i];
    return h;
  }
  int count() const {
    int n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// sum a*x <= b, or < b when strict.
struct Row {
  Coeffs a;
  Rational b;
  bool strict = false;
  History history;
};

// sum a*x = b.
struct Equation {
  Coeffs a;
  Rational b;
};

void axpy(Coeffs& target, const Coeffs& source, const Rational& k) {
  for (const auto& [v, q] : source) {
    Rational& slot = target[v];
    slot += k * q;
    if (slot == 0) target.erase(v);
  }
}

class Eliminator {
 public:
  explicit Eliminator(const ConstraintSystem& system) {
    for (const Constraint& c : system.conjuncts()) add(c);
  }

  void add(const Constraint& c) {
    switch (c.rel) {
      case Rel::le: add_row(c.coeffs, c.rhs, false); break;
      case Rel::ge: add_row(negated(c.coeffs), -c.rhs, false); break;
      case Rel::eq: add_equation(c.coeffs, c.rhs); break;
    }
  }

  void add_row(Coeffs a, Rational b, bool strict) {
    Row r{std::move(a), std::move(b), strict, History::single(next_history_++)};
    push_row(std::move(r));
  }

  void add_equation(Coeffs a, Rational b) { push_equation(Equation{std::move(a), std::move(b)}); }

  bool contradiction() const { return contradiction_; }

  void eliminate(const std::set<Var>& drop) {
    substitute_equations(drop);
    std::set<Var> pending;
    for (const Row& r : rows_) {
      for (const auto& [v, q] : r.a) {
        if (drop.contains(v)) pending.insert(v);
      }
    }
    while (!pending.empty() && !contradiction_) {
      Var best = pick_variable(pending);
      pending.erase(best);
      fourier_motzkin(best);
    }
  }

  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Equation>& equations() const { return equations_; }

 private:
  static Coeffs negated(const Coeffs& a) {
    Coeffs out = a;
    for (auto& [v, q] : out) q = -q;
    return out;
  }

  void push_row(Row r) {
    if (contradiction_) return;
    if (r.a.empty()) {
      if (r.b < 0 || (r.strict && r.b == 0)) contradiction_ = true;
      return;
    }
    // Scale so the leading coefficient has magnitude one.
    Rational scale = abs(r.a.begin()->second);
    if (scale != 1) {
      for (auto& [v, q] : r.a) q /= scale;
      r.b /= scale;
    }
    auto it = row_index_.find(r.a);
    if (it == row_index_.end()) {
      row_index_.emplace(r.a, rows_.size());
      rows_.push_back(std::move(r));
      return;
    }
    Row& existing = rows_[it->second];
    if (r.b < existing.b || (r.b == existing.b && r.strict && !existing.strict)) existing = std::move(r);
  }

  void push_equation(Equation e) {
    if (contradiction_) return;
    if (e.a.empty()) {
      if (e.b != 0) contradiction_ = true;
      return;
    }
    Rational lead = e.a.begin()->second;
    if (lead != 1) {
      for (auto& [v, q] : e.a) q /= lead;
      e.b /= lead;
    }
    for (const Equation& other : equations_) {
      if (other.a == e.a) {
        if (other.b != e.b) contradiction_ = true;
        return;
      }
    }
    equations_.push_back(std::move(e));
  }

  void rebuild_index() {
    row_index_.clear();
    std::vector<Row> old = std::move(rows_);
    rows_.clear();
    for (Row& r : old) push_row(std::move(r));
  }

  // Uses equations to remove variables of `drop`, pivoting on the smallest
  // variable id first so results are deterministic.
  void substitute_equations(const std::set<Var>& drop) {
    bool progress = true;
    while (progress && !contradiction_) {
      progress = false;
      for (std::size_t i = 0; i < equations_.size(); ++i) {
        auto pivot = std::find_if(equations_[i].a.begin(), equations_[i].a.end(),
                                  [&](const auto& term) { return drop.contains(term.first); });
        if (pivot == equations_[i].a.end()) continue;
        const Var v = pivot->first;
        Equation eq = equations_[i];
        equations_.erase(equations_.begin() + static_cast<std::ptrdiff_t>(i));
        const Rational coeff = eq.a.at(v);

        std::vector<Equation> old_eqs = std::move(equations_);
        equations_.clear();
        for (Equation& other : old_eqs) {
          auto it = other.a.find(v);
          if (it != other.a.end()) {
            Rational k = -it->second / coeff;
            axpy(other.a, eq.a, k);
            other.b += k * eq.b;
          }
          push_equation(std::move(other));
        }
        for (Row& r : rows_) {
          auto it = r.a.find(v);
          if (it == r.a.end()) continue;
          Rational k = -it->second / coeff;
          axpy(r.a, eq.a, k);
          r.b += k * eq.b;
        }
        rebuild_index();
        progress = true;
        break;
      }
    }
  }

  Var pick_variable(const std::set<Var>& pending) const {
    Var best{};
    std::size_t best_cost = 0;
    bool first = true;
    for (Var v : pending) {
      std::size_t pos = 0;
      std::size_t neg = 0;
      for (const Row& r : rows_) {
        auto it = r.a.find(v);
        if (it == r.a.end()) continue;
        (it->second > 0 ? pos : neg)++;
      }
      std::size_t cost = pos * neg;
      if (first || cost < best_cost) {
        best = v;
        best_cost = cost;
        first = false;
      }
    }
    return best;
  }

  void fourier_motzkin(Var v) {
    ++fm_steps_;
    std::vector<Row> positive;
    std::vector<Row> negative;
    std::vector<Row> rest;
    for (Row& r : rows_) {
      auto it = r.a.find(v);
      if (it == r.a.end()) {
        rest.push_back(std::move(r));
      } else if (it->second > 0) {
        positive.push_back(std::move(r));
      } else {
        negative.push_back(std::move(r));
      }
    }
    rows_.clear();
    row_index_.clear();
    for (Row& r : rest) push_row(std::move(r));
    for (const Row& p : positive) {
      const Rational& cp = p.a.at(v);
      for (const Row& n : negative) {
        const Rational cn = -n.a.at(v);
        Row combined;
        combined.a = p.a;
        for (auto& [var, q] : combined.a) q *= cn;
        axpy(combined.a, n.a, cp);
        combined.a.erase(v);
        combined.b = p.b * cn + n.b * cp;
        combined.strict = p.strict || n.strict;
        combined.history = p.history.united(n.history);
        if (combined.history.count() > fm_steps_ + 1) continue;
        push_row(std::move(combined));
      }
    }
  }

  std::vector<Row> rows_;
  std::map<Coeffs, std::size_t> row_index_;
  std::vector<Equation> equations_;
  bool contradiction_ = false;
  std::size_t next_history_ = 0;
  int fm_steps_ = 0;
};

Var fresh_var(const ConstraintSystem& c, const std::set<Var>& extra = {}) {
  std::uint32_t next = 0;
  for (Var v : c.variables()) next = std::max(next, v.id + 1);
  for (const Constraint& k : c.conjuncts()) {
    for (const auto& [v, q] : k.coeffs) next = std::max(next, v.id + 1);
  }
  for (Var v : extra) next = std::max(next, v.id + 1);
  return Var{next};
}

std::set<Var> all_vars(const ConstraintSystem& c) {
  std::set<Var> vars = c.variables();
  for (const Constraint& k : c.conjuncts()) {
    for (const auto& [v, q] : k.coeffs) vars.insert(v);
  }
  return vars;
}

bool eliminator_satisfiable(Eliminator& e, const std::set<Var>& vars) {
  e.eliminate(vars);
  return !e.contradiction();
}

// Integer coefficients with gcd 1, leading coefficient positive.
Constraint normalized(const Constraint& c) {
  if (c.coeffs.empty()) return c;
  mpz_class lcm_den = 1;
  for (const auto& [v, q] : c.coeffs) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den_mpz_t());
  mpz_class gcd_num = 0;
  for (const auto& [v, q] : c.coeffs) {
    mpz_class scaled = q.get_num() * (lcm_den / q.get_den());
    mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), scaled.get_mpz_t());
  }
  Rational factor(lcm_den, gcd_num);
  factor.canonicalize();
  if (c.coeffs.begin()->second < 0) factor = -factor;
  Constraint out;
  out.rel = c.rel;
  if (factor < 0 && c.rel != Rel::eq) out.rel = c.rel == Rel::le ? Rel::ge : Rel::le;
  for (const auto& [v, q] : c.coeffs) out.coeffs.emplace(v, q * factor);
  out.rhs = c.rhs * factor;
  return out;
}

bool constraint_less(const Constraint& x, const Constraint& y) {
  auto xi = x.coeffs.begin();
  auto yi = y.coeffs.begin();
  for (; xi != x.coeffs.end() && yi != y.coeffs.end(); ++xi, ++yi) {
    if (xi->first != yi->first) return xi->first < yi->first;
    if (xi->second != yi->second) return xi->second < yi->second;
  }
  if ((xi == x.coeffs.end()) != (yi == y.coeffs.end())) return xi == x.coeffs.end();
  if (x.rel != y.rel) return static_cast<int>(x.rel) < static_cast<int>(y.rel);
  return x.rhs < y.rhs;
}

ConstraintSystem system_from_eliminator(const Eliminator& e, const std::set<Var>& keep) {
  ConstraintSystem out(keep);
  for (const Equation& eq : e.equations()) {
    Constraint c;
    c.coeffs = eq.a;
    c.rel = Rel::eq;
    c.rhs = eq.b;
    out.add(std::move(c));
  }
  for (const Row& r : e.rows()) {
    if (r.strict) throw std::logic_error("strict row escaped elimination");
    Constraint c;
    c.coeffs = r.a;
    c.rel = Rel::le;
    c.rhs = r.b;
    out.add(std::move(c));
  }
  return out;
}

ConstraintSystem contradiction_system(const std::set<Var>& vars) {
  ConstraintSystem out(vars);
  Constraint c;
  c.rel = Rel::le;
  c.rhs = -1;
  out.add(std::move(c));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

bool satisfiable(const ConstraintSystem& c) {
  Eliminator e(c);
  return eliminator_satisfiable(e, all_vars(c));
}

bool entails(const ConstraintSystem& c, const Constraint& d) {
  if (d.rel == Rel::eq) {
    Constraint le = d;
    le.rel = Rel::le;
    Constraint ge = d;
    ge.rel = Rel::ge;
    return entails(c, le) && entails(c, ge);
  }
  std::set<Var> vars = all_vars(c);
  for (const auto& [v, q] : d.coeffs) vars.insert(v);
  // c /\ not(d) must be unsatisfiable.
  Eliminator e(c);
  if (d.rel == Rel::le) {
    Coeffs neg;
    for (const auto& [v, q] : d.coeffs) neg.emplace(v, -q);
    e.add_row(std::move(neg), -d.rhs, true);
  } else {
    e.add_row(d.coeffs, d.rhs, true);
  }
  return !eliminator_satisfiable(e, vars);
}

bool entails(const ConstraintSystem& c, const ConstraintSystem& d) {
  if (!satisfiable(c)) return true;
  return std::all_of(d.conjuncts().begin(), d.conjuncts().end(),
                     [&](const Constraint& k) { return entails(c, k); });
}

bool equivalent(const ConstraintSystem& c, const ConstraintSystem& d) {
  return entails(c, d) && entails(d, c);
}

ConstraintSystem project(const ConstraintSystem& c, const std::set<Var>& keep) {
  std::set<Var> drop;
  for (Var v : all_vars(c)) {
    if (!keep.contains(v)) drop.insert(v);
  }
  Eliminator e(c);
  e.eliminate(drop);
  if (e.contradiction()) return contradiction_system(keep);
  ConstraintSystem projected = system_from_eliminator(e, keep);
  if (!satisfiable(projected)) return contradiction_system(keep);
  return canonicalize(projected);
}

Interval bounds(const ConstraintSystem& c, const LinearExpr& e) {
  if (!satisfiable(c)) throw std::domain_error("bounds of an unsatisfiable system");
  if (e.is_constant()) return Interval::closed(e.constant(), e.constant());
  std::set<Var> extra;
  for (const auto& [v, q] : e.terms()) extra.insert(v);
  const Var z = fresh_var(c, extra);
  Eliminator elim(c);
  Coeffs defining = e.terms();
  for (auto& [v, q] : defining) q = -q;
  defining.emplace(z, 1);
  elim.add_equation(std::move(defining), e.constant());
  std::set<Var> drop = all_vars(c);
  drop.insert(extra.begin(), extra.end());
  elim.eliminate(drop);

  Interval iv;
  auto tighten_lower = [&](const Rational& q) {
    if (!iv.lower || q > *iv.lower) iv.lower = q;
  };
  auto tighten_upper = [&](const Rational& q) {
    if (!iv.upper || q < *iv.upper) iv.upper = q;
  };
  for (const Equation& eq : elim.equations()) {
    if (eq.a.size() != 1 || !eq.a.contains(z)) continue;
    Rational value = eq.b / eq.a.at(z);
    tighten_lower(value);
    tighten_upper(value);
  }
  for (const Row& r : elim.rows()) {
    if (r.a.size() != 1 || !r.a.contains(z)) continue;
    const Rational& k = r.a.at(z);
    if (k > 0) {
      tighten_upper(r.b / k);
    } else {
      tighten_lower(r.b / k);
    }
  }
  return iv;
}

ConstraintSystem canonicalize(const ConstraintSystem& c) {
  if (!satisfiable(c)) throw std::domain_error("canonicalize of an unsatisfiable system");

  // Tightest lower/upper/exact value per normalized direction.
  struct Slot {
    std::optional<Rational> lower;
    std::optional<Rational> upper;
    std::optional<Rational> exact;
  };
  std::map<Coeffs, Slot> slots;
  for (const Constraint& raw : c.conjuncts()) {
    if (raw.coeffs.empty()) continue;
    Constraint k = normalized(raw);
    Slot& s = slots[k.coeffs];
    switch (k.rel) {
      case Rel::eq: s.exact = k.rhs; break;
      case Rel::ge:
        if (!s.lower || k.rhs > *s.lower) s.lower = k.rhs;
        break;
      case Rel::le:
        if (!s.upper || k.rhs < *s.upper) s.upper = k.rhs;
        break;
    }
  }
  std::vector<Constraint> rows;
  for (auto& [coeffs, s] : slots) {
    if (!s.exact && s.lower && s.upper && *s.lower == *s.upper) s.exact = s.lower;
    if (s.exact) {
      rows.push_back(Constraint{coeffs, Rel::eq, *s.exact});
      continue;
    }
    if (s.lower) rows.push_back(Constraint{coeffs, Rel::ge, *s.lower});
    if (s.upper) rows.push_back(Constraint{coeffs, Rel::le, *s.upper});
  }
  std::sort(rows.begin(), rows.end(), constraint_less);

  // Drop conjuncts entailed by the others, scanning from the back.
  for (std::size_t i = rows.size(); i-- > 0;) {
    ConstraintSystem others;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j != i) others.add(rows[j]);
    }
    if (entails(others, rows[i])) rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
  }

  ConstraintSystem out(c.variables());
  for (Constraint& k : rows) out.add(std::move(k));
  return out;
}

ConstraintSystem translation_closure(const ConstraintSystem& c) {
  const Var shift = fresh_var(c);
  ConstraintSystem shifted(c.variables());
  for (const Constraint& k : c.conjuncts()) {
    Constraint s = k;
    Rational total = 0;
    for (const auto& [v, q] : k.coeffs) total += q;
    if (total != 0) s.coeffs.emplace(shift, total);
    shifted.add(std::move(s));
  }
  shifted.add_variable(shift);
  ConstraintSystem out = project(shifted, c.variables());
  return out;
}

}  // namespace tbcover
