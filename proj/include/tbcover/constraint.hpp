#ifndef TBCOVER_CONSTRAINT_HPP
#define TBCOVER_CONSTRAINT_HPP

// Exact linear arithmetic over rational-valued timestamp variables.
//
// A ConstraintSystem is a conjunction of linear (in)equalities
//   sum_i a_i * x_i  REL  b,   REL in {<=, >=, =}
// with rational a_i and b. Every query (satisfiability, entailment,
// projection, bounds) is decided by Fourier-Motzkin elimination with
// strictness tracking, so no rounding is ever introduced.

#include "tbcover/rational.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tbcover {

struct Var {
  std::uint32_t id = 0;
  auto operator<=>(const Var&) const = default;
};

/// Sum of rational multiples of variables plus a constant.
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(Rational constant) : constant_(std::move(constant)) {}
  static LinearExpr variable(Var v, Rational coeff = 1);

  const std::map<Var, Rational>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }
  Rational coefficient(Var v) const;
  bool is_constant() const { return terms_.empty(); }

  LinearExpr& add_term(Var v, const Rational& coeff);
  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(const Rational& k);
  LinearExpr& operator+=(const Rational& k);

  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
  friend LinearExpr operator*(LinearExpr a, const Rational& k) { return a *= k; }
  friend LinearExpr operator+(LinearExpr a, const Rational& k) { return a += k; }
  friend bool operator==(const LinearExpr&, const LinearExpr&) = default;

  /// Substitutes variables through `rename`; unmapped variables are kept.
  LinearExpr renamed(const std::map<Var, Var>& rename) const;

 private:
  std::map<Var, Rational> terms_;
  Rational constant_ = 0;
};

enum class Rel { le, ge, eq };

/// sum(coeffs) REL rhs. Variables with zero coefficient are never stored.
struct Constraint {
  std::map<Var, Rational> coeffs;
  Rel rel = Rel::le;
  Rational rhs = 0;

  /// Builds `lhs REL rhs` by moving every variable to the left.
  static Constraint make(const LinearExpr& lhs, Rel rel, const LinearExpr& rhs);
  static Constraint make(const LinearExpr& lhs, Rel rel, const Rational& rhs) {
    return make(lhs, rel, LinearExpr(rhs));
  }

  bool holds(const std::map<Var, Rational>& point) const;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Closed interval with optional infinite ends. `empty` marks the empty set.
struct Interval {
  std::optional<Rational> lower;  // nullopt = -inf
  std::optional<Rational> upper;  // nullopt = +inf
  bool empty = false;

  static Interval make_empty() { return Interval{std::nullopt, std::nullopt, true}; }
  static Interval closed(Rational lo, Rational hi);

  bool contains(const Interval& other) const;
  bool contains(const Rational& q) const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& iv);

using VarNamer = std::function<std::string(Var)>;

/// Default naming: "x<id>".
std::string default_var_name(Var v);

class ConstraintSystem {
 public:
  ConstraintSystem() = default;
  explicit ConstraintSystem(std::set<Var> variables) : variables_(std::move(variables)) {}

  const std::set<Var>& variables() const { return variables_; }
  const std::vector<Constraint>& conjuncts() const { return conjuncts_; }
  bool empty() const { return conjuncts_.empty(); }

  void add_variable(Var v) { variables_.insert(v); }
  /// Appends a conjunct, registering its variables.
  void add(Constraint c);
  void add(const LinearExpr& lhs, Rel rel, const LinearExpr& rhs) {
    add(Constraint::make(lhs, rel, rhs));
  }
  /// Conjunction of both systems over the union of their variables.
  ConstraintSystem conjoin(const ConstraintSystem& other) const;
  ConstraintSystem renamed(const std::map<Var, Var>& rename) const;

  bool holds(const std::map<Var, Rational>& point) const;

  /// One conjunct per line: `a1*x1 + a2*x2 <= q`, in stored order.
  std::string to_string(const VarNamer& namer = default_var_name) const;
  std::vector<std::string> conjunct_strings(const VarNamer& namer = default_var_name) const;

  friend bool operator==(const ConstraintSystem&, const ConstraintSystem&) = default;

 private:
  std::set<Var> variables_;
  std::vector<Constraint> conjuncts_;
};

std::string to_string(const Constraint& c, const VarNamer& namer = default_var_name);

bool satisfiable(const ConstraintSystem& c);

/// True iff every solution of `c` satisfies `d`.
bool entails(const ConstraintSystem& c, const ConstraintSystem& d);
bool entails(const ConstraintSystem& c, const Constraint& d);

bool equivalent(const ConstraintSystem& c, const ConstraintSystem& d);

/// Existential projection onto `keep` (Fourier-Motzkin elimination of the
/// rest). The result is canonical when `c` is satisfiable.
ConstraintSystem project(const ConstraintSystem& c, const std::set<Var>& keep);

/// Tightest a, b with c => a <= e <= b. Throws std::domain_error when c is
/// unsatisfiable.
Interval bounds(const ConstraintSystem& c, const LinearExpr& e);

/// Equivalent system without redundant conjuncts; rows have integer
/// coefficients with gcd 1, positive leading coefficient, sorted order.
/// Throws std::domain_error when c is unsatisfiable.
ConstraintSystem canonicalize(const ConstraintSystem& c);

/// Closure of the solution set under translation of every variable by the
/// same amount: { x + d*1 : x solves c, d rational }.
ConstraintSystem translation_closure(const ConstraintSystem& c);

}  // namespace tbcover

#endif  // TBCOVER_CONSTRAINT_HPP
