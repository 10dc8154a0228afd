#include "support/naive_fm.hpp"

#include <algorithm>
#include <set>

namespace oracle {

namespace {

struct Dense {
  std::vector<Var> vars;
  std::vector<DenseRow> rows;

  std::size_t index(Var v) const {
    return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin());
  }
};

Dense densify(const ConstraintSystem& c, std::vector<Var> vars) {
  Dense d;
  d.vars = std::move(vars);
  for (const tbcover::Constraint& k : c.conjuncts()) {
    DenseRow row{std::vector<Rational>(d.vars.size(), 0), k.rhs, false};
    for (const auto& [v, q] : k.coeffs) row.a[d.index(v)] = q;
    DenseRow neg = row;
    for (Rational& q : neg.a) q = -q;
    neg.b = -neg.b;
    if (k.rel != tbcover::Rel::ge) d.rows.push_back(row);
    if (k.rel != tbcover::Rel::le) d.rows.push_back(neg);
  }
  return d;
}

bool trivially_false(const DenseRow& r) { return r.strict ? r.b <= 0 : r.b < 0; }

bool all_zero(const DenseRow& r) {
  return std::all_of(r.a.begin(), r.a.end(), [](const Rational& q) { return q == 0; });
}

// Scale so the first nonzero coefficient has magnitude 1, then keep only the
// tightest row per direction.
std::vector<DenseRow> tidy(std::vector<DenseRow> rows) {
  std::vector<DenseRow> out;
  for (DenseRow& r : rows) {
    auto lead = std::find_if(r.a.begin(), r.a.end(), [](const Rational& q) { return q != 0; });
    if (lead != r.a.end()) {
      Rational s = abs(*lead);
      for (Rational& q : r.a) q /= s;
      r.b /= s;
    }
    bool merged = false;
    for (DenseRow& o : out) {
      if (o.a != r.a) continue;
      if (r.b < o.b || (r.b == o.b && r.strict)) {
        o.b = r.b;
        o.strict = r.strict;
      }
      merged = true;
      break;
    }
    if (!merged) out.push_back(std::move(r));
  }
  return out;
}

// Eliminates column k.
std::vector<DenseRow> eliminate(const std::vector<DenseRow>& rows, std::size_t k) {
  std::vector<DenseRow> pos, neg, out;
  for (const DenseRow& r : rows) {
    if (r.a[k] > 0) {
      pos.push_back(r);
    } else if (r.a[k] < 0) {
      neg.push_back(r);
    } else {
      out.push_back(r);
    }
  }
  for (const DenseRow& p : pos) {
    for (const DenseRow& n : neg) {
      const Rational sp = -n.a[k];
      const Rational sn = p.a[k];
      DenseRow r{std::vector<Rational>(p.a.size()), p.b * sp + n.b * sn, p.strict || n.strict};
      for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = p.a[i] * sp + n.a[i] * sn;
      r.a[k] = 0;
      out.push_back(std::move(r));
    }
  }
  return tidy(std::move(out));
}

// Eliminates every column not in `keep`, cheapest column first.
std::vector<DenseRow> reduce(std::vector<DenseRow> rows, std::size_t width, const std::vector<bool>& keep) {
  rows = tidy(std::move(rows));
  std::vector<bool> done = keep;
  while (true) {
    std::optional<std::size_t> best;
    std::size_t best_cost = 0;
    for (std::size_t k = 0; k < width; ++k) {
      if (done[k]) continue;
      std::size_t p = 0, n = 0;
      for (const DenseRow& r : rows) {
        p += r.a[k] > 0;
        n += r.a[k] < 0;
      }
      const std::size_t cost = p * n;
      if (!best || cost < best_cost) {
        best = k;
        best_cost = cost;
      }
    }
    if (!best) return rows;
    rows = eliminate(rows, *best);
    done[*best] = true;
    for (const DenseRow& r : rows) {
      if (all_zero(r) && trivially_false(r)) return {r};
    }
  }
}

bool rows_satisfiable(const std::vector<DenseRow>& rows, std::size_t width) {
  for (const DenseRow& r : reduce(rows, width, std::vector<bool>(width, false))) {
    if (trivially_false(r)) return false;
  }
  return true;
}

std::vector<Var> vars_of(const ConstraintSystem& c) { return {c.variables().begin(), c.variables().end()}; }

}  // namespace

bool naive_satisfiable(const ConstraintSystem& c) {
  Dense d = densify(c, vars_of(c));
  return rows_satisfiable(d.rows, d.vars.size());
}

bool naive_entails(const ConstraintSystem& c, const ConstraintSystem& goal) {
  std::set<Var> all = c.variables();
  all.insert(goal.variables().begin(), goal.variables().end());
  const std::vector<Var> vars(all.begin(), all.end());
  const Dense base = densify(c, vars);
  for (const DenseRow& w : densify(goal, vars).rows) {
    // not (a.x <= b)  <=>  -a.x < -b
    DenseRow neg{w.a, -w.b, true};
    for (Rational& q : neg.a) q = -q;
    std::vector<DenseRow> rows = base.rows;
    rows.push_back(std::move(neg));
    if (rows_satisfiable(rows, vars.size())) return false;
  }
  return true;
}

std::pair<std::optional<Rational>, std::optional<Rational>> naive_bounds(const ConstraintSystem& c,
                                                                         const tbcover::LinearExpr& e) {
  std::uint32_t fresh = 0;
  for (Var v : c.variables()) fresh = std::max(fresh, v.id + 1);
  for (const auto& [v, q] : e.terms()) fresh = std::max(fresh, v.id + 1);
  const Var z{fresh};
  ConstraintSystem extended = c;
  for (const auto& [v, q] : e.terms()) extended.add_variable(v);
  extended.add(tbcover::LinearExpr::variable(z), tbcover::Rel::eq, e);
  Dense d = densify(extended, vars_of(extended));
  std::vector<bool> keep(d.vars.size(), false);
  const std::size_t zi = d.index(z);
  keep[zi] = true;
  std::optional<Rational> lo, hi;
  for (const DenseRow& r : reduce(d.rows, d.vars.size(), keep)) {
    const Rational& q = r.a[zi];
    if (q > 0) {
      Rational v = r.b / q;
      if (!hi || v < *hi) hi = v;
    } else if (q < 0) {
      Rational v = r.b / q;
      if (!lo || v > *lo) lo = v;
    }
  }
  return {lo, hi};
}

bool naive_extends(const ConstraintSystem& c, const std::map<Var, Rational>& point) {
  ConstraintSystem pinned = c;
  for (const auto& [v, q] : point) pinned.add(tbcover::LinearExpr::variable(v), tbcover::Rel::eq, tbcover::LinearExpr(q));
  return naive_satisfiable(pinned);
}

ConstraintSystem random_system(std::mt19937& rng, int vars, int conjuncts) {
  std::uniform_int_distribution<int> coeff(-3, 3), rhs(-5, 5), rel(0, 5), pick(0, vars - 1), width(1, std::min(3, vars));
  ConstraintSystem c;
  for (int i = 0; i < vars; ++i) c.add_variable(Var{static_cast<std::uint32_t>(i)});
  for (int k = 0; k < conjuncts; ++k) {
    tbcover::LinearExpr lhs;
    const int w = width(rng);
    for (int i = 0; i < w; ++i) {
      int q = coeff(rng);
      if (q == 0) q = 1;
      lhs.add_term(Var{static_cast<std::uint32_t>(pick(rng))}, q);
    }
    if (lhs.is_constant()) lhs.add_term(Var{0}, 1);
    const int r = rel(rng);
    // equalities are rarer; they collapse the solution set quickly
    const tbcover::Rel relation = r == 0 ? tbcover::Rel::eq : (r % 2 ? tbcover::Rel::le : tbcover::Rel::ge);
    c.add(lhs, relation, tbcover::LinearExpr(Rational(rhs(rng))));
  }
  return c;
}

}  // namespace oracle
