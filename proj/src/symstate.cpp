#include "tbcover/symstate.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace tbcover {

std::string to_string(const OmegaCount& c) { return c.omega ? "omega" : std::to_string(c.count); }

bool dominates(const VMarking& a, const VMarking& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (!(b[p] <= a[p])) return false;
  }
  return true;
}

std::string stamp_name(Var v) { return "T" + std::to_string(v.id); }

std::vector<Var> SymbolicState::variables() const {
  std::vector<Var> out;
  for (const PlaceTokens& p : marking) out.insert(out.end(), p.stamps.begin(), p.stamps.end());
  return out;
}

std::vector<std::string> SymbolicState::marking_strings(const TBNet& net) const {
  std::vector<std::string> out;
  for (PlaceId p = 0; p < marking.size(); ++p) {
    const PlaceTokens& tokens = marking[p];
    std::vector<std::string> items;
    for (Var v : tokens.stamps) items.push_back(stamp_name(v));
    if (tokens.anonymous == 1) items.emplace_back("TA");
    if (tokens.anonymous > 1) items.push_back("TA*" + std::to_string(tokens.anonymous));
    if (tokens.omega) items.emplace_back("TW");
    if (items.empty()) continue;
    std::string s = (p < net.places.size() ? net.places[p] : "#" + std::to_string(p)) + "{";
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i];
    out.push_back(s + "}");
  }
  return out;
}

std::string SymbolicState::to_string(const TBNet& net) const {
  std::string out;
  for (const std::string& m : marking_strings(net)) out += (out.empty() ? "" : " ") + m;
  if (out.empty()) out = "{}";
  out += " |";
  std::vector<std::string> lines = constraint.conjunct_strings(stamp_name);
  if (lines.empty()) return out + " true";
  for (std::size_t i = 0; i < lines.size(); ++i) out += (i ? ", " : " ") + lines[i];
  return out;
}

UMarking u_marking(const SymbolicState& s) {
  UMarking u;
  u.reserve(s.marking.size());
  for (const PlaceTokens& p : s.marking) u.push_back(static_cast<std::uint32_t>(p.stamps.size()));
  return u;
}

VMarking v_marking(const SymbolicState& s) {
  VMarking v;
  v.reserve(s.marking.size());
  for (const PlaceTokens& p : s.marking) {
    v.push_back(p.omega ? OmegaCount::infinite() : OmegaCount{p.anonymous, false});
  }
  return v;
}

SymbolicState erase_ta(const SymbolicState& s) {
  SymbolicState out = s;
  for (PlaceTokens& p : out.marking) {
    p.anonymous = 0;
    p.omega = false;
  }
  return out;
}

SymbolicState merge_ta_omega(SymbolicState s) {
  for (PlaceTokens& p : s.marking) {
    if (p.omega) p.anonymous = 0;
  }
  return s;
}

SymbolicState normalize_variables(const SymbolicState& s) {
  SymbolicState out;
  out.marking = s.marking;
  std::map<Var, Var> rename;
  std::set<Var> kept_old;
  std::uint32_t next = 0;
  for (PlaceTokens& p : out.marking) {
    for (Var& v : p.stamps) {
      kept_old.insert(v);
      Var fresh{next++};
      rename.emplace(v, fresh);
      v = fresh;
    }
  }
  ConstraintSystem restricted = project(s.constraint, kept_old);
  out.constraint = restricted.renamed(rename);
  out.constraint = canonicalize(out.constraint);
  return out;
}

SymbolicState initial_state(const TBNet& net) {
  SymbolicState s;
  s.marking.resize(net.places.size());
  std::map<Var, Var> first_occurrence;
  ConstraintSystem c;
  std::uint32_t next = 0;
  for (PlaceId p = 0; p < net.places.size(); ++p) {
    for (Var original : net.initial_marking.at(p)) {
      Var fresh{next++};
      s.marking[p].stamps.push_back(fresh);
      c.add_variable(fresh);
      auto [it, inserted] = first_occurrence.try_emplace(original, fresh);
      if (!inserted) c.add(LinearExpr::variable(fresh), Rel::eq, LinearExpr::variable(it->second));
    }
  }
  c = c.conjoin(net.initial_constraint.renamed(first_occurrence));
  std::set<Var> keep;
  for (Var v : s.variables()) keep.insert(v);
  s.constraint = project(c, keep);
  return normalize_variables(anonymize(s, net));
}

TimeFrame frame_for(const TBNet& net) {
  return net.translation_invariant() ? TimeFrame::relative : TimeFrame::absolute;
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

StateProfile::StateProfile(const SymbolicState& s, TimeFrame frame)
    : state_(std::make_shared<const SymbolicState>(s)),
      u_(u_marking(s)),
      v_(v_marking(s)),
      frame_constraint_(frame == TimeFrame::relative ? translation_closure(s.constraint) : s.constraint),
      vars_(s.variables()) {
  needs_search_ = std::any_of(u_.begin(), u_.end(), [](std::uint32_t n) { return n > 1; });
}

namespace {

using Bound = std::optional<Rational>;  // nullopt = +inf

void tighten(Bound& cell, const Rational& c) {
  if (!cell || c < *cell) cell = c;
}

// All pairwise gaps of a pure difference system by shortest paths; index n is
// the zero clock. nullopt when some conjunct is not a difference constraint.
std::optional<std::vector<std::vector<Bound>>> difference_closure(const ConstraintSystem& c,
                                                                 const std::vector<Var>& vars) {
  const std::size_t n = vars.size();
  auto index = [&](Var v) -> std::optional<std::size_t> {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    if (it == vars.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - vars.begin());
  };
  std::vector<std::vector<Bound>> d(n + 1, std::vector<Bound>(n + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][i] = Rational(0);
  for (const Constraint& k : c.conjuncts()) {
    // normalized to x_a - x_b <= ub (and >= lb), b = n for a single variable
    std::size_t a = n, b = n;
    Rational scale;
    if (k.coeffs.size() == 1) {
      const auto& [v, q] = *k.coeffs.begin();
      auto i = index(v);
      if (!i) return std::nullopt;
      a = *i;
      scale = q;
    } else if (k.coeffs.size() == 2) {
      auto first = k.coeffs.begin();
      auto second = std::next(first);
      if (first->second != -second->second) return std::nullopt;
      auto i = index(first->first);
      auto j = index(second->first);
      if (!i || !j) return std::nullopt;
      a = *i;
      b = *j;
      scale = first->second;
    } else {
      return std::nullopt;
    }
    const Rational bound = k.rhs / scale;
    const bool flip = scale < 0;
    const bool upper = k.rel == Rel::eq || (k.rel == Rel::le) != flip;
    const bool lower = k.rel == Rel::eq || (k.rel == Rel::ge) != flip;
    if (upper) tighten(d[a][b], bound);
    if (lower) tighten(d[b][a], -bound);
  }
  for (std::size_t m = 0; m <= n; ++m) {
    for (std::size_t i = 0; i <= n; ++i) {
      if (!d[i][m]) continue;
      for (std::size_t j = 0; j <= n; ++j) {
        if (d[m][j]) tighten(d[i][j], *d[i][m] + *d[m][j]);
      }
    }
  }
  for (std::size_t i = 0; i <= n; ++i) {
    if (*d[i][i] < 0) return std::nullopt;
  }
  return d;
}

}  // namespace

const Interval& StateProfile::gap(std::size_t i, std::size_t j) const {
  if (gaps_.empty()) {
    const std::size_t n = vars_.size();
    gaps_.assign(n, std::vector<Interval>(n));
    std::vector<Var> unique = vars_;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    if (auto d = difference_closure(frame_constraint_, unique)) {
      const std::size_t zero = unique.size();
      std::vector<std::size_t> slot(n);
      for (std::size_t a = 0; a < n; ++a) {
        slot[a] = static_cast<std::size_t>(std::lower_bound(unique.begin(), unique.end(), vars_[a]) - unique.begin());
      }
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          const std::size_t i = slot[a];
          const std::size_t j = a == b ? zero : slot[b];
          Interval& iv = gaps_[a][b];
          iv.upper = (*d)[i][j];
          if ((*d)[j][i]) iv.lower = -*(*d)[j][i];
        }
      }
    } else {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          LinearExpr e = LinearExpr::variable(vars_[a]);
          if (a != b) e.add_term(vars_[b], -1);
          gaps_[a][b] = bounds(frame_constraint_, e);
        }
      }
    }
  }
  return gaps_.at(i).at(j);
}

namespace {

struct TokenSlot {
  PlaceId place;
  std::size_t index_in_state;  // position in the flattened variable list
  Var var;
};

std::vector<TokenSlot> flatten(const SymbolicState& s) {
  std::vector<TokenSlot> out;
  std::size_t k = 0;
  for (PlaceId p = 0; p < s.marking.size(); ++p) {
    for (Var v : s.marking[p].stamps) out.push_back(TokenSlot{p, k++, v});
  }
  return out;
}

bool constraints_match(const StateProfile& a, const StateProfile& b, const Bijection& a_to_b,
                       MatchMode mode) {
  std::map<Var, Var> b_to_a;
  for (const auto& [x, y] : a_to_b) b_to_a.emplace(y, x);
  ConstraintSystem b_renamed = b.frame_constraint().renamed(b_to_a);
  if (mode == MatchMode::equivalent) return equivalent(a.frame_constraint(), b_renamed);
  return entails(b_renamed, a.frame_constraint());
}

bool gap_compatible(const Interval& ga, const Interval& gb, MatchMode mode) {
  return mode == MatchMode::equivalent ? ga == gb : ga.contains(gb);
}

}  // namespace

std::optional<Bijection> correspondence(const StateProfile& a, const StateProfile& b, MatchMode mode) {
  if (a.u() != b.u()) return std::nullopt;
  const std::vector<TokenSlot> left = flatten(a.state());
  const std::vector<TokenSlot> right = flatten(b.state());
  if (!a.needs_search() && !b.needs_search()) {
    Bijection direct;
    for (std::size_t i = 0; i < left.size(); ++i) direct.emplace(left[i].var, right[i].var);
    if (constraints_match(a, b, direct, mode)) return direct;
    return std::nullopt;
  }

  std::vector<std::size_t> assigned(left.size());
  std::vector<bool> used(right.size(), false);
  std::optional<Bijection> found;
  std::function<void(std::size_t)> search = [&](std::size_t i) {
    if (found) return;
    if (i == left.size()) {
      Bijection candidate;
      for (std::size_t k = 0; k < left.size(); ++k) candidate.emplace(left[k].var, right[assigned[k]].var);
      if (constraints_match(a, b, candidate, mode)) found = std::move(candidate);
      return;
    }
    for (std::size_t r = 0; r < right.size() && !found; ++r) {
      if (used[r] || right[r].place != left[i].place) continue;
      bool ok = gap_compatible(a.gap(i, i), b.gap(r, r), mode);
      for (std::size_t k = 0; k < i && ok; ++k) {
        ok = gap_compatible(a.gap(i, k), b.gap(r, assigned[k]), mode);
      }
      if (!ok) continue;
      used[r] = true;
      assigned[i] = r;
      search(i + 1);
      used[r] = false;
    }
  };
  search(0);
  return found;
}

std::optional<Bijection> correspondence(const SymbolicState& a, const SymbolicState& b, TimeFrame frame,
                                        MatchMode mode) {
  return correspondence(StateProfile(a, frame), StateProfile(b, frame), mode);
}

bool covers(const StateProfile& a, const StateProfile& b) {
  return a.u() == b.u() && dominates(a.v(), b.v()) &&
         correspondence(a, b, MatchMode::equivalent).has_value();
}

bool covers(const SymbolicState& a, const SymbolicState& b, TimeFrame frame) {
  return covers(StateProfile(a, frame), StateProfile(b, frame));
}

bool properly_covers(const StateProfile& a, const StateProfile& b) {
  return a.v() != b.v() && covers(a, b);
}

bool includes(const StateProfile& a, const StateProfile& b) {
  return a.u() == b.u() && a.v() == b.v() && correspondence(a, b, MatchMode::included).has_value();
}

bool includes(const SymbolicState& a, const SymbolicState& b, TimeFrame frame) {
  return includes(StateProfile(a, frame), StateProfile(b, frame));
}

bool strictly_includes(const StateProfile& a, const StateProfile& b) {
  return includes(a, b) && !includes(b, a);
}

bool same_state(const StateProfile& a, const StateProfile& b) {
  return a.u() == b.u() && a.v() == b.v() && correspondence(a, b, MatchMode::equivalent).has_value();
}

bool erased_includes(const StateProfile& a, const StateProfile& b) {
  return a.u() == b.u() && correspondence(a, b, MatchMode::included).has_value();
}

// ---------------------------------------------------------------------------
// Firing
// ---------------------------------------------------------------------------

char to_char(EdgeType t) { return t == EdgeType::A ? 'A' : 'E'; }

std::string to_string(const EdgeAnnotation& a) {
  return a.transition + " " + to_char(a.src_type) + to_char(a.trgt_type) + " " + to_string(a.time);
}

namespace {

Var next_free_var(const SymbolicState& s) {
  std::uint32_t next = 0;
  for (Var v : s.constraint.variables()) next = std::max(next, v.id + 1);
  for (Var v : s.variables()) next = std::max(next, v.id + 1);
  return Var{next};
}

// Arcs merged per place, in place order.
std::vector<Arc> merged_arcs(const std::vector<Arc>& arcs) {
  std::map<PlaceId, unsigned> weights;
  for (const Arc& a : arcs) weights[a.place] += a.weight;
  std::vector<Arc> out;
  for (const auto& [p, w] : weights) out.push_back(Arc{p, w});
  return out;
}

void combinations(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& emit) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      emit(idx);
      return;
    }
    for (std::size_t i = start; i + (k - depth) <= n; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

// Every multiset of tokens that satisfies the preset of `t`.
std::vector<std::vector<TokenPick>> token_choices(const SymbolicState& s, const Transition& t) {
  std::vector<std::vector<TokenPick>> acc{{}};
  for (const Arc& arc : merged_arcs(t.preset)) {
    const PlaceTokens& tokens = s.marking.at(arc.place);
    std::vector<std::vector<TokenPick>> options;
    const std::size_t stamped = tokens.stamps.size();
    for (std::size_t j = std::min<std::size_t>(arc.weight, stamped) + 1; j-- > 0;) {
      const std::size_t ta_needed = arc.weight - j;
      if (ta_needed > 0 && !tokens.omega && tokens.anonymous < ta_needed) continue;
      combinations(stamped, j, [&](const std::vector<std::size_t>& idx) {
        std::vector<TokenPick> picks;
        for (std::size_t i : idx) picks.push_back(TokenPick{arc.place, i});
        for (std::size_t i = 0; i < ta_needed; ++i) picks.push_back(TokenPick{arc.place, std::nullopt});
        options.push_back(std::move(picks));
      });
    }
    std::vector<std::vector<TokenPick>> next;
    for (const auto& prefix : acc) {
      for (const auto& option : options) {
        auto combined = prefix;
        combined.insert(combined.end(), option.begin(), option.end());
        next.push_back(std::move(combined));
      }
    }
    acc = std::move(next);
    if (acc.empty()) break;
  }
  return acc;
}

Constraint newest_assumption(Var w, Var other) {
  return Constraint::make(LinearExpr::variable(w), Rel::ge, LinearExpr::variable(other));
}

struct NewestCase {
  std::optional<Var> newest;
  std::vector<Constraint> assumptions;
};

// Which timestamp of `group` is the largest: a single entailed answer, or a
// case split over the candidates that are consistent with `c`.
std::vector<NewestCase> newest_cases(const ConstraintSystem& c, const std::vector<Var>& group) {
  if (group.empty()) return {NewestCase{}};
  if (group.size() == 1) return {NewestCase{group.front(), {}}};
  std::vector<NewestCase> split;
  for (Var w : group) {
    NewestCase nc{w, {}};
    for (Var other : group) {
      if (other != w) nc.assumptions.push_back(newest_assumption(w, other));
    }
    ConstraintSystem as_system;
    for (const Constraint& k : nc.assumptions) as_system.add(k);
    if (entails(c, as_system)) return {NewestCase{w, {}}};
    if (satisfiable(c.conjoin(as_system))) split.push_back(std::move(nc));
  }
  return split;
}

struct ResolvedBinding {
  Binding binding;
  std::vector<Constraint> assumptions;
};

// Case splits for the groups a time function set depends on.
std::vector<ResolvedBinding> resolve_binding(const SymbolicState& s, const std::vector<TokenPick>& picks,
                                             bool need_enab, const std::set<PlaceId>& places) {
  std::vector<Var> all;
  std::map<PlaceId, std::vector<Var>> per_place;
  for (const TokenPick& pick : picks) {
    if (!pick.stamp) continue;
    Var v = s.marking.at(pick.place).stamps.at(*pick.stamp);
    all.push_back(v);
    per_place[pick.place].push_back(v);
  }
  std::vector<ResolvedBinding> acc{ResolvedBinding{Binding{picks, std::nullopt, {}}, {}}};
  auto extend = [&](const std::vector<Var>& group, const std::function<void(Binding&, Var)>& set) {
    std::vector<ResolvedBinding> next;
    for (const ResolvedBinding& partial : acc) {
      ConstraintSystem ctx = s.constraint;
      for (const Constraint& k : partial.assumptions) ctx.add(k);
      for (const NewestCase& nc : newest_cases(ctx, group)) {
        ResolvedBinding r = partial;
        if (nc.newest) set(r.binding, *nc.newest);
        r.assumptions.insert(r.assumptions.end(), nc.assumptions.begin(), nc.assumptions.end());
        next.push_back(std::move(r));
      }
    }
    acc = std::move(next);
  };
  if (need_enab) extend(all, [](Binding& b, Var v) { b.enab = v; });
  for (PlaceId p : places) {
    extend(per_place[p], [p](Binding& b, Var v) { b.newest[p] = v; });
  }
  return acc;
}

// Value of a time function under a binding; nullopt when it depends on a
// group made only of TA tokens.
std::optional<LinearExpr> evaluate(const TimeExpr& e, const Binding& b) {
  LinearExpr out(e.constant);
  if (e.enab_coeff != 0) {
    if (!b.enab) return std::nullopt;
    out.add_term(*b.enab, e.enab_coeff);
  }
  for (const auto& [p, q] : e.place_coeffs) {
    if (q == 0) continue;
    auto it = b.newest.find(p);
    if (it == b.newest.end()) return std::nullopt;
    out.add_term(it->second, q);
  }
  return out;
}

std::set<PlaceId> referenced_places(const TimeExpr& a, const TimeExpr* b = nullptr) {
  std::set<PlaceId> out;
  for (const auto& [p, q] : a.place_coeffs) {
    if (q != 0) out.insert(p);
  }
  if (b) {
    for (const auto& [p, q] : b->place_coeffs) {
      if (q != 0) out.insert(p);
    }
  }
  return out;
}

// Deadline alternatives of one strong binding: firing time <= expr, under
// the listed assumptions.
struct DeadlineCase {
  LinearExpr bound;
  std::vector<Constraint> assumptions;
};

struct StrongDeadline {
  std::vector<DeadlineCase> cases;
  // no negative coefficients: every case's bound is at most the real deadline
  bool monotone = false;
};

bool monotone(const TimeExpr& e) {
  if (e.enab_coeff < 0) return false;
  return std::all_of(e.place_coeffs.begin(), e.place_coeffs.end(), [](const auto& pq) { return pq.second >= 0; });
}

std::vector<StrongDeadline> strong_deadlines(const SymbolicState& s, const TBNet& net) {
  std::vector<StrongDeadline> out;
  for (const Transition& t : net.transitions) {
    if (t.strength != Strength::strong) continue;
    for (const auto& picks : token_choices(s, t)) {
      std::vector<DeadlineCase> alternatives;
      bool dropped = false;
      for (const ResolvedBinding& r :
           resolve_binding(s, picks, t.upper.enab_coeff != 0, referenced_places(t.upper))) {
        std::optional<LinearExpr> bound = evaluate(t.upper, r.binding);
        if (!bound) {
          dropped = true;
          break;
        }
        alternatives.push_back(DeadlineCase{std::move(*bound), r.assumptions});
      }
      if (!dropped && !alternatives.empty()) out.push_back(StrongDeadline{std::move(alternatives), monotone(t.upper)});
    }
  }
  return out;
}

std::vector<Constraint> own_constraints(const Transition& t, const Binding& b, Var tau) {
  std::vector<Constraint> out;
  const LinearExpr time = LinearExpr::variable(tau);
  if (b.enab) out.push_back(Constraint::make(time, Rel::ge, LinearExpr::variable(*b.enab)));
  if (auto lo = evaluate(t.lower, b)) out.push_back(Constraint::make(time, Rel::ge, *lo));
  if (auto hi = evaluate(t.upper, b)) out.push_back(Constraint::make(time, Rel::le, *hi));
  return out;
}

}  // namespace

ConstraintSystem firing_system(const SymbolicState& s, const TBNet& net, const Firing& f, Var time_var) {
  ConstraintSystem c = s.constraint;
  c.add_variable(time_var);
  for (const Constraint& k : f.assumptions) c.add(k);
  for (Constraint& k : own_constraints(net.transitions.at(f.transition), f.binding, time_var)) c.add(std::move(k));
  for (const LinearExpr& d : f.deadlines) c.add(LinearExpr::variable(time_var), Rel::le, d);
  return c;
}

std::vector<Firing> enabled_transitions(const SymbolicState& s, const TBNet& net) {
  std::vector<Firing> out;
  const Var tau = next_free_var(s);
  const auto deadlines = strong_deadlines(s, net);

  std::vector<LinearExpr> fixed;
  std::vector<Constraint> fixed_assumptions;
  std::vector<const StrongDeadline*> split;
  for (const StrongDeadline& d : deadlines) {
    const std::vector<DeadlineCase>& alternatives = d.cases;
    if (alternatives.size() == 1) {
      if (std::find(fixed.begin(), fixed.end(), alternatives.front().bound) == fixed.end()) {
        fixed.push_back(alternatives.front().bound);
      }
      fixed_assumptions.insert(fixed_assumptions.end(), alternatives.front().assumptions.begin(),
                               alternatives.front().assumptions.end());
    } else {
      split.push_back(&d);
    }
  }

  for (TransitionId ti = 0; ti < net.transitions.size(); ++ti) {
    const Transition& t = net.transitions[ti];
    for (const auto& picks : token_choices(s, t)) {
      const bool need_enab = true;
      for (ResolvedBinding& r : resolve_binding(s, picks, need_enab, referenced_places(t.lower, &t.upper))) {
        Firing base{ti, std::move(r.binding), std::move(r.assumptions), fixed};
        base.assumptions.insert(base.assumptions.end(), fixed_assumptions.begin(), fixed_assumptions.end());
        // Depth-first over the deadline case splits, pruning unsatisfiable prefixes.
        std::function<void(std::size_t, Firing&)> expand = [&](std::size_t k, Firing& f) {
          if (!satisfiable(firing_system(s, net, f, tau))) return;
          if (k == split.size()) {
            out.push_back(f);
            return;
          }
          const StrongDeadline& d = *split[k];
          if (d.monotone) {
            // already below one candidate, hence below the real deadline
            const ConstraintSystem now = firing_system(s, net, f, tau);
            for (const DeadlineCase& dc : d.cases) {
              if (entails(now, Constraint::make(LinearExpr::variable(tau), Rel::le, dc.bound))) {
                expand(k + 1, f);
                return;
              }
            }
          }
          for (const DeadlineCase& dc : d.cases) {
            Firing g = f;
            g.deadlines.push_back(dc.bound);
            g.assumptions.insert(g.assumptions.end(), dc.assumptions.begin(), dc.assumptions.end());
            expand(k + 1, g);
          }
        };
        expand(0, base);
      }
    }
  }
  return out;
}

Successor successor(const SymbolicState& s, const TBNet& net, const Firing& f) {
  const Transition& t = net.transitions.at(f.transition);
  const Var tau = next_free_var(s);
  const ConstraintSystem fire = firing_system(s, net, f, tau);
  if (!satisfiable(fire)) throw std::domain_error("firing of " + t.name + " is not enabled");

  SymbolicState next;
  next.marking = s.marking;
  std::map<PlaceId, std::vector<std::size_t>> removed;
  for (const TokenPick& pick : f.binding.picks) {
    PlaceTokens& tokens = next.marking.at(pick.place);
    if (pick.stamp) {
      removed[pick.place].push_back(*pick.stamp);
    } else if (!tokens.omega) {
      if (tokens.anonymous == 0) throw std::logic_error("binding picks a missing TA token");
      --tokens.anonymous;
    }
  }
  for (auto& [p, indices] : removed) {
    std::sort(indices.rbegin(), indices.rend());
    auto& stamps = next.marking.at(p).stamps;
    for (std::size_t i : indices) stamps.erase(stamps.begin() + static_cast<std::ptrdiff_t>(i));
  }

  ConstraintSystem with_outputs = fire;
  std::uint32_t fresh = tau.id + 1;
  for (const Arc& arc : t.postset) {
    for (unsigned k = 0; k < arc.weight; ++k) {
      Var v{fresh++};
      next.marking.at(arc.place).stamps.push_back(v);
      with_outputs.add(LinearExpr::variable(v), Rel::eq, LinearExpr::variable(tau));
    }
  }
  std::set<Var> keep;
  for (Var v : next.variables()) keep.insert(v);
  next.constraint = project(with_outputs, keep);

  std::set<Var> source_vars;
  for (Var v : s.variables()) source_vars.insert(v);
  EdgeAnnotation annotation;
  annotation.transition = t.name;
  annotation.src_type = entails(s.constraint, project(fire, source_vars)) ? EdgeType::A : EdgeType::E;
  annotation.trgt_type = EdgeType::A;
  LinearExpr delay = LinearExpr::variable(tau);
  if (f.binding.enab) delay.add_term(*f.binding.enab, -1);
  annotation.time = bounds(fire, delay);

  return Successor{normalize_variables(merge_ta_omega(anonymize(next, net))), std::move(annotation)};
}

std::vector<Successor> successors(const SymbolicState& s, const TBNet& net) {
  std::vector<Successor> out;
  std::vector<std::pair<TransitionId, StateProfile>> seen;
  for (const Firing& f : enabled_transitions(s, net)) {
    Successor next = successor(s, net, f);
    StateProfile profile(next.state, TimeFrame::absolute);
    bool duplicate = false;
    for (const auto& [ti, other] : seen) {
      if (ti == f.transition && same_state(other, profile)) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    seen.emplace_back(f.transition, std::move(profile));
    out.push_back(std::move(next));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Anonymization
// ---------------------------------------------------------------------------

namespace {

// A token with timestamp `x` at `p` is never the newest timestamp of a
// binding of `t` when some other input place of `t` holds only timestamped
// tokens, all provably no older than x.
bool dominated_in(const SymbolicState& s, const Transition& t, PlaceId p, Var x) {
  if (t.lower.references_place(p) || t.upper.references_place(p)) return false;
  for (const Arc& arc : merged_arcs(t.preset)) {
    if (arc.place == p) continue;
    const PlaceTokens& q = s.marking.at(arc.place);
    if (q.stamps.empty() || q.anonymous > 0 || q.omega) continue;
    const bool all_newer = std::all_of(q.stamps.begin(), q.stamps.end(), [&](Var y) {
      return entails(s.constraint, Constraint::make(LinearExpr::variable(x), Rel::le, LinearExpr::variable(y)));
    });
    if (all_newer) return true;
  }
  return false;
}

bool can_anonymize(const SymbolicState& s, const TBNet& net, PlaceId p, Var x) {
  for (const Transition& t : net.transitions) {
    if (!t.consumes(p)) continue;
    if (!dominated_in(s, t, p, x)) return false;
  }
  return true;
}

}  // namespace

SymbolicState anonymize(const SymbolicState& s, const TBNet& net) {
  SymbolicState out = s;
  bool changed = true;
  while (changed) {
    changed = false;
    for (PlaceId p = 0; p < out.marking.size() && !changed; ++p) {
      auto& stamps = out.marking[p].stamps;
      for (std::size_t i = 0; i < stamps.size(); ++i) {
        if (!can_anonymize(out, net, p, stamps[i])) continue;
        stamps.erase(stamps.begin() + static_cast<std::ptrdiff_t>(i));
        ++out.marking[p].anonymous;
        changed = true;
        break;
      }
    }
  }
  std::set<Var> keep;
  for (Var v : out.variables()) keep.insert(v);
  ConstraintSystem restricted = project(out.constraint, keep);
  out.constraint = restricted;
  return merge_ta_omega(std::move(out));
}

}  // namespace tbcover
