#ifndef TBCOVER_SYMSTATE_HPP
#define TBCOVER_SYMSTATE_HPP

// Symbolic states <M^omega, C> of a TB net and their successor relation.
//
// Every place holds a list of timestamped tokens (one constraint variable
// each), a count of time-anonymous (TA) tokens, and optionally the TA^omega
// symbol standing for arbitrarily many TA tokens.

#include "tbcover/constraint.hpp"
#include "tbcover/net.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tbcover {

struct PlaceTokens {
  std::vector<Var> stamps;
  std::uint32_t anonymous = 0;
  bool omega = false;
  friend bool operator==(const PlaceTokens&, const PlaceTokens&) = default;
};

/// Number of TA tokens at a place, possibly omega. Ordered n < omega.
struct OmegaCount {
  std::uint32_t count = 0;
  bool omega = false;

  static OmegaCount infinite() { return OmegaCount{0, true}; }
  friend bool operator==(const OmegaCount&, const OmegaCount&) = default;
  friend bool operator<=(const OmegaCount& a, const OmegaCount& b) {
    return b.omega || (!a.omega && a.count <= b.count);
  }
  friend bool operator<(const OmegaCount& a, const OmegaCount& b) { return a <= b && !(a == b); }
};

std::string to_string(const OmegaCount& c);

using UMarking = std::vector<std::uint32_t>;
using VMarking = std::vector<OmegaCount>;

/// Component-wise a >= b.
bool dominates(const VMarking& a, const VMarking& b);

struct SymbolicState {
  std::vector<PlaceTokens> marking;
  ConstraintSystem constraint;

  std::vector<Var> variables() const;
  /// Debug form: `P1{T0} P2{TA*2, TW} | T0 >= 1`.
  std::string to_string(const TBNet& net) const;
  std::vector<std::string> marking_strings(const TBNet& net) const;

  friend bool operator==(const SymbolicState&, const SymbolicState&) = default;
};

/// Name used for timestamp variable `v` inside printed states.
std::string stamp_name(Var v);

UMarking u_marking(const SymbolicState& s);
VMarking v_marking(const SymbolicState& s);
SymbolicState erase_ta(const SymbolicState& s);
/// TA^omega absorbs finite TA counts at the same place.
SymbolicState merge_ta_omega(SymbolicState s);
/// Renumbers variables 0..k-1 in place/token order and restricts the
/// constraint to exactly the marking's variables.
SymbolicState normalize_variables(const SymbolicState& s);

SymbolicState initial_state(const TBNet& net);

/// How constraints are compared across states. `relative` identifies states
/// that differ by a uniform time shift; it is only sound for nets whose time
/// functions are translation invariant.
enum class TimeFrame { absolute, relative };
TimeFrame frame_for(const TBNet& net);

/// Cached comparison data for one state.
class StateProfile {
 public:
  StateProfile(const SymbolicState& s, TimeFrame frame);

  const SymbolicState& state() const { return *state_; }
  const UMarking& u() const { return u_; }
  const VMarking& v() const { return v_; }
  const ConstraintSystem& frame_constraint() const { return frame_constraint_; }
  /// gap(i, j) = bounds of x_i - x_j; gap(i, i) = bounds of x_i.
  const Interval& gap(std::size_t i, std::size_t j) const;
  bool needs_search() const { return needs_search_; }

 private:
  std::shared_ptr<const SymbolicState> state_;
  UMarking u_;
  VMarking v_;
  ConstraintSystem frame_constraint_;
  std::vector<Var> vars_;
  bool needs_search_ = false;
  mutable std::vector<std::vector<Interval>> gaps_;
};

enum class MatchMode {
  equivalent,  // C_a == C_b after renaming
  included,    // C_b => C_a after renaming (b denotes a subset of a)
};

/// Maps variables of `a` to variables of `b`.
using Bijection = std::map<Var, Var>;

/// Lexicographically first place-preserving bijection under which the
/// constraints match, or nullopt. Requires equal u-markings.
std::optional<Bijection> correspondence(const StateProfile& a, const StateProfile& b, MatchMode mode);
std::optional<Bijection> correspondence(const SymbolicState& a, const SymbolicState& b,
                                        TimeFrame frame = TimeFrame::absolute,
                                        MatchMode mode = MatchMode::equivalent);

/// a >= b: equal u, v_a >= v_b, equivalent constraints.
bool covers(const StateProfile& a, const StateProfile& b);
bool covers(const SymbolicState& a, const SymbolicState& b, TimeFrame frame = TimeFrame::absolute);
/// a > b: covers with different v-markings.
bool properly_covers(const StateProfile& a, const StateProfile& b);
/// b is a subset of a: equal u and v, C_b => C_a.
bool includes(const StateProfile& a, const StateProfile& b);
bool includes(const SymbolicState& a, const SymbolicState& b, TimeFrame frame = TimeFrame::absolute);
bool strictly_includes(const StateProfile& a, const StateProfile& b);
bool same_state(const StateProfile& a, const StateProfile& b);
/// Inclusion of the TA-erased states: equal u, C_b => C_a, v ignored.
bool erased_includes(const StateProfile& a, const StateProfile& b);

struct TokenPick {
  PlaceId place = 0;
  std::optional<std::size_t> stamp;  // index into PlaceTokens::stamps; nullopt = a TA token
  friend bool operator==(const TokenPick&, const TokenPick&) = default;
};

struct Binding {
  std::vector<TokenPick> picks;
  std::optional<Var> enab;              // newest consumed timestamp
  std::map<PlaceId, Var> newest;        // newest consumed timestamp per referenced place
  friend bool operator==(const Binding&, const Binding&) = default;
};

/// One way to fire a transition: token choice plus the case split that makes
/// every max() in the time functions and strong deadlines linear.
struct Firing {
  TransitionId transition = 0;
  Binding binding;
  std::vector<Constraint> assumptions;
  std::vector<LinearExpr> deadlines;  // firing time <= each
};

enum class EdgeType { E, A };
inline bool operator<(EdgeType a, EdgeType b) { return a == EdgeType::E && b == EdgeType::A; }
char to_char(EdgeType t);

struct EdgeAnnotation {
  std::string transition;
  EdgeType src_type = EdgeType::A;
  EdgeType trgt_type = EdgeType::A;
  Interval time;
  friend bool operator==(const EdgeAnnotation&, const EdgeAnnotation&) = default;
};

std::string to_string(const EdgeAnnotation& a);

/// All satisfiable firings of `s` in transition order.
std::vector<Firing> enabled_transitions(const SymbolicState& s, const TBNet& net);

struct Successor {
  SymbolicState state;
  EdgeAnnotation annotation;
};

/// Fires `f`. Throws std::domain_error when the firing system is unsatisfiable.
Successor successor(const SymbolicState& s, const TBNet& net, const Firing& f);

/// Firing system C_fire over the state's variables plus `time_var`.
ConstraintSystem firing_system(const SymbolicState& s, const TBNet& net, const Firing& f, Var time_var);

/// Successors of all enabled firings, dropping duplicates produced by
/// interchangeable tokens of the same transition.
std::vector<Successor> successors(const SymbolicState& s, const TBNet& net);

/// Replaces timestamps that can never influence a future firing by TA tokens.
SymbolicState anonymize(const SymbolicState& s, const TBNet& net);

}  // namespace tbcover

#endif  // TBCOVER_SYMSTATE_HPP
