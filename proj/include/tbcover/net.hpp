#ifndef TBCOVER_NET_HPP
#define TBCOVER_NET_HPP

#include "tbcover/constraint.hpp"
#include "tbcover/rational.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tbcover {

using PlaceId = std::size_t;
using TransitionId = std::size_t;

struct Arc {
  PlaceId place = 0;
  unsigned weight = 1;
  friend bool operator==(const Arc&, const Arc&) = default;
};

enum class Strength { strong, weak };

/// Linear time function: enab_coeff * enab + sum_p coeff_p * p + constant, where
/// `p` stands for the newest timestamp consumed from preset place p.
struct TimeExpr {
  Rational enab_coeff = 0;
  std::map<PlaceId, Rational> place_coeffs;
  Rational constant = 0;

  bool references_place(PlaceId p) const { return place_coeffs.contains(p); }
  /// Sum of all symbol coefficients; 1 means the function commutes with time shifts.
  Rational coefficient_sum() const;
  friend bool operator==(const TimeExpr&, const TimeExpr&) = default;
};

struct Transition {
  std::string name;
  std::vector<Arc> preset;
  std::vector<Arc> postset;
  Strength strength = Strength::strong;
  TimeExpr lower;
  TimeExpr upper;

  unsigned input_weight(PlaceId p) const;
  bool consumes(PlaceId p) const { return input_weight(p) > 0; }
  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Time-Basic Petri net with its initial symbolic marking.
///
/// Initial timestamp variables are `Var{i}` named `variables[i]`; a place may
/// hold the same variable several times (e.g. `P0{T0, T0}`).
struct TBNet {
  std::vector<std::string> places;
  std::vector<Transition> transitions;
  std::vector<std::string> variables;
  std::vector<std::vector<Var>> initial_marking;
  ConstraintSystem initial_constraint;

  std::optional<PlaceId> find_place(std::string_view name) const;
  std::optional<TransitionId> find_transition(std::string_view name) const;
  /// True when every time function has coefficient sum 1, so behaviour from a
  /// state and from its time-shifted copy coincide.
  bool translation_invariant() const;
  std::string variable_name(Var v) const;

  friend bool operator==(const TBNet&, const TBNet&) = default;
};

struct Diagnostic {
  enum class Kind {
    duplicate_place,
    duplicate_transition,
    undeclared_place,
    empty_preset,
    bad_arc_weight,
    time_reference_outside_preset,
    undeclared_variable,
    unmarked_variable,
    marking_shape,
    unsatisfiable_constraint,
  };
  Kind kind;
  std::string message;
};

std::string_view to_string(Diagnostic::Kind kind);

/// Empty iff the net is well formed.
std::vector<Diagnostic> validate(const TBNet& net);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Thrown by parse_net when the text parses but the net fails validation.
class InvalidNet : public std::runtime_error {
 public:
  explicit InvalidNet(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

TBNet parse_net(std::string_view text);
TBNet load_net(const std::filesystem::path& path);

/// Canonical `.tb` text; parse_net(serialize(n)) == n.
std::string serialize(const TBNet& net);

std::string to_string(const TimeExpr& e, const TBNet& net);

}  // namespace tbcover

#endif  // TBCOVER_NET_HPP
