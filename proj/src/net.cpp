#include "tbcover/net.hpp"

#include <set>
#include <sstream>

namespace tbcover {

Rational TimeExpr::coefficient_sum() const {
  Rational total = enab_coeff;
  for (const auto& [p, q] : place_coeffs) total += q;
  return total;
}

unsigned Transition::input_weight(PlaceId p) const {
  unsigned total = 0;
  for (const Arc& a : preset) {
    if (a.place == p) total += a.weight;
  }
  return total;
}

std::optional<PlaceId> TBNet::find_place(std::string_view name) const {
  for (PlaceId p = 0; p < places.size(); ++p) {
    if (places[p] == name) return p;
  }
  return std::nullopt;
}

std::optional<TransitionId> TBNet::find_transition(std::string_view name) const {
  for (TransitionId t = 0; t < transitions.size(); ++t) {
    if (transitions[t].name == name) return t;
  }
  return std::nullopt;
}

bool TBNet::translation_invariant() const {
  for (const Transition& t : transitions) {
    if (t.lower.coefficient_sum() != 1 || t.upper.coefficient_sum() != 1) return false;
  }
  return true;
}

std::string TBNet::variable_name(Var v) const {
  return v.id < variables.size() ? variables[v.id] : default_var_name(v);
}

std::string_view to_string(Diagnostic::Kind kind) {
  using K = Diagnostic::Kind;
  switch (kind) {
    case K::duplicate_place: return "duplicate place";
    case K::duplicate_transition: return "duplicate transition";
    case K::undeclared_place: return "undeclared place";
    case K::empty_preset: return "empty preset";
    case K::bad_arc_weight: return "bad arc weight";
    case K::time_reference_outside_preset: return "time function references a place outside the preset";
    case K::undeclared_variable: return "undeclared variable";
    case K::unmarked_variable: return "variable not in initial marking";
    case K::marking_shape: return "initial marking does not match places";
    case K::unsatisfiable_constraint: return "unsatisfiable initial constraint";
  }
  return "unknown";
}

std::vector<Diagnostic> validate(const TBNet& net) {
  using K = Diagnostic::Kind;
  std::vector<Diagnostic> out;
  auto report = [&](K kind, const std::string& detail) {
    out.push_back(Diagnostic{kind, std::string(to_string(kind)) + ": " + detail});
  };

  std::set<std::string> seen;
  for (const std::string& p : net.places) {
    if (!seen.insert(p).second) report(K::duplicate_place, p);
  }
  seen.clear();
  for (const Transition& t : net.transitions) {
    if (!seen.insert(t.name).second) report(K::duplicate_transition, t.name);
  }

  for (const Transition& t : net.transitions) {
    if (t.preset.empty()) report(K::empty_preset, t.name);
    bool arcs_ok = true;
    for (const auto* arcs : {&t.preset, &t.postset}) {
      for (const Arc& a : *arcs) {
        if (a.place >= net.places.size()) {
          report(K::undeclared_place, t.name + " arc to place #" + std::to_string(a.place));
          arcs_ok = false;
        }
        if (a.weight == 0) report(K::bad_arc_weight, t.name);
      }
    }
    if (!arcs_ok) continue;
    for (const TimeExpr* e : {&t.lower, &t.upper}) {
      for (const auto& [p, q] : e->place_coeffs) {
        if (!t.consumes(p)) {
          std::string name = p < net.places.size() ? net.places[p] : "#" + std::to_string(p);
          report(K::time_reference_outside_preset, t.name + " references " + name);
        }
      }
    }
  }

  if (net.initial_marking.size() != net.places.size()) {
    report(K::marking_shape, std::to_string(net.initial_marking.size()) + " entries for " +
                                 std::to_string(net.places.size()) + " places");
  }
  std::set<Var> marked;
  for (const auto& tokens : net.initial_marking) {
    for (Var v : tokens) {
      if (v.id >= net.variables.size()) report(K::undeclared_variable, default_var_name(v));
      marked.insert(v);
    }
  }
  for (const Constraint& c : net.initial_constraint.conjuncts()) {
    for (const auto& [v, q] : c.coeffs) {
      if (!marked.contains(v)) report(K::unmarked_variable, net.variable_name(v));
    }
  }
  if (!satisfiable(net.initial_constraint)) report(K::unsatisfiable_constraint, "no solution");
  return out;
}

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out = "invalid net";
  for (const Diagnostic& d : diagnostics) out += "\n  " + d.message;
  return out;
}
}  // namespace

InvalidNet::InvalidNet(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string to_string(const TimeExpr& e, const TBNet& net) {
  std::ostringstream out;
  bool first = true;
  auto term = [&](const Rational& q, const std::string& symbol) {
    if (q == 0) return;
    Rational mag = abs(q);
    if (first) {
      if (q < 0) out << "-";
    } else {
      out << (q < 0 ? " - " : " + ");
    }
    if (mag != 1) out << to_decimal_string(mag) << "*";
    out << symbol;
    first = false;
  };
  term(e.enab_coeff, "enab");
  for (const auto& [p, q] : e.place_coeffs) term(q, net.places.at(p));
  if (e.constant != 0 || first) {
    if (first) {
      out << to_decimal_string(e.constant);
    } else {
      out << (e.constant < 0 ? " - " : " + ") << to_decimal_string(abs(e.constant));
    }
  }
  return out.str();
}

std::string serialize(const TBNet& net) {
  std::ostringstream out;
  for (const std::string& p : net.places) out << "place " << p << "\n";
  for (PlaceId p = 0; p < net.initial_marking.size() && p < net.places.size(); ++p) {
    const auto& tokens = net.initial_marking[p];
    if (tokens.empty()) continue;
    out << "init " << net.places[p] << " { ";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      out << (i ? ", " : "") << net.variable_name(tokens[i]);
    }
    out << " }\n";
  }
  auto namer = [&](Var v) { return net.variable_name(v); };
  for (const std::string& line : net.initial_constraint.conjunct_strings(namer)) {
    out << "constraint " << line << "\n";
  }
  auto arcs = [&](const std::vector<Arc>& list) {
    std::string s;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) s += ", ";
      s += net.places.at(list[i].place);
      if (list[i].weight != 1) s += "*" + std::to_string(list[i].weight);
    }
    return s;
  };
  for (const Transition& t : net.transitions) {
    out << "transition " << t.name << (t.strength == Strength::weak ? " weak" : "") << " { in "
        << arcs(t.preset) << " ; out";
    if (!t.postset.empty()) out << " " << arcs(t.postset);
    out << " ; tf [ " << to_string(t.lower, net) << " , " << to_string(t.upper, net) << " ] }\n";
  }
  return out.str();
}

}  // namespace tbcover
