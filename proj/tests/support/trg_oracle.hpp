#ifndef TBCOVER_TESTS_TRG_ORACLE_HPP
#define TBCOVER_TESTS_TRG_ORACLE_HPP

// Brute-force symbolic reachability to a fixed depth: no acceleration, no
// pruning beyond merging equal states.

#include "tbcover/coverability.hpp"
#include "tbcover/symstate.hpp"

#include <optional>
#include <vector>

namespace oracle {

struct Trg {
  std::vector<tbcover::SymbolicState> states;
  std::vector<int> depth;
  std::vector<std::optional<std::size_t>> parent;
  /// Expanding the deepest level produced nothing new.
  bool complete = false;
};

/// Gives up, leaving `complete` false, once more than `max_states` are found.
Trg explore_trg(const tbcover::TBNet& net, int max_depth, tbcover::TimeFrame frame, std::size_t max_states = 500);

/// Some reachable state properly covers another one.
bool has_coverage_growth(const Trg& trg, tbcover::TimeFrame frame);

/// One representative per class of states maximal under inclusion.
std::vector<std::size_t> maximal_under_inclusion(const Trg& trg, tbcover::TimeFrame frame);

/// Number of mismatches between the active nodes of `tree` and the maximal
/// states of `trg`, matched by mutual inclusion.
std::size_t active_set_mismatches(const tbcover::CoverTree& tree, const Trg& trg);

/// Reachable states included in or covered by no node of `tree`.
std::vector<std::size_t> uncovered_states(const tbcover::CoverTree& tree, const Trg& trg);

}  // namespace oracle

#endif
