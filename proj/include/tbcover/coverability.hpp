#ifndef TBCOVER_COVERABILITY_HPP
#define TBCOVER_COVERABILITY_HPP

// Coverability trees and graphs of TB nets (TBCT with monotone pruning).

#include "tbcover/net.hpp"
#include "tbcover/symstate.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tbcover {

using NodeId = std::size_t;

/// Why a place of a node received TA^omega.
struct AccelerationWitness {
  NodeId ancestor = 0;     // the properly covered active ancestor
  PlaceId place = 0;
  int feasibility_case = 1;  // 1: ancestor's states all lead here, 2: first step of type A
  friend bool operator==(const AccelerationWitness&, const AccelerationWitness&) = default;
};

struct TreeNode {
  NodeId id = 0;
  SymbolicState state;
  std::optional<NodeId> parent;
  std::optional<EdgeAnnotation> edge;  // annotation of parent -> this
  std::vector<NodeId> children;
  bool active = false;
  std::vector<AccelerationWitness> witnesses;
};

enum class WaitOrder { lifo, fifo };

std::string to_string(WaitOrder order);
std::optional<WaitOrder> parse_wait_order(std::string_view text);

struct Limits {
  std::size_t max_nodes = 100000;
  std::optional<std::chrono::milliseconds> timeout;
};

struct TreeStats {
  std::size_t pops = 0;
  std::size_t inactive_pops = 0;
  /// Successors generated from a node that was inactive when popped. Always 0.
  std::size_t inactive_expansions = 0;
  std::size_t accelerations = 0;
};

class CoverTree {
 public:
  CoverTree(SymbolicState root, TimeFrame frame);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return 0; }
  TimeFrame frame() const { return frame_; }
  const StateProfile& profile(NodeId id) const { return profiles_.at(id); }

  bool partial() const { return partial_; }
  const TreeStats& stats() const { return stats_; }
  std::vector<NodeId> active_nodes() const;
  std::vector<NodeId> inactive_nodes() const;

  /// True iff `a` is a proper ancestor of `n`.
  bool is_ancestor(NodeId a, NodeId n) const;
  /// Proper ancestors of n, nearest first.
  std::vector<NodeId> ancestors(NodeId n) const;
  /// n and everything below it.
  std::vector<NodeId> subtree(NodeId n) const;

  NodeId add_child(NodeId parent, SymbolicState state, EdgeAnnotation edge,
                   std::vector<AccelerationWitness> witnesses);
  void set_active(NodeId id, bool active) { nodes_.at(id).active = active; }
  void mark_partial() { partial_ = true; }
  TreeStats& mutable_stats() { return stats_; }

 private:
  std::vector<TreeNode> nodes_;
  std::vector<StateProfile> profiles_;
  TimeFrame frame_;
  bool partial_ = false;
  TreeStats stats_;
};

/// Whether the path from ancestor `from` to the state `to` is feasible from
/// `to`; 0 if not, else the case (1 or 2) that holds. `first_step` is the
/// source type of the path's first edge.
int feasible_from(const StateProfile& from, const StateProfile& to, EdgeType first_step);

/// Acceleration of the candidate `m`, child of `parent` via `edge`, against
/// the active nodes among `parent` and its ancestors.
SymbolicState acc(const CoverTree& tree, NodeId parent, const EdgeAnnotation& edge, const SymbolicState& m,
                  std::vector<AccelerationWitness>* witnesses = nullptr);

/// Deactivation triggered by y <= n (n already in the tree).
void deactivate_cases(CoverTree& tree, NodeId n, NodeId y);

CoverTree tbct(const TBNet& net, WaitOrder order = WaitOrder::lifo, const Limits& limits = {});

struct GraphEdge {
  NodeId src = 0;
  NodeId trgt = 0;
  EdgeAnnotation annotation;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct Redirect {
  NodeId src = 0;
  NodeId removed_target = 0;
  NodeId new_target = 0;
  bool by_inclusion = true;  // false: by coverage
};

struct CoverGraph {
  std::vector<NodeId> nodes;  // tree ids of the active nodes, ascending
  std::vector<SymbolicState> states;
  std::vector<GraphEdge> edges;
  std::vector<Redirect> redirects;

  std::optional<std::size_t> index_of(NodeId id) const;
};

/// e covers e2: same endpoints and transition, time(e) contains time(e2), and
/// both types at least as strong (A > E).
bool edge_covers(const GraphEdge& e, const GraphEdge& e2);

/// Throws std::logic_error when an edge cannot be redirected.
CoverGraph tree_to_graph(const CoverTree& tree);

bool is_bounded(const CoverGraph& g);
/// Throws std::invalid_argument on an unknown place.
OmegaCount place_bound(const CoverGraph& g, const TBNet& net, std::string_view place);
/// Throws std::invalid_argument on an unknown transition.
bool is_semi_live(const CoverGraph& g, const TBNet& net, std::string_view transition);

}  // namespace tbcover

#endif  // TBCOVER_COVERABILITY_HPP
