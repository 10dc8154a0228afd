#include "tbcover/coverability.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace tbcover {

std::string to_string(WaitOrder order) { return order == WaitOrder::lifo ? "lifo" : "fifo"; }

std::optional<WaitOrder> parse_wait_order(std::string_view text) {
  if (text == "lifo") return WaitOrder::lifo;
  if (text == "fifo") return WaitOrder::fifo;
  return std::nullopt;
}

CoverTree::CoverTree(SymbolicState root, TimeFrame frame) : frame_(frame) {
  profiles_.emplace_back(root, frame);
  TreeNode node;
  node.state = std::move(root);
  node.active = true;
  nodes_.push_back(std::move(node));
}

std::vector<NodeId> CoverTree::active_nodes() const {
  std::vector<NodeId> out;
  for (const TreeNode& n : nodes_) {
    if (n.active) out.push_back(n.id);
  }
  return out;
}

std::vector<NodeId> CoverTree::inactive_nodes() const {
  std::vector<NodeId> out;
  for (const TreeNode& n : nodes_) {
    if (!n.active) out.push_back(n.id);
  }
  return out;
}

bool CoverTree::is_ancestor(NodeId a, NodeId n) const {
  for (auto p = nodes_.at(n).parent; p; p = nodes_.at(*p).parent) {
    if (*p == a) return true;
  }
  return false;
}

std::vector<NodeId> CoverTree::ancestors(NodeId n) const {
  std::vector<NodeId> out;
  for (auto p = nodes_.at(n).parent; p; p = nodes_.at(*p).parent) out.push_back(*p);
  return out;
}

std::vector<NodeId> CoverTree::subtree(NodeId n) const {
  std::vector<NodeId> out{n};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& children = nodes_.at(out[i]).children;
    out.insert(out.end(), children.begin(), children.end());
  }
  return out;
}

NodeId CoverTree::add_child(NodeId parent, SymbolicState state, EdgeAnnotation edge,
                            std::vector<AccelerationWitness> witnesses) {
  TreeNode node;
  node.id = nodes_.size();
  node.parent = parent;
  node.edge = std::move(edge);
  node.witnesses = std::move(witnesses);
  profiles_.emplace_back(state, frame_);
  node.state = std::move(state);
  nodes_.at(parent).children.push_back(node.id);
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

int feasible_from(const StateProfile& from, const StateProfile& to, EdgeType first_step) {
  if (erased_includes(to, from)) return 1;
  if (first_step == EdgeType::A && erased_includes(from, to)) return 2;
  return 0;
}

SymbolicState acc(const CoverTree& tree, NodeId parent, const EdgeAnnotation& edge, const SymbolicState& m,
                  std::vector<AccelerationWitness>* witnesses) {
  const StateProfile target(m, tree.frame());
  SymbolicState out = m;
  std::vector<NodeId> line{parent};
  for (NodeId a : tree.ancestors(parent)) line.push_back(a);

  for (std::size_t k = 0; k < line.size(); ++k) {
    const NodeId w = line[k];
    if (!tree.node(w).active) continue;
    const StateProfile& covered = tree.profile(w);
    if (!properly_covers(target, covered)) continue;
    // First edge of the path w -> m: the edge into the path node just below w.
    const EdgeType first = k == 0 ? edge.src_type : tree.node(line[k - 1]).edge->src_type;
    const int feasibility = feasible_from(covered, target, first);
    if (feasibility == 0) continue;
    for (PlaceId p = 0; p < out.marking.size(); ++p) {
      if (out.marking[p].omega || !(covered.v()[p] < target.v()[p])) continue;
      out.marking[p].omega = true;
      if (witnesses) witnesses->push_back(AccelerationWitness{w, p, feasibility});
    }
  }
  return merge_ta_omega(std::move(out));
}

void deactivate_cases(CoverTree& tree, NodeId n, NodeId y) {
  const bool ancestor = tree.is_ancestor(y, n);
  if (ancestor && !tree.node(y).active) return;
  for (NodeId x : tree.subtree(y)) {
    if (x != n) tree.set_active(x, false);
  }
}

CoverTree tbct(const TBNet& net, WaitOrder order, const Limits& limits) {
  const auto started = std::chrono::steady_clock::now();
  CoverTree tree(initial_state(net), frame_for(net));
  std::deque<NodeId> wait{tree.root()};

  auto out_of_time = [&] {
    return limits.timeout && std::chrono::steady_clock::now() - started > *limits.timeout;
  };

  while (!wait.empty()) {
    if (out_of_time()) {
      tree.mark_partial();
      break;
    }
    NodeId s;
    if (order == WaitOrder::lifo) {
      s = wait.back();
      wait.pop_back();
    } else {
      s = wait.front();
      wait.pop_front();
    }
    ++tree.mutable_stats().pops;
    const bool active_when_popped = tree.node(s).active;
    if (!active_when_popped) {
      ++tree.mutable_stats().inactive_pops;
      continue;
    }

    const SymbolicState source = tree.node(s).state;
    for (Successor& next : successors(source, net)) {
      if (!active_when_popped) ++tree.mutable_stats().inactive_expansions;
      if (tree.size() >= limits.max_nodes || out_of_time()) {
        tree.mark_partial();
        return tree;
      }
      std::vector<AccelerationWitness> witnesses;
      SymbolicState accelerated = acc(tree, s, next.annotation, next.state, &witnesses);
      if (!witnesses.empty()) ++tree.mutable_stats().accelerations;
      const NodeId n = tree.add_child(s, std::move(accelerated), next.annotation, std::move(witnesses));
      const StateProfile& pn = tree.profile(n);

      bool included = false;
      for (NodeId a = 0; a < n && !included; ++a) {
        included = tree.node(a).active && includes(tree.profile(a), pn);
      }
      if (included) continue;

      for (NodeId a = 0; a < n; ++a) {
        if (tree.node(a).active && strictly_includes(pn, tree.profile(a))) {
          for (NodeId x : tree.subtree(a)) tree.set_active(x, false);
        }
      }

      bool covered = false;
      for (NodeId a = 0; a < n && !covered; ++a) {
        covered = tree.node(a).active && covers(tree.profile(a), pn);
      }
      if (covered) continue;

      for (NodeId y = 0; y < n; ++y) {
        if (covers(pn, tree.profile(y))) deactivate_cases(tree, n, y);
      }
      tree.set_active(n, true);
      wait.push_back(n);
    }
  }
  return tree;
}

std::optional<std::size_t> CoverGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

bool edge_covers(const GraphEdge& e, const GraphEdge& e2) {
  const EdgeAnnotation& a = e.annotation;
  const EdgeAnnotation& b = e2.annotation;
  return e.src == e2.src && e.trgt == e2.trgt && a.transition == b.transition && a.time.contains(b.time) &&
         !(a.src_type < b.src_type) && !(a.trgt_type < b.trgt_type);
}

CoverGraph tree_to_graph(const CoverTree& tree) {
  CoverGraph g;
  for (const TreeNode& n : tree.nodes()) {
    if (!n.active) continue;
    g.nodes.push_back(n.id);
    g.states.push_back(n.state);
  }

  std::vector<GraphEdge> edges;
  for (const TreeNode& b : tree.nodes()) {
    if (!b.parent || !tree.node(*b.parent).active) continue;
    GraphEdge e{*b.parent, b.id, *b.edge};
    if (!b.active) {
      std::optional<NodeId> target;
      bool by_inclusion = true;
      for (NodeId a : g.nodes) {
        if (includes(tree.profile(a), tree.profile(b.id))) {
          target = a;
          break;
        }
      }
      if (!target) {
        by_inclusion = false;
        for (NodeId a : g.nodes) {
          if (covers(tree.profile(a), tree.profile(b.id))) {
            target = a;
            break;
          }
        }
      }
      if (!target) {
        throw std::logic_error("no active node includes or covers inactive node " + std::to_string(b.id));
      }
      g.redirects.push_back(Redirect{e.src, b.id, *target, by_inclusion});
      e.trgt = *target;
    }
    edges.push_back(std::move(e));
  }

  for (std::size_t i = 0; i < edges.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < edges.size() && !dominated; ++j) {
      if (i == j || !edge_covers(edges[j], edges[i])) continue;
      // Mutually covering duplicates keep their first occurrence.
      dominated = !edge_covers(edges[i], edges[j]) || j < i;
    }
    if (!dominated) g.edges.push_back(edges[i]);
  }
  return g;
}

bool is_bounded(const CoverGraph& g) {
  for (const SymbolicState& s : g.states) {
    for (const PlaceTokens& p : s.marking) {
      if (p.omega) return false;
    }
  }
  return true;
}

OmegaCount place_bound(const CoverGraph& g, const TBNet& net, std::string_view place) {
  const auto p = net.find_place(place);
  if (!p) throw std::invalid_argument("unknown place: " + std::string(place));
  OmegaCount best;
  for (const SymbolicState& s : g.states) {
    const PlaceTokens& tokens = s.marking.at(*p);
    if (tokens.omega) return OmegaCount::infinite();
    best.count = std::max<std::uint32_t>(best.count, static_cast<std::uint32_t>(tokens.stamps.size()) + tokens.anonymous);
  }
  return best;
}

bool is_semi_live(const CoverGraph& g, const TBNet& net, std::string_view transition) {
  if (!net.find_transition(transition)) {
    throw std::invalid_argument("unknown transition: " + std::string(transition));
  }
  return std::any_of(g.edges.begin(), g.edges.end(),
                     [&](const GraphEdge& e) { return e.annotation.transition == transition; });
}

}  // namespace tbcover
