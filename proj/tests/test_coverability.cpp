#include "tbcover/coverability.hpp"

#include "support/random_nets.hpp"
#include "support/trg_oracle.hpp"

#include <gtest/gtest.h>

namespace tbcover {
namespace {

TBNet fixture(const char* name) { return load_net(oracle::fixture(name)); }

LinearExpr x(std::uint32_t i) { return LinearExpr::variable(Var{i}); }
LinearExpr k(long q) { return LinearExpr(Rational(q)); }

SymbolicState one_token(std::size_t places, PlaceId at, std::vector<Constraint> cs, std::uint32_t ta_at_last = 0) {
  SymbolicState s;
  s.marking.resize(places);
  s.marking[at].stamps.push_back(Var{0});
  s.marking.back().anonymous += ta_at_last;
  s.constraint.add_variable(Var{0});
  for (Constraint& c : cs) s.constraint.add(std::move(c));
  return s;
}

EdgeAnnotation edge(const char* t, EdgeType src = EdgeType::A) { return EdgeAnnotation{t, src, EdgeType::A, Interval::closed(1, 2)}; }

TEST(Acc, Fig1InsertsOmegaAtSinkPlace) {
  TBNet net = fixture("fig1.tb");
  CoverTree tree = tbct(net);
  const TreeNode& s2 = tree.node(2);
  EXPECT_TRUE(s2.state.marking[2].omega);
  ASSERT_EQ(s2.witnesses.size(), 1u);
  EXPECT_EQ(s2.witnesses[0], (AccelerationWitness{0, 2, 1}));
}

TEST(Acc, NoActiveAncestorLeavesStateAlone) {
  SymbolicState root = one_token(2, 0, {Constraint::make(x(0), Rel::ge, k(0))});
  CoverTree tree(root, TimeFrame::relative);
  tree.set_active(0, false);
  SymbolicState m = one_token(2, 0, {Constraint::make(x(0), Rel::ge, k(1))}, 1);
  std::vector<AccelerationWitness> w;
  EXPECT_EQ(acc(tree, 0, edge("t"), m, &w), m);
  EXPECT_TRUE(w.empty());
}

TEST(Acc, NoProperCoverageLeavesStateAlone) {
  SymbolicState root = one_token(2, 0, {Constraint::make(x(0), Rel::ge, k(0))});
  CoverTree tree(root, TimeFrame::relative);
  SymbolicState other_place = one_token(2, 1, {Constraint::make(x(0), Rel::ge, k(1))}, 1);
  EXPECT_EQ(acc(tree, 0, edge("t"), other_place), other_place);
  SymbolicState same = one_token(2, 0, {Constraint::make(x(0), Rel::ge, k(3))});
  EXPECT_EQ(acc(tree, 0, edge("t"), same), same);
}

TEST(Acc, NeverLowersOrTouchesStamps) {
  for (const char* name : {"fig1.tb", "example_a.tb", "example_b.tb", "example_c.tb"}) {
    TBNet net = fixture(name);
    CoverTree tree = tbct(net);
    for (const TreeNode& n : tree.nodes()) {
      if (!n.parent) continue;
      // replay: the unaccelerated successor is among the parent's successors
      bool found = false;
      for (const Successor& s : successors(tree.node(*n.parent).state, net)) {
        if (s.annotation != *n.edge) continue;
        if (u_marking(s.state) != u_marking(n.state) || s.state.constraint != n.state.constraint) continue;
        if (!dominates(v_marking(n.state), v_marking(s.state))) continue;
        found = true;
        EXPECT_EQ(v_marking(s.state) != v_marking(n.state), !n.witnesses.empty());
      }
      EXPECT_TRUE(found) << name << " node " << n.id;
    }
  }
}

TEST(FeasibleFrom, Cases) {
  auto state = [](long lo) { return one_token(1, 0, {Constraint::make(x(0), Rel::ge, k(lo))}); };
  auto p = [](const SymbolicState& s) { return StateProfile(s, TimeFrame::absolute); };
  // equivalent constraints: case 1
  EXPECT_EQ(feasible_from(p(state(0)), p(state(0)), EdgeType::E), 1);
  // ancestor tighter than the target: case 1
  EXPECT_EQ(feasible_from(p(state(3)), p(state(0)), EdgeType::E), 1);
  // target tighter: only with a first edge of type A
  EXPECT_EQ(feasible_from(p(state(0)), p(state(3)), EdgeType::E), 0);
  EXPECT_EQ(feasible_from(p(state(0)), p(state(3)), EdgeType::A), 2);
}

TEST(Tbct, Fig1) {
  CoverTree tree = tbct(fixture("fig1.tb"));
  EXPECT_FALSE(tree.partial());
  EXPECT_EQ(tree.size(), 5u);
  EXPECT_EQ(tree.active_nodes(), (std::vector<NodeId>{2, 3}));
  EXPECT_EQ(tree.stats().inactive_expansions, 0u);
}

TEST(Tbct, ExampleA) {
  TBNet net = fixture("example_a.tb");
  CoverTree tree = tbct(net);
  EXPECT_EQ(tree.size(), 4u);
  EXPECT_EQ(tree.active_nodes(), (std::vector<NodeId>{1, 3}));
  EXPECT_TRUE(properly_covers(tree.profile(1), tree.profile(0)));
  EXPECT_TRUE(same_state(tree.profile(2), tree.profile(1)));
  EXPECT_EQ(tree.node(2).parent, NodeId{1});
  EXPECT_TRUE(successors(tree.node(3).state, net).empty());
}

TEST(Tbct, ExampleB) {
  TBNet net = fixture("example_b.tb");
  CoverTree tree = tbct(net);
  EXPECT_TRUE(tree.node(2).state.marking[1].omega);
  EXPECT_EQ(tree.ancestors(2).size(), 2u);
  EXPECT_FALSE(tree.node(0).active);
  EXPECT_FALSE(tree.node(1).active);
  EXPECT_TRUE(tree.node(2).active);
  ASSERT_EQ(tree.node(2).children.size(), 2u);
  for (NodeId frontier : tree.node(2).children) {
    for (NodeId c : tree.node(frontier).children) EXPECT_TRUE(same_state(tree.profile(c), tree.profile(2)));
  }
}

TEST(Tbct, ExampleC) {
  TBNet net = fixture("example_c.tb");
  CoverTree tree = tbct(net);
  EXPECT_EQ(tree.size(), 8u);
  EXPECT_EQ(tree.active_nodes(), (std::vector<NodeId>{0, 4, 6}));
  EXPECT_TRUE(tree.node(4).state.marking[3].omega);
  EXPECT_TRUE(properly_covers(tree.profile(4), tree.profile(1)));
  EXPECT_TRUE(strictly_includes(tree.profile(6), tree.profile(5)));
  EXPECT_TRUE(same_state(tree.profile(7), tree.profile(4)));
}

TEST(Tbct, OrdersAgreeOnGraphs) {
  for (const char* name : {"fig1.tb", "example_a.tb", "example_b.tb", "example_c.tb"}) {
    TBNet net = fixture(name);
    CoverGraph lifo = tree_to_graph(tbct(net, WaitOrder::lifo));
    CoverGraph fifo = tree_to_graph(tbct(net, WaitOrder::fifo));
    EXPECT_EQ(lifo.nodes.size(), fifo.nodes.size()) << name;
    EXPECT_EQ(lifo.edges.size(), fifo.edges.size()) << name;
  }
}

TEST(Tbct, NodeLimitGivesPartialTree) {
  Limits limits;
  limits.max_nodes = 1;
  CoverTree tree = tbct(fixture("fig1.tb"), WaitOrder::lifo, limits);
  EXPECT_TRUE(tree.partial());
  EXPECT_EQ(tree.size(), 1u);
}

TEST(Tbct, NonAnonymizableGrowthHitsTheLimit) {
  // every firing leaves a fresh stamp that a later firing reads
  TBNet net = parse_net(
      "place A\nplace B\ninit A { X }\nconstraint X >= 0\n"
      "transition grow { in A ; out A, B ; tf [ enab + 1 , enab + 1 ] }\n"
      "transition read weak { in B ; out ; tf [ B , B + 1 ] }\n");
  Limits limits;
  limits.max_nodes = 200;
  CoverTree tree = tbct(net, WaitOrder::fifo, limits);
  EXPECT_TRUE(tree.partial());
}

CoverTree chain_tree() {
  // 0 -> 1 -> 2 and 0 -> 3
  SymbolicState s = one_token(1, 0, {Constraint::make(x(0), Rel::ge, k(0))});
  CoverTree tree(s, TimeFrame::absolute);
  tree.add_child(0, s, edge("a"), {});
  tree.add_child(1, s, edge("b"), {});
  tree.add_child(0, s, edge("c"), {});
  for (NodeId n = 0; n < 4; ++n) tree.set_active(n, true);
  return tree;
}

TEST(DeactivateCases, ActiveAncestorKeepsNewNode) {
  CoverTree tree = chain_tree();
  deactivate_cases(tree, 2, 0);
  EXPECT_EQ(tree.active_nodes(), std::vector<NodeId>{2});
}

TEST(DeactivateCases, InactiveSiblingBranchStillPruned) {
  CoverTree tree = chain_tree();
  tree.set_active(1, false);
  deactivate_cases(tree, 3, 1);
  EXPECT_FALSE(tree.node(2).active);
  EXPECT_TRUE(tree.node(3).active);
}

TEST(DeactivateCases, InactiveAncestorIsIgnored) {
  CoverTree tree = chain_tree();
  tree.set_active(1, false);
  deactivate_cases(tree, 2, 1);
  EXPECT_TRUE(tree.node(0).active);
  EXPECT_TRUE(tree.node(2).active);
  EXPECT_TRUE(tree.node(3).active);
}

TEST(TreeToGraph, Fig1AlternatesTwoStates) {
  TBNet net = fixture("fig1.tb");
  CoverGraph g = tree_to_graph(tbct(net));
  ASSERT_EQ(g.nodes.size(), 2u);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0].src, g.edges[1].trgt);
  EXPECT_EQ(g.edges[1].src, g.edges[0].trgt);
  for (const SymbolicState& s : g.states) EXPECT_TRUE(s.marking[2].omega);
  ASSERT_EQ(g.redirects.size(), 1u);
  EXPECT_TRUE(g.redirects[0].by_inclusion);
}

TEST(TreeToGraph, ExampleALoopAndExit) {
  TBNet net = fixture("example_a.tb");
  CoverGraph g = tree_to_graph(tbct(net));
  ASSERT_EQ(g.nodes.size(), 2u);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0].src, g.edges[0].trgt);
  EXPECT_EQ(g.edges[0].annotation.transition, "T0");
  EXPECT_EQ(g.edges[1].annotation.transition, "T1");
  EXPECT_NE(g.edges[1].trgt, g.edges[1].src);
}

TEST(TreeToGraph, AllActiveTreeKeepsItsEdges) {
  TBNet net = parse_net(
      "place A\nplace B\nplace C\ninit A { X }\nconstraint X >= 0\n"
      "transition ab { in A ; out B ; tf [ enab + 1 , enab + 2 ] }\n"
      "transition bc { in B ; out C ; tf [ enab , enab + 1 ] }\n");
  CoverTree tree = tbct(net);
  EXPECT_EQ(tree.active_nodes().size(), tree.size());
  CoverGraph g = tree_to_graph(tree);
  EXPECT_EQ(g.nodes.size(), tree.size());
  EXPECT_EQ(g.edges.size(), tree.size() - 1);
  EXPECT_TRUE(g.redirects.empty());
}

TEST(TreeToGraph, Invariants) {
  for (const char* name : {"fig1.tb", "example_a.tb", "example_b.tb", "example_c.tb"}) {
    for (WaitOrder order : {WaitOrder::lifo, WaitOrder::fifo}) {
      CoverTree tree = tbct(fixture(name), order);
      CoverGraph g = tree_to_graph(tree);
      for (const GraphEdge& e : g.edges) {
        EXPECT_TRUE(tree.node(e.src).active);
        EXPECT_TRUE(tree.node(e.trgt).active);
      }
      for (std::size_t i = 0; i < g.edges.size(); ++i) {
        for (std::size_t j = 0; j < g.edges.size(); ++j) {
          if (i != j) EXPECT_FALSE(edge_covers(g.edges[i], g.edges[j])) << name;
        }
      }
      for (const Redirect& r : g.redirects) {
        const bool ok = r.by_inclusion ? includes(tree.profile(r.new_target), tree.profile(r.removed_target))
                                       : covers(tree.profile(r.new_target), tree.profile(r.removed_target));
        EXPECT_TRUE(ok) << name;
      }
    }
  }
}

TEST(EdgeCovers, Rules) {
  GraphEdge e{0, 1, {"t", EdgeType::A, EdgeType::A, Interval::closed(1, 2)}};
  EXPECT_TRUE(edge_covers(e, e));
  GraphEdge narrower{0, 1, {"t", EdgeType::E, EdgeType::A, Interval::closed(Rational(3, 2), 2)}};
  EXPECT_TRUE(edge_covers(e, narrower));
  EXPECT_FALSE(edge_covers(narrower, e));
  GraphEdge wider{0, 1, {"t", EdgeType::A, EdgeType::A, Interval::closed(0, 3)}};
  EXPECT_FALSE(edge_covers(e, wider));
  GraphEdge other{0, 1, {"u", EdgeType::A, EdgeType::A, Interval::closed(1, 2)}};
  EXPECT_FALSE(edge_covers(e, other));
  GraphEdge elsewhere{0, 2, e.annotation};
  EXPECT_FALSE(edge_covers(e, elsewhere));
}

TEST(Queries, Fig1) {
  TBNet net = fixture("fig1.tb");
  CoverGraph g = tree_to_graph(tbct(net));
  EXPECT_FALSE(is_bounded(g));
  EXPECT_EQ(place_bound(g, net, "P2"), OmegaCount::infinite());
  EXPECT_EQ(place_bound(g, net, "P0"), (OmegaCount{1, false}));
  EXPECT_TRUE(is_semi_live(g, net, "t0"));
  EXPECT_THROW(place_bound(g, net, "P9"), std::invalid_argument);
  EXPECT_THROW(is_semi_live(g, net, "t9"), std::invalid_argument);
}

TEST(Queries, Fig1WithoutSinkIsBounded) {
  TBNet net = parse_net(
      "place P0\nplace P1\ninit P0 { T0 }\nconstraint T0 >= 0\n"
      "transition t0 { in P0 ; out P1 ; tf [ enab + 1 , enab + 2 ] }\n"
      "transition t1 { in P1 ; out P0 ; tf [ enab + 1 , enab + 2 ] }\n");
  CoverGraph g = tree_to_graph(tbct(net));
  EXPECT_TRUE(is_bounded(g));
  oracle::Trg trg = oracle::explore_trg(net, 6, frame_for(net));
  EXPECT_TRUE(trg.complete);
  EXPECT_EQ(place_bound(g, net, "P0"), (OmegaCount{1, false}));
}

TEST(Queries, MarkedPlaceWithoutTransitions) {
  TBNet net = parse_net("place A\nplace B\ninit A { X }\n");
  CoverGraph g = tree_to_graph(tbct(net));
  EXPECT_TRUE(is_bounded(g));
  EXPECT_EQ(g.nodes.size(), 1u);
  EXPECT_EQ(place_bound(g, net, "B"), (OmegaCount{0, false}));
  EXPECT_EQ(place_bound(g, net, "A"), (OmegaCount{1, false}));
}

TEST(Queries, SemiLiveness) {
  TBNet a = fixture("example_a.tb");
  EXPECT_TRUE(is_semi_live(tree_to_graph(tbct(a)), a, "T1"));
  TBNet dead = parse_net(
      "place A\nplace B\ninit A { X }\n"
      "transition go { in A ; out A ; tf [ enab + 1 , enab + 1 ] }\n"
      "transition never { in B ; out A ; tf [ enab , enab ] }\n");
  CoverGraph g = tree_to_graph(tbct(dead));
  EXPECT_TRUE(is_semi_live(g, dead, "go"));
  EXPECT_FALSE(is_semi_live(g, dead, "never"));
}

TEST(Soundness, PaperModelsToDepthSix) {
  for (const char* name : {"fig1.tb", "example_a.tb", "example_b.tb", "example_c.tb"}) {
    TBNet net = fixture(name);
    for (WaitOrder order : {WaitOrder::lifo, WaitOrder::fifo}) {
      CoverTree tree = tbct(net, order);
      oracle::Trg trg = oracle::explore_trg(net, 6, TimeFrame::absolute);
      EXPECT_TRUE(oracle::uncovered_states(tree, trg).empty()) << name;
    }
  }
}

TEST(Oracle, BoundedRandomNetsMatchMaximalStates) {
  int checked = 0;
  for (std::uint32_t seed = 1; seed <= 1000 && checked < 20; ++seed) {
    TBNet net = oracle::random_net(seed);
    oracle::Trg trg = oracle::explore_trg(net, 6, frame_for(net), 120);
    if (!trg.complete || trg.states.size() < 3 || oracle::has_coverage_growth(trg, frame_for(net))) continue;
    ++checked;
    CoverTree tree = tbct(net);
    EXPECT_EQ(oracle::active_set_mismatches(tree, trg), 0u) << oracle::random_net_text(seed);
  }
  EXPECT_EQ(checked, 20);
}

}  // namespace
}  // namespace tbcover
