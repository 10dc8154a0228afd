#include "tbcover/export.hpp"

#include <sstream>

namespace tbcover {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string state_label(NodeId id, const SymbolicState& s, const TBNet& net) {
  std::string label = "S" + std::to_string(id) + "\\n";
  std::vector<std::string> marking = s.marking_strings(net);
  if (marking.empty()) label += "{}";
  for (std::size_t i = 0; i < marking.size(); ++i) label += (i ? " " : "") + escape(marking[i]);
  for (const std::string& c : s.constraint.conjunct_strings(stamp_name)) label += "\\n" + escape(c);
  return label;
}

std::string edge_label(const EdgeAnnotation& a) { return escape(to_string(a)); }

}  // namespace

std::string export_dot(const CoverTree& tree, const TBNet& net) {
  std::ostringstream out;
  out << "digraph coverability_tree {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  for (const TreeNode& n : tree.nodes()) {
    out << "  S" << n.id << " [shape=" << (n.active ? "ellipse" : "box") << ", label=\""
        << state_label(n.id, n.state, net) << "\"];\n";
  }
  for (const TreeNode& n : tree.nodes()) {
    if (!n.parent) continue;
    out << "  S" << *n.parent << " -> S" << n.id << " [label=\"" << edge_label(*n.edge) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const CoverGraph& graph, const TBNet& net) {
  std::ostringstream out;
  out << "digraph coverability_graph {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    out << "  S" << graph.nodes[i] << " [shape=ellipse, label=\"" << state_label(graph.nodes[i], graph.states[i], net)
        << "\"];\n";
  }
  for (const GraphEdge& e : graph.edges) {
    out << "  S" << e.src << " -> S" << e.trgt << " [label=\"" << edge_label(e.annotation) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tbcover
