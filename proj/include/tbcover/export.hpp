#ifndef TBCOVER_EXPORT_HPP
#define TBCOVER_EXPORT_HPP

#include "tbcover/coverability.hpp"
#include "tbcover/net.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tbcover {

/// GraphViz digraph of the tree; active nodes are ellipses, inactive ones boxes.
std::string export_dot(const CoverTree& tree, const TBNet& net);
std::string export_dot(const CoverGraph& graph, const TBNet& net);

struct AnalysisReport {
  std::string order = "lifo";
  bool partial = false;
  // nullopt where a partial run cannot give a definitive answer
  std::optional<bool> bounded;
  std::vector<std::pair<std::string, std::optional<OmegaCount>>> place_bounds;
  std::vector<std::pair<std::string, std::optional<bool>>> semi_live;
  std::size_t active_count = 0;
  std::size_t inactive_count = 0;
  std::optional<double> elapsed_seconds;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

/// Answers from the graph when the tree is complete, else whatever the
/// partial tree already proves.
AnalysisReport analyze_report(const TBNet& net, const CoverTree& tree, WaitOrder order);

std::string export_report(const AnalysisReport& r);
/// Inverse of export_report. Throws std::invalid_argument on malformed input.
AnalysisReport parse_report(std::string_view json);

}  // namespace tbcover

#endif  // TBCOVER_EXPORT_HPP
