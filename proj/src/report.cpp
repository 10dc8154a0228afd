#include "tbcover/export.hpp"

#include "json.hpp"

#include <stdexcept>

namespace tbcover {

using json = nlohmann::ordered_json;

AnalysisReport analyze_report(const TBNet& net, const CoverTree& tree, WaitOrder order) {
  AnalysisReport r;
  r.order = to_string(order);
  r.partial = tree.partial();
  r.active_count = tree.active_nodes().size();
  r.inactive_count = tree.inactive_nodes().size();

  if (!r.partial) {
    const CoverGraph g = tree_to_graph(tree);
    r.bounded = is_bounded(g);
    for (const std::string& p : net.places) r.place_bounds.emplace_back(p, place_bound(g, net, p));
    for (const Transition& t : net.transitions) r.semi_live.emplace_back(t.name, is_semi_live(g, net, t.name));
    return r;
  }

  // A partial tree still proves unboundedness and liveness of fired transitions.
  for (PlaceId p = 0; p < net.places.size(); ++p) {
    std::optional<OmegaCount> bound;
    for (const TreeNode& n : tree.nodes()) {
      if (n.state.marking.at(p).omega) bound = OmegaCount::infinite();
    }
    if (bound) r.bounded = false;
    r.place_bounds.emplace_back(net.places[p], bound);
  }
  for (const Transition& t : net.transitions) {
    std::optional<bool> fired;
    for (const TreeNode& n : tree.nodes()) {
      if (n.edge && n.edge->transition == t.name) fired = true;
    }
    r.semi_live.emplace_back(t.name, fired);
  }
  return r;
}

std::string export_report(const AnalysisReport& r) {
  json j;
  j["order"] = r.order;
  j["partial"] = r.partial;
  j["bounded"] = r.bounded ? json(*r.bounded) : json(nullptr);
  json bounds = json::object();
  for (const auto& [place, b] : r.place_bounds) {
    if (!b) {
      bounds[place] = nullptr;
    } else if (b->omega) {
      bounds[place] = "omega";
    } else {
      bounds[place] = b->count;
    }
  }
  j["place_bounds"] = bounds;
  json live = json::object();
  for (const auto& [t, v] : r.semi_live) live[t] = v ? json(*v) : json(nullptr);
  j["semi_live"] = live;
  j["active_count"] = r.active_count;
  j["inactive_count"] = r.inactive_count;
  if (r.elapsed_seconds) j["elapsed_seconds"] = *r.elapsed_seconds;
  return j.dump(2) + "\n";
}

AnalysisReport parse_report(std::string_view text) {
  try {
    const json j = json::parse(text);
    AnalysisReport r;
    r.order = j.at("order").get<std::string>();
    r.partial = j.at("partial").get<bool>();
    if (!j.at("bounded").is_null()) r.bounded = j.at("bounded").get<bool>();
    for (const auto& [place, v] : j.at("place_bounds").items()) {
      std::optional<OmegaCount> b;
      if (v.is_string()) {
        if (v.get<std::string>() != "omega") throw std::invalid_argument("bad bound for " + place);
        b = OmegaCount::infinite();
      } else if (!v.is_null()) {
        b = OmegaCount{v.get<std::uint32_t>(), false};
      }
      r.place_bounds.emplace_back(place, b);
    }
    for (const auto& [t, v] : j.at("semi_live").items()) {
      r.semi_live.emplace_back(t, v.is_null() ? std::nullopt : std::optional<bool>(v.get<bool>()));
    }
    r.active_count = j.at("active_count").get<std::size_t>();
    r.inactive_count = j.at("inactive_count").get<std::size_t>();
    if (j.contains("elapsed_seconds")) r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

}  // namespace tbcover
