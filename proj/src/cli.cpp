#include "tbcover/cli.hpp"

#include "tbcover/coverability.hpp"
#include "tbcover/export.hpp"
#include "tbcover/net.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

namespace tbcover {

namespace {

struct AnalyzeOptions {
  std::string input;
  std::string tree_path;
  std::string graph_path;
  std::string report_path;
  std::string order = "lifo";
  std::size_t max_nodes = Limits{}.max_nodes;
  double timeout_seconds = 0;
  bool quiet = false;
  bool timing = false;
};

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  TBNet net;
  try {
    net = load_net(opt.input);
  } catch (const std::exception& e) {
    err << "error: " << opt.input << ": " << e.what() << "\n";
    return exit_input_error;
  }

  const WaitOrder order = *parse_wait_order(opt.order);
  Limits limits;
  limits.max_nodes = opt.max_nodes;
  if (opt.timeout_seconds > 0) {
    limits.timeout = std::chrono::milliseconds(static_cast<long long>(opt.timeout_seconds * 1000));
  }

  const auto started = std::chrono::steady_clock::now();
  const CoverTree tree = tbct(net, order, limits);
  AnalysisReport report = analyze_report(net, tree, order);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  if (opt.timing) report.elapsed_seconds = elapsed.count();

  std::optional<CoverGraph> graph;
  if (!tree.partial()) graph = tree_to_graph(tree);

  if (!opt.tree_path.empty() && !write_file(opt.tree_path, export_dot(tree, net), err)) return exit_input_error;
  if (!opt.graph_path.empty()) {
    if (graph) {
      if (!write_file(opt.graph_path, export_dot(*graph, net), err)) return exit_input_error;
    } else {
      err << "warning: analysis incomplete, no graph written\n";
    }
  }
  if (!opt.report_path.empty() && !write_file(opt.report_path, export_report(report), err)) {
    return exit_input_error;
  }

  if (!opt.quiet) {
    out << "tree: " << tree.size() << " nodes, " << report.active_count << " active, " << report.inactive_count
        << " inactive\n";
    if (graph) out << "graph: " << graph->nodes.size() << " nodes, " << graph->edges.size() << " edges\n";
    if (tree.partial()) out << "partial: limit reached\n";
    out << "bounded: " << (report.bounded ? (*report.bounded ? "yes" : "no") : "unknown") << "\n";
    for (const auto& [p, b] : report.place_bounds) out << "  " << p << ": " << (b ? to_string(*b) : "unknown") << "\n";
    for (const auto& [t, live] : report.semi_live) {
      out << "  " << t << ": " << (live ? (*live ? "fires" : "never fires") : "unknown") << "\n";
    }
    if (report.elapsed_seconds) out << "time: " << *report.elapsed_seconds << " s\n";
  }
  return tree.partial() ? exit_partial : exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coverability analysis of Time-Basic Petri nets", "tbcover"};
  app.require_subcommand(1);
  AnalyzeOptions opt;
  CLI::App* cmd = app.add_subcommand("analyze", "build the coverability tree and graph of a .tb net");
  cmd->add_option("file", opt.input, "net file")->required();
  cmd->add_option("--tree", opt.tree_path, "write the tree as DOT");
  cmd->add_option("--graph", opt.graph_path, "write the graph as DOT");
  cmd->add_option("--report", opt.report_path, "write a JSON report");
  cmd->add_option("--order", opt.order, "worklist order")
      ->check(CLI::IsMember({"lifo", "fifo"}))
      ->capture_default_str();
  cmd->add_option("--max-nodes", opt.max_nodes, "node limit")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--timeout", opt.timeout_seconds, "wall-clock limit in seconds (0 = none)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--quiet", opt.quiet, "no summary on stdout");
  cmd->add_flag("--timing", opt.timing, "include elapsed time in the report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_input_error;
  }
  return analyze(opt, out, err);
}

}  // namespace tbcover
