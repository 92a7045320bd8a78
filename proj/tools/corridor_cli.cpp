// corridor: offline transit-corridor planning toolkit.
//
// Subcommands: plan, candidates, stops, compare, validate. All inputs are
// local files named by a dataset manifest; all outputs are GeoJSON/JSON
// files that load in standard map tooling.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corridor/dataset.hpp"
#include "corridor/pipeline.hpp"

namespace {

struct CliOptions {
  std::string config;
  std::string manifest;
  std::string origin;
  std::string dest;
  std::string out;
  std::string reference;
  std::vector<std::string> sets;
  std::optional<int> k;
  std::optional<std::int64_t> seed;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config, "key = value run configuration file");
  cmd->add_option("--manifest", opt.manifest, "dataset manifest file");
  cmd->add_option("--origin", opt.origin, "origin: node id or lat,lon");
  cmd->add_option("--dest", opt.dest, "destination: node id or lat,lon");
  cmd->add_option("--k", opt.k, "number of candidate routes");
  cmd->add_option("--seed", opt.seed, "engine RNG seed");
  cmd->add_option("--out", opt.out, "output directory");
  cmd->add_option("--set", opt.sets,
                  "dotted-key override, e.g. --set aco.alpha=2 --set stops.min_spacing_m=800");
}

corridor::RunConfig build_config(const CliOptions& opt) {
  corridor::RunConfig cfg;
  if (!opt.config.empty()) corridor::config::apply_file(cfg, opt.config);
  for (const std::string& assignment : opt.sets) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
      throw corridor::ConfigError("--set expects key=value, got '" + assignment + "'");
    corridor::config::apply(cfg, corridor::kv::trim(assignment.substr(0, eq)),
                            corridor::kv::trim(assignment.substr(eq + 1)));
  }
  if (!opt.manifest.empty()) cfg.manifest = opt.manifest;
  if (!opt.origin.empty()) cfg.origin = opt.origin;
  if (!opt.dest.empty()) cfg.dest = opt.dest;
  if (opt.k) cfg.k = *opt.k;
  if (opt.seed) cfg.aco.seed = static_cast<std::uint64_t>(*opt.seed);
  if (!opt.out.empty()) cfg.out_dir = opt.out;
  if (cfg.manifest.empty()) throw corridor::ConfigError("no dataset manifest given");
  return cfg;
}

int cmd_plan(const CliOptions& opt) {
  const corridor::RunConfig cfg = build_config(opt);
  const auto loaded = corridor::load_city_dataset(cfg.manifest);
  const corridor::PlanOutputs out = corridor::run_plan(loaded.dataset, cfg);
  corridor::write_artifacts(cfg.out_dir, corridor::plan_artifacts(out, loaded.dataset, cfg));
  std::cout << "plan: origin node " << out.origin << ", destination node " << out.dest << "\n"
            << "  candidates: " << out.candidates.size() << "\n"
            << "  best cost: " << out.result.best_cost << " (" << out.result.factors.total_distance_m
            << " m, " << out.result.factors.total_time_s << " s)\n"
            << "  intermediate stops: " << out.route_stops.size() << "\n"
            << "  wrote candidates.geojson optimal.geojson factors.json stops.geojson "
               "final.geojson to "
            << cfg.out_dir.string() << "\n";
  return 0;
}

int cmd_candidates(const CliOptions& opt) {
  const corridor::RunConfig cfg = build_config(opt);
  const auto loaded = corridor::load_city_dataset(cfg.manifest);
  const auto routes = corridor::run_candidates(loaded.dataset, cfg);
  corridor::write_artifacts(
      cfg.out_dir,
      {{"candidates.geojson",
        corridor::dump_json(
            corridor::routes_feature_collection(routes, cfg.aco.w_d, cfg.aco.w_t))}});
  std::cout << "candidates: " << routes.size() << " route(s) written to "
            << (cfg.out_dir / "candidates.geojson").string() << "\n";
  return 0;
}

int cmd_stops(const CliOptions& opt) {
  const corridor::RunConfig cfg = build_config(opt);
  const auto loaded = corridor::load_city_dataset(cfg.manifest);
  const auto stops = corridor::run_citywide_stops(loaded.dataset, cfg);
  corridor::write_artifacts(
      cfg.out_dir,
      {{"citywide_stops.geojson",
        corridor::dump_json(corridor::citywide_stops_feature_collection(stops))}});
  std::cout << "stops: " << stops.size() << " candidate stop(s) written to "
            << (cfg.out_dir / "citywide_stops.geojson").string() << "\n";
  return 0;
}

int cmd_compare(const CliOptions& opt) {
  if (opt.reference.empty()) throw corridor::ConfigError("--reference file required");
  const corridor::RunConfig cfg = build_config(opt);
  const auto loaded = corridor::load_city_dataset(cfg.manifest);
  const corridor::PlanOutputs out = corridor::run_plan(loaded.dataset, cfg);
  const auto reference = corridor::load_reference_stops(opt.reference);
  const auto report = corridor::compare_with_reference(out.route_stops, reference,
                                                       cfg.stops.corridor_radius_m);
  corridor::write_artifacts(
      cfg.out_dir,
      {{"compare_report.json",
        corridor::dump_json(corridor::variation_report_json(report))}});
  std::cout << "compare: model " << report.model_count << " vs reference "
            << report.reference_count << " stops (delta " << report.count_delta << "), "
            << report.matched.size() << " matched\n"
            << "  report written to " << (cfg.out_dir / "compare_report.json").string() << "\n";
  return 0;
}

int cmd_validate(const CliOptions& opt) {
  const corridor::RunConfig cfg = build_config(opt);
  const auto loaded = corridor::load_city_dataset(cfg.manifest);
  for (const auto& layer : loaded.report.layers) {
    std::cout << layer.name << ": " << layer.loaded << " feature(s) loaded, " << layer.dropped
              << " dropped (" << layer.file << ")\n";
    for (const auto& d : layer.diagnostics)
      std::cout << "  feature " << d.feature_index << ": " << d.rule << "\n";
  }
  const auto& g = loaded.dataset.network;
  std::cout << "network: " << g.node_count() << " nodes, " << g.edge_count() << " edges, "
            << g.component_count() << " component(s)";
  if (g.build_stats().merged_parallel_edges > 0)
    std::cout << ", " << g.build_stats().merged_parallel_edges << " parallel edge(s) merged";
  if (g.build_stats().dropped_self_loops > 0)
    std::cout << ", " << g.build_stats().dropped_self_loops << " self-loop(s) dropped";
  std::cout << "\nbounds: [" << loaded.dataset.bounds.min_lat << ", "
            << loaded.dataset.bounds.min_lon << "] to [" << loaded.dataset.bounds.max_lat
            << ", " << loaded.dataset.bounds.max_lon << "]\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"offline transit-corridor planning toolkit"};
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* plan = app.add_subcommand("plan", "full pipeline: routes, selection, stops");
  CLI::App* candidates = app.add_subcommand("candidates", "k candidate routes only");
  CLI::App* stops = app.add_subcommand("stops", "citywide candidate stops only");
  CLI::App* compare = app.add_subcommand("compare", "plan, then diff against reference stops");
  CLI::App* validate = app.add_subcommand("validate", "dataset lint: load and report layers");
  for (CLI::App* cmd : {plan, candidates, stops, compare, validate})
    add_common_options(cmd, opt);
  compare->add_option("--reference", opt.reference, "reference stop list (Point features)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_plan(opt);
    if (candidates->parsed()) return cmd_candidates(opt);
    if (stops->parsed()) return cmd_stops(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (validate->parsed()) return cmd_validate(opt);
  } catch (const corridor::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
