// aiora: validate scenarios, plan placements, run simulations, serve the API.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "aiora/json_io.hpp"
#include "aiora/scenario_config.hpp"
#include "aiora/simulation.hpp"
#include "http_server.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kInfeasible = 3;
constexpr int kRuntime = 4;

aiora::HttpServer* g_server = nullptr;

int report(const aiora::Error& e) {
  std::cerr << "error [" << aiora::to_string(e.code()) << "]: " << e.what() << '\n';
  for (const auto& d : e.details()) std::cerr << "  - " << d << '\n';
  switch (e.code()) {
    case aiora::ErrorCode::ParseError:
    case aiora::ErrorCode::ValidationError:
      return kValidation;
    case aiora::ErrorCode::Infeasible:
      return kInfeasible;
    default:
      return kRuntime;
  }
}

int cmd_validate(const std::string& path) {
  const auto cfg = aiora::load_scenario(path);
  for (const auto& w : aiora::validate_topology(cfg.topology).warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "ok: " << cfg.topology.segments.size() << " segments, " << cfg.continuums.size()
            << " continuums, " << cfg.applications.size() << " applications, " << cfg.loops.size()
            << " loops, " << cfg.events.size() << " events, horizon " << cfg.horizon << '\n';
  return kOk;
}

int cmd_place(const std::string& topology_path, const std::string& app_path, const std::string& weights_path) {
  const auto topology = aiora::json_io::load_topology(topology_path);
  const auto report = aiora::validate_topology(topology);
  if (!report.ok()) throw aiora::Error(aiora::ErrorCode::ValidationError, "invalid topology", report.violations);
  const auto app = aiora::json_io::load_application(app_path);
  if (auto problems = aiora::validate_application(app); !problems.empty())
    throw aiora::Error(aiora::ErrorCode::ValidationError, "invalid application " + app.id, problems);
  const auto weights = aiora::json_io::load_weights(weights_path);
  const auto result = aiora::place(topology, aiora::full_capacity_view(topology), app, weights);
  std::cout << aiora::placement_result_json(result).dump(2) << '\n';
  return result.feasible() ? kOk : kInfeasible;
}

int cmd_sim_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out,
                const std::string& metrics_path, const std::string& broker_state) {
  auto cfg = aiora::load_scenario(path);
  if (seed) cfg.seed = *seed;
  aiora::Simulator sim(cfg);
  sim.run_to_end();
  const auto& trace = sim.trace().records();
  aiora::write_trace(out, trace);
  const auto metrics = aiora::summarize(trace);
  if (!metrics_path.empty()) aiora::json_io::write_file(metrics_path, metrics);
  if (!broker_state.empty()) aiora::json_io::write_file(broker_state, sim.broker().to_json());
  std::cerr << "trace: " << trace.size() << " records, hash " << std::hex << aiora::trace_hash(trace) << std::dec
            << ", energy " << metrics.energy_wh << " Wh, actuations " << metrics.actuations_total << '\n';
  return sim.conservation_violations() == 0 ? kOk : kRuntime;
}

int cmd_serve(const std::string& path, const std::string& host, int port, std::int64_t ticks) {
  auto cfg = aiora::load_scenario(path);
  aiora::Simulator sim(cfg);
  sim.setup();
  for (std::int64_t i = 0; i < ticks && !sim.finished(); ++i) sim.step();
  aiora::HttpServer server(sim);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ":" << port << '\n';
    return kRuntime;
  }
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  std::cerr << "serving on http://" << host << ":" << bound << '\n';
  server.serve();
  g_server = nullptr;
  return kOk;
}

int cmd_loops() {
  const auto r = aiora::LoopRegistry::builtin();
  std::cout << "analyzers:";
  for (const auto& [id, f] : r.analyzers) std::cout << ' ' << id;
  std::cout << "\npolicies:\n";
  for (const auto& [id, p] : r.policies) std::cout << "  " << id << "  params " << p.params_schema << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AIORA orchestration engine and simulation harness"};
  app.require_subcommand(1);

  std::string scenario;
  auto* validate = app.add_subcommand("validate", "Validate a scenario file");
  validate->add_option("scenario", scenario, "Scenario JSON")->required();

  auto* plan = app.add_subcommand("plan", "Placement planning");
  plan->require_subcommand(1);
  std::string topology_path, app_path, weights_path;
  auto* place = plan->add_subcommand("place", "Cost-optimal placement over full segment capacity");
  place->add_option("--topology", topology_path, "Topology JSON")->required();
  place->add_option("--app", app_path, "Application descriptor JSON")->required();
  place->add_option("--weights", weights_path, "Objective weights JSON")->required();

  auto* sim = app.add_subcommand("sim", "Simulation");
  sim->require_subcommand(1);
  auto* run = sim->add_subcommand("run", "Run a scenario and write its trace");
  std::optional<std::uint64_t> seed;
  std::string out, metrics, broker_state;
  run->add_option("scenario", scenario, "Scenario JSON")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out, "Trace output (JSON lines)")->required();
  run->add_option("--metrics", metrics, "Metrics summary output");
  run->add_option("--broker-state", broker_state, "Write the final broker checkpoint");

  auto* serve = app.add_subcommand("serve", "Serve the northbound API over a live engine");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::int64_t ticks = 0;
  serve->add_option("scenario", scenario, "Scenario JSON")->required();
  serve->add_option("--port", port, "TCP port (0 picks one)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--ticks", ticks, "Simulate this many ticks before serving");

  auto* loops = app.add_subcommand("loops", "List built-in analyzers and policies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*validate) return cmd_validate(scenario);
    if (*place) return cmd_place(topology_path, app_path, weights_path);
    if (*run) return cmd_sim_run(scenario, seed, out, metrics, broker_state);
    if (*serve) return cmd_serve(scenario, host, port, ticks);
    if (*loops) return cmd_loops();
  } catch (const aiora::Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kRuntime;
}
