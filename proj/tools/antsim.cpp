#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "antsim/scenario.hpp"
#include "antsim/serve.hpp"
#include "antsim/world.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_path) {
  antsim::Scenario scenario = antsim::load_scenario(scenario_path);
  if (seed) {
    scenario.seed = *seed;
    scenario.link.seed = *seed;
  }
  antsim::RunSummary summary;
  if (out_path.empty()) {
    summary = antsim::run_scenario(scenario);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "antsim: cannot write " << out_path << '\n';
      return 1;
    }
    summary = antsim::run_scenario(scenario, &out);
  }
  std::cout << antsim::to_json(summary).dump(2) << '\n';
  return 0;
}

int cmd_fuzz(double seconds, std::uint64_t seed, double rate) {
  antsim::Scenario scenario;
  scenario.seed = seed;
  scenario.link.seed = seed;
  scenario.link.noise_rate = rate;
  scenario.duration = antsim::from_seconds(seconds);
  scenario.tx.enabled = false;
  const auto summary = antsim::run_scenario(scenario);

  // Five valid windows out of 2^24 per noise byte once the window is primed.
  const double per_byte = 5.0 / 16777216.0;
  const auto bytes = summary.noise_delivered;
  nlohmann::json report = {
      {"seconds", seconds},
      {"seed", seed},
      {"noise_bytes", bytes},
      {"noise_rejected", summary.noise_rejected},
      {"false_accepts", summary.false_accepts},
      {"false_accept_rate", bytes > 0 ? static_cast<double>(summary.false_accepts) / bytes : 0.0},
      {"expected_false_accepts", per_byte * static_cast<double>(bytes)},
      {"final_x", summary.final_pose.position.x()},
      {"final_y", summary.final_pose.position.y()},
      {"wall_seconds", summary.wall_seconds},
  };
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_serve(const std::string& address, std::uint16_t port, const std::string& assets,
              const std::string& scenario_path) {
  antsim::ServeOptions options;
  options.address = address;
  options.port = port;
  options.assets = assets;
  if (!scenario_path.empty()) options.scenario = antsim::load_scenario(scenario_path);
  antsim::LiveService service(options);
  service.start();
  std::cerr << "antsim: serving on http://" << address << ':' << service.port()
            << "/ (websocket /ws, assets " << assets << ")\n";
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  service.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AntBot I teleoperation simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  auto* run = app.add_subcommand("run", "Run a scenario in batch mode");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_path, "Telemetry NDJSON output file");

  double fuzz_seconds = 60.0;
  std::uint64_t fuzz_seed = 42;
  double fuzz_rate = 1000.0;
  auto* fuzz = app.add_subcommand("fuzz", "Noise-only protocol soak; prints false-accept stats");
  fuzz->add_option("--seconds", fuzz_seconds, "Simulated seconds")->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", fuzz_seed, "Noise RNG seed");
  fuzz->add_option("--rate", fuzz_rate, "Noise bytes per second")->check(CLI::NonNegativeNumber);

  std::string address = "0.0.0.0";
  std::uint16_t port = 8080;
  std::string assets = "ui/dist";
  std::string serve_scenario;
  auto* serve = app.add_subcommand("serve", "Live teleoperation service");
  serve->add_option("--port", port, "TCP port (0 picks one)");
  serve->add_option("--address", address, "Bind address");
  serve->add_option("--assets", assets, "Static UI directory served at /");
  serve->add_option("--scenario", serve_scenario, "Scenario JSON for link/robot configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario_path, seed, out_path);
    if (*fuzz) return cmd_fuzz(fuzz_seconds, fuzz_seed, fuzz_rate);
    if (*serve) return cmd_serve(address, port, assets, serve_scenario);
  } catch (const antsim::ScenarioError& e) {
    std::cerr << "antsim: invalid scenario: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "antsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
