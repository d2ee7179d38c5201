#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <json.hpp>

#include "cnet/acceptance.hpp"
#include "cnet/engine.hpp"
#include "cnet/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAudit = 2;
constexpr int kExitVerify = 3;

cnet::Parameters load(const std::string& config) {
  return config.empty() ? cnet::validate_params(cnet::Parameters{}) : cnet::io::parse_config(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Credit-network economy simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cnet::io::kVersion);

  std::string config, out, grid;
  std::optional<std::uint64_t> seed;
  std::optional<int> periods, agents;

  auto* simulate = app.add_subcommand("simulate", "Run one simulation and write its outputs");
  simulate->add_option("--config", config, "key=value configuration file")
      ->check(CLI::ExistingFile);
  simulate->add_option("--out", out, "Output directory")->required();
  simulate->add_option("--seed", seed, "Override the RNG seed");
  simulate->add_option("--periods", periods, "Override the horizon");
  simulate->add_option("--agents", agents, "Override the number of agents per sector");

  auto* sweep = app.add_subcommand("sweep", "Run a one-parameter grid");
  sweep->add_option("--config", config, "Base configuration file")->check(CLI::ExistingFile);
  sweep->add_option("--grid", grid, "KEY=START:STOP:STEPS")->required();
  sweep->add_option("--out", out, "Output directory")->required();

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite over seeds 1..10");
  verify->add_option("--out", out, "Directory for verification artifacts")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) {
      auto p = load(config);
      if (seed) p.seed = *seed;
      if (periods) p.horizon = *periods;
      if (agents) p.n_agents = *agents;
      cnet::validate_params(p);
      const auto started = cnet::io::utc_now();
      const auto result = cnet::run(p);
      const auto files = cnet::io::emit_all(result, out, started, cnet::io::utc_now());
      std::cout << "wrote " << files.size() << " files to " << out << "\n";
      return kExitOk;
    }
    if (*sweep) {
      const auto base = load(config);
      const auto points = cnet::io::parse_grid(grid);
      const auto summary = cnet::io::sweep(base, points, out);
      std::cout << "wrote " << summary.string() << "\n";
      return kExitOk;
    }
    if (*verify) {
      std::filesystem::create_directories(out);
      cnet::acceptance::Options opts;
      opts.scratch_dir = std::filesystem::path(out) / "determinism";
      const auto results = cnet::acceptance::run_acceptance(opts);
      nlohmann::json j = nlohmann::json::array();
      bool all = true;
      for (const auto& r : results) {
        std::cout << cnet::acceptance::format_line(r) << "\n";
        all = all && r.passed;
        j.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
      }
      std::ofstream(std::filesystem::path(out) / "verify.json", std::ios::binary) << j.dump(2)
                                                                                   << "\n";
      if (cnet::acceptance::audit_failed(results)) return kExitAudit;
      return all ? kExitOk : kExitVerify;
    }
  } catch (const cnet::AuditError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAudit;
  } catch (const cnet::io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cnet::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
