#include <cstdio>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "conslaw/error.hpp"

namespace {

const char* code_name(conslaw::ErrorCode c) {
  switch (c) {
    case conslaw::ErrorCode::invalid_argument: return "invalid_argument";
    case conslaw::ErrorCode::non_convex: return "non_convex";
    case conslaw::ErrorCode::vacuum: return "vacuum";
    case conslaw::ErrorCode::blowup: return "blowup";
    case conslaw::ErrorCode::domain_too_small: return "domain_too_small";
    case conslaw::ErrorCode::empty_ensemble: return "empty_ensemble";
  }
  return "error";
}

struct Flags {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double tolerance = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
  using Command = std::function<int(cli::Run&)>;
  const std::vector<std::pair<std::string, std::pair<Command, std::string>>> commands{
      {"sticky", {cli::cmd_sticky, "event-driven sticky particle simulation"}},
      {"hopflax", {cli::cmd_hopflax, "convex hull of the shifted potential"}},
      {"flowmap", {cli::cmd_flowmap, "flow map partition and GVP clusters"}},
      {"genpot", {cli::cmd_genpot, "generalized potential minimizers and plateaus"}},
      {"fronttrack", {cli::cmd_fronttrack, "front tracking for a piecewise-linear flux"}},
      {"mc-stats", {cli::cmd_mc_stats, "Monte Carlo n-point statistics and hierarchy residuals"}},
      {"fm-shocks", {cli::cmd_fm_shocks, "parabola-contact shocks of Brownian potentials"}},
      {"crosscheck", {cli::cmd_crosscheck, "compare the four exact solvers"}},
  };

  CLI::App app{"Exact solvers for sticky particles and scalar conservation laws"};
  app.require_subcommand(1);
  Flags flags;
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, CLI::Option*> seed_opt, tol_opt;
  for (const auto& [name, cmd] : commands) {
    CLI::App* s = app.add_subcommand(name, cmd.second);
    s->add_option("--config", flags.config, "YAML config file")->required();
    s->add_option("--out", flags.out, "output directory");
    seed_opt[name] = s->add_option("--seed", flags.seed, "overrides the config seed");
    s->add_option("--workers", flags.workers, "worker threads (mc-stats only)")->check(CLI::PositiveNumber);
    tol_opt[name] = s->add_option("--tolerance", flags.tolerance, "overrides the config tolerance");
    subs[name] = s;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& [name, cmd] : commands) {
    if (!subs[name]->parsed()) continue;
    try {
      nlohmann::json resolved;
      cli::Section cfg = cli::Section::load(flags.config, &resolved);
      cli::Run run{cfg, cli::Outputs(flags.out), std::nullopt, name == "mc-stats" ? flags.workers : 1u,
                   std::nullopt};
      if (seed_opt[name]->count()) run.seed_flag = flags.seed;
      if (tol_opt[name]->count()) run.tolerance_flag = flags.tolerance;
      int code = cmd.first(run);
      nlohmann::json manifest = {
          {"command", name},
          {"config_file", flags.config},
          {"flags", {{"workers", run.workers}}},
          {"resolved", resolved},
          {"used", run.used},
          {"summary", run.summary},
          {"outputs", run.out.listing()},
          {"exit_code", code},
      };
      run.out.write("manifest.json", manifest.dump(1) + "\n");
      std::cout << name << ": " << run.summary.dump() << "\n";
      if (code != 0) std::cerr << name << ": tolerance not met\n";
      return code;
    } catch (const cli::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const conslaw::Error& e) {
      std::cerr << "error (" << code_name(e.code()) << "): " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
