#include <iostream>

#include <CLI11.hpp>

#include "streamnav/cli.hpp"
#include "streamnav/field_kernels.hpp"

int main(int argc, char** argv) {
  namespace cli = streamnav::cli;

  CLI::App app{"streamnav: streamline-based fleet navigation around failed agents"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "streamnav 1.0");

  cli::SimulateOptions sim;
  std::string sim_config, sim_out = ".";
  std::uint64_t seed = 0;
  bool fast = false, realtime = false;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write step log + summary");
  simulate->add_option("config", sim_config, "Scenario JSON")->required();
  auto* fast_flag = simulate->add_flag("--fast", fast, "Run without real-time pacing (default)");
  simulate->add_flag("--realtime", realtime, "Pace steps at the control period")->excludes(fast_flag);
  simulate->add_option("--out", sim_out, "Output directory");
  auto* seed_opt = simulate->add_option("--seed", seed, "RNG seed (overrides STREAMNAV_SEED and the config)");

  std::string check_config;
  auto* check = app.add_subcommand("check", "Evaluate the pre-flight safety conditions");
  check->add_option("config", check_config, "Scenario JSON")->required();

  cli::FieldOptions fld;
  std::string field_out;
  auto* field = app.add_subcommand("field", "Export phi/psi on a grid as CSV");
  field->add_option("--obstacles", fld.obstacles, "x,y,a_p;x,y,a_p;...")->required();
  field->add_option("--bbox", fld.bbox, "x_min,x_max,y_min,y_max")->required();
  field->add_option("--step", fld.step, "Grid step in meters")->check(CLI::PositiveNumber);
  field->add_option("--out", field_out, "Output CSV (default: stdout)");

  cli::BenchOptions bo;
  bo.k_values.clear();
  auto* bench = app.add_subcommand("bench", "Time navigation steps of a synthetic formation");
  bench->add_option("--agents", bo.agents, "Formation size including the failed leader");
  bench->add_option("--k", bo.k_values, "Retuning passes; repeat or comma-separate to sweep")
      ->delimiter(',');
  bench->add_option("--steps", bo.steps, "Steps per run")->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", bo.seed, "RNG seed");

  app.add_option_function<std::string>(
      "--kernel",
      [](const std::string& v) {
        using streamnav::kernels::Isa;
        streamnav::kernels::set_active_isa(v == "scalar" ? Isa::Scalar : Isa::Avx2);
      },
      "Field kernel override: scalar or avx2 (STREAMNAV_KERNEL=scalar also works)")
      ->check(CLI::IsMember({"scalar", "avx2"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*simulate) {
    sim.config = sim_config;
    sim.out_dir = sim_out;
    sim.realtime = realtime;
    if (*seed_opt) sim.seed = seed;
    return cli::simulate(sim, std::cout, std::cerr);
  }
  if (*check) return cli::check(check_config, std::cout, std::cerr);
  if (*field) {
    fld.out = field_out;
    return cli::field(fld, std::cout, std::cerr);
  }
  if (bo.k_values.empty()) bo.k_values = {2};
  return cli::bench(bo, std::cout, std::cerr);
}
