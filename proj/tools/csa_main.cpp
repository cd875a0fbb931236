#include <iostream>

#include "CLI11.hpp"

#include "csa/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"closed-form and simulated freshness/throughput metrics for a "
               "cognitive shared-access network"};
  app.require_subcommand(1);

  csa::RunOptions options;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", options.scenario_path, "scenario file")->required();
    cmd->add_option("--out", options.out_path,
                    "output path; '-' or absent is stdout, relative paths join $CSA_OUT_DIR");
    cmd->add_option("--format", options.format, "json or csv (default depends on command)");
    return cmd;
  };
  auto add_sim = [&](CLI::App* cmd) {
    cmd->add_option("--seed", options.seed, "override [sim] seed");
    cmd->add_option("--slots", options.slots, "override [sim] horizon (measured slots)");
    cmd->add_option("--reps", options.reps, "override [sim] replications");
    return cmd;
  };

  add_common(app.add_subcommand("analytic", "closed-form metrics for one configuration"));
  auto* simulate = add_sim(add_common(
      app.add_subcommand("simulate", "slot-level event simulation with replications")));
  simulate->add_flag("--trace", options.trace,
                     "emit the per-packet CSV of a single replication");
  add_common(app.add_subcommand(
      "optimize-age", "minimize average age subject to a secondary throughput floor"));
  add_common(app.add_subcommand(
      "optimize-throughput", "maximize secondary throughput subject to an age ceiling"));
  add_common(app.add_subcommand("sweep", "closed-form grid over [sweep] axes, CSV"));
  add_sim(add_common(
      app.add_subcommand("validate", "closed forms against the simulator, one table")));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? csa::kExitOk : csa::kExitError;
  }
  options.command = app.get_subcommands().front()->get_name();
  return csa::run_command(options, std::cout, std::cerr);
}
