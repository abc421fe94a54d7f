#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "fracbubble/checks.hpp"
#include "fracbubble/commands.hpp"
#include "fracbubble/config.hpp"
#include "fracbubble/io.hpp"

using namespace fracbubble;

int main(int argc, char** argv) {
  CLI::App app{"Perturbed fractional critical equation: landscape, reduction and regularity experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int threads = 1;
  bool list_only = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration (defaults when omitted)");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads (FRACBUBBLE_THREADS overrides)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* landscape = app.add_subcommand("landscape", "tabulate Γ on a (μ, ξ) lattice and locate critical points");
  CLI::App* asymptotics = app.add_subcommand("asymptotics", "small-μ and far-center rates of Γ");
  CLI::App* solve = app.add_subcommand("solve", "Lyapunov-Schmidt reduction at the critical points of Γ");
  CLI::App* regularity = app.add_subcommand("regularity", "level-set iteration and recursion audit");
  CLI::App* verify = app.add_subcommand("verify", "run the self-check suite");
  for (CLI::App* sub : {landscape, asymptotics, solve, regularity, verify}) add_common(sub);
  verify->add_flag("--list", list_only, "print check names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (verify->parsed() && list_only) {
    for (const std::string& name : check_names()) std::cout << name << '\n';
    return kExitOk;
  }

  return run_guarded([&]() -> int {
    const RunConfig c = config_path.empty() ? default_config() : load_config(config_path);
    const int t = resolve_threads(threads);
    OutputDir out(out_dir);
    if (landscape->parsed()) return cmd_landscape(c, out, t);
    if (asymptotics->parsed()) return cmd_asymptotics(c, out, t);
    if (solve->parsed()) return cmd_solve(c, out, t);
    if (regularity->parsed()) return cmd_regularity(c, out, t);
    std::string report;
    const int rc = cmd_verify(c, out, t, &report);
    std::cout << report << '\n';
    return rc;
  });
}
