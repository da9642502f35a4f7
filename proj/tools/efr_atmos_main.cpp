/// Command-line front end: validates a run configuration, executes the
/// benchmark and reports the headline diagnostics.
///
/// Exit codes: 0 success, 1 runtime/simulation failure, 2 bad usage or
/// configuration.

#include "efr/driver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

namespace {

void print_summary(const efr::RunResult& r) {
  const efr::DiagnosticRecord& d = r.diagnostics.back();
  std::printf("completed %ld steps to t = %g s on a %d x %d grid\n", r.steps,
              d.t, r.grid.nx, r.grid.nz);
  std::printf("  theta' range [%.6g, %.6g] K\n", d.theta_prime_min,
              d.theta_prime_max);
  std::printf("  w range      [%.6g, %.6g] m/s\n", d.w_min, d.w_max);
  if (d.front) std::printf("  front location %.6g m\n", *d.front);
  std::printf("  mean filter viscosity %.6g Pa s\n", d.mu_av);
  std::printf("  total mass %.17g kg/m\n", d.total_mass);
  for (const std::string& f : r.snapshot_files)
    std::printf("  wrote %s\n", f.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Structured-grid finite-volume solver for mildly compressible buoyant "
      "flow with evolve-filter-relax stabilization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  bool deterministic = false;
  bool quiet = false;
  long progress = 0;

  CLI::App* run = app.add_subcommand("run", "Run a configured benchmark");
  run->add_option("-c,--config", config_path, "key=value configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", output_dir,
                  "output directory (overrides the config)");
  run->add_flag("--deterministic", deterministic,
                "single-threaded reproducible execution (always on; accepted "
                "for compatibility)");
  run->add_option("--progress", progress,
                  "print a progress line every N steps (0 = off)");
  run->add_flag("-q,--quiet", quiet, "suppress the final summary");

  CLI::App* check = app.add_subcommand(
      "check", "Validate a configuration and print the resolved settings");
  check->add_option("-c,--config", config_path, "key=value configuration file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    efr::RunConfig cfg = efr::load_config_file(config_path);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    cfg.deterministic = cfg.deterministic || deterministic;
    efr::finalize_config(cfg);

    if (check->parsed()) {
      std::cout << efr::render_config(cfg);
      return 0;
    }

    const long total_steps = static_cast<long>(cfg.t_final / cfg.dt + 0.5);
    efr::StepCallback cb;
    if (progress > 0)
      cb = [&](long step, double t, const efr::State&) {
        if (step % progress == 0 || step == total_steps)
          std::fprintf(stderr, "step %ld/%ld  t = %.6g s\n", step, total_steps, t);
      };

    const efr::RunResult result = efr::run_simulation(cfg, cb);
    if (!quiet) print_summary(result);
    return 0;
  } catch (const efr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
