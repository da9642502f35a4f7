/// @file driver.hpp
/// Time-loop orchestration: initialization, the evolve/filter/relax cycle,
/// runtime diagnostics and on-disk outputs.

#pragma once

#include "efr/cases.hpp"
#include "efr/config.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace efr {

// One diagnostics row, sampled at t = 0, every diagnostic_stride steps and
// at the final step.
struct DiagnosticRecord {
  double t{0.0};
  double theta_prime_min{0.0}, theta_prime_max{0.0};
  double w_min{0.0}, w_max{0.0};
  std::optional<double> front;  // ground-row crossing of theta' = -1 K, if any
  double mu_av{0.0};            // volume-averaged filter viscosity [Pa s]
  double total_mass{0.0};       // sum of rho V at unit depth [kg/m]
  int pressure_iterations{0};
  int enthalpy_iterations{0};
  int filter_iterations{0};  // summed over the three filter solves of the step
};

struct RunResult {
  Grid grid;
  State state;      // fields after the last completed step
  Field indicator;  // indicator of the last completed step (t = 0: from the IC)
  std::vector<DiagnosticRecord> diagnostics;
  long steps{0};
  std::vector<std::string> snapshot_files;  // paths written, in time order
};

// Raised when a state invariant (finiteness, positivity) breaks mid-run.
class SimulationAbort : public std::runtime_error {
 public:
  explicit SimulationAbort(const std::string& what) : std::runtime_error(what) {}
};

using StepCallback = std::function<void(long step, double t, const State& s)>;

// Runs the configured benchmark to t_final. Writes snapshot files at the
// configured times plus diagnostics.csv and manifest.txt into
// cfg.output_dir (created if missing). The callback, when set, runs after
// every completed step.
RunResult run_simulation(const RunConfig& cfg, const StepCallback& on_step = {});

// Legacy-VTK structured-points snapshot carrying cell data rho, u, w, p,
// p_prime, h, T and theta_prime.
void write_snapshot(const std::string& path, const Grid& g, const State& s,
                    double theta_ref, const Constants& c);

// CSV with header t,theta_prime_min,theta_prime_max,w_min,w_max,
// front_location,mu_av,total_mass,pressure_iterations,enthalpy_iterations,
// filter_iterations; the front column is empty when absent.
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticRecord>& rows);

// Sorted "key = value" rendering of the resolved configuration.
void write_manifest(const std::string& path, const RunConfig& cfg);

}  // namespace efr
