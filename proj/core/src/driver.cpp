#include "efr/driver.hpp"

#include "efr/evolve.hpp"
#include "efr/filter.hpp"
#include "efr/relax.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace efr {

namespace {

void require_finite(const Field& f, long step, const char* name) {
  for (double v : f)
    if (!std::isfinite(v))
      throw SimulationAbort("step " + std::to_string(step) + ": non-finite " + name);
}

void require_positive(const Field& f, long step, const char* name) {
  require_finite(f, step, name);
  for (double v : f)
    if (v <= 0.0)
      throw SimulationAbort("step " + std::to_string(step) + ": non-positive " + name);
}

void check_state(const State& s, long step) {
  require_positive(s.rho, step, "density");
  require_positive(s.p, step, "pressure");
  require_positive(s.T, step, "temperature");
  require_finite(s.u, step, "x-velocity");
  require_finite(s.w, step, "z-velocity");
  require_finite(s.h, step, "enthalpy");
  require_finite(s.p_prime, step, "dynamic pressure");
}

DiagnosticRecord make_record(double t, const State& s, const Field& mu_bar,
                             const Grid& g, const Constants& c, double theta_ref,
                             bool want_front, int pit, int eit, int fit) {
  DiagnosticRecord r;
  r.t = t;
  const Field theta_p = theta_perturbation(s.T, s.p, theta_ref, c);
  const Extrema te = field_extrema(theta_p);
  r.theta_prime_min = te.min;
  r.theta_prime_max = te.max;
  const Extrema we = field_extrema(s.w);
  r.w_min = we.min;
  r.w_max = we.max;
  if (want_front) r.front = front_location(theta_p, g);
  r.mu_av = average_viscosity(mu_bar, g);
  double mass = 0.0;
  for (double rho : s.rho) mass += rho;
  r.total_mass = mass * g.cell_volume();
  r.pressure_iterations = pit;
  r.enthalpy_iterations = eit;
  r.filter_iterations = fit;
  return r;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_scalar_block(std::ofstream& out, const char* name, const Field& f) {
  out << "SCALARS " << name << " double 1\n"
      << "LOOKUP_TABLE default\n";
  for (double v : f) out << fmt17(v) << "\n";
}

}  // namespace

void write_snapshot(const std::string& path, const Grid& g, const State& s,
                    double theta_ref, const Constants& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimulationAbort("cannot open snapshot file '" + path + "'");
  out << "# vtk DataFile Version 2.0\n"
      << "efr-atmos cell fields\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << g.nx + 1 << " " << g.nz + 1 << " 2\n"
      << "ORIGIN " << fmt17(g.x0) << " " << fmt17(g.z0) << " 0\n"
      << "SPACING " << fmt17(g.dx) << " " << fmt17(g.dz) << " 1\n"
      << "CELL_DATA " << g.cell_count() << "\n";
  write_scalar_block(out, "rho", s.rho);
  write_scalar_block(out, "u", s.u);
  write_scalar_block(out, "w", s.w);
  write_scalar_block(out, "p", s.p);
  write_scalar_block(out, "p_prime", s.p_prime);
  write_scalar_block(out, "h", s.h);
  write_scalar_block(out, "T", s.T);
  write_scalar_block(out, "theta_prime", theta_perturbation(s.T, s.p, theta_ref, c));
  if (!out) throw SimulationAbort("failed writing snapshot file '" + path + "'");
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticRecord>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimulationAbort("cannot open diagnostics file '" + path + "'");
  out << "t,theta_prime_min,theta_prime_max,w_min,w_max,front_location,mu_av,"
         "total_mass,pressure_iterations,enthalpy_iterations,filter_iterations\n";
  for (const DiagnosticRecord& r : rows) {
    out << fmt17(r.t) << "," << fmt17(r.theta_prime_min) << ","
        << fmt17(r.theta_prime_max) << "," << fmt17(r.w_min) << "," << fmt17(r.w_max)
        << ",";
    if (r.front) out << fmt17(*r.front);
    out << "," << fmt17(r.mu_av) << "," << fmt17(r.total_mass) << ","
        << r.pressure_iterations << "," << r.enthalpy_iterations << ","
        << r.filter_iterations << "\n";
  }
  if (!out) throw SimulationAbort("failed writing diagnostics file '" + path + "'");
}

void write_manifest(const std::string& path, const RunConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimulationAbort("cannot open manifest file '" + path + "'");
  out << render_config(cfg);
  if (!out) throw SimulationAbort("failed writing manifest file '" + path + "'");
}

RunResult run_simulation(const RunConfig& cfg_in, const StepCallback& on_step) {
  RunConfig cfg = cfg_in;
  finalize_config(cfg);
  const BenchmarkSpec spec = benchmark_spec(cfg.benchmark);
  const Constants c = cfg.constants;
  const Grid grid = build_grid(spec.x_min, spec.x_max, spec.z_min, spec.z_max, cfg.h);
  const bool want_front = cfg.benchmark == BenchmarkKind::DensityCurrent;

  State state = cfg.benchmark == BenchmarkKind::RisingBubble
                    ? init_rising_bubble(grid, c)
                    : init_density_current(grid, c);

  EvolveConfig ecfg;
  ecfg.dt = cfg.dt;
  ecfg.scheme = cfg.convection;
  ecfg.lin.tol = cfg.solver_tol;
  const SolverConfig lin = ecfg.lin;

  const long n_steps = std::lround(cfg.t_final / cfg.dt);

  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path out_dir(cfg.output_dir);

  auto snapshot_due = [&](double t) {
    for (double ts : cfg.snapshot_times)
      if (std::abs(t - ts) <= 1e-9 * std::max(1.0, std::abs(ts))) return true;
    return false;
  };
  auto snapshot_name = [](double t) {
    std::ostringstream ss;
    ss << "snapshot_t" << t << ".vtk";
    return ss.str();
  };

  RunResult out;
  out.grid = grid;
  out.steps = n_steps;

  {
    const Field a0 = indicator_field(cfg.filter, state.u, state.w, grid, lin);
    const Field mu0 = artificial_viscosity(state.rho, a0, cfg.filter.alpha, cfg.dt);
    out.indicator = a0;
    out.diagnostics.push_back(
        make_record(0.0, state, mu0, grid, c, spec.theta_ref, want_front, 0, 0, 0));
  }
  if (snapshot_due(0.0)) {
    const std::string path = (out_dir / snapshot_name(0.0)).string();
    write_snapshot(path, grid, state, spec.theta_ref, c);
    out.snapshot_files.push_back(path);
  }

  // The first step starts from the interpolated initial-state flux; every
  // later step advects density with the previous corrected flux so that
  // continuity, the pressure solve and the transported density stay one
  // consistent system.
  FaceField flux = state_mass_flux(state.rho, state.u, state.w, grid);

  // On abort, persist whatever diagnostics were collected before rethrowing
  // so a failed run can still be examined.
  try {
  for (long n = 0; n < n_steps; ++n) {
    const double t_new = static_cast<double>(n + 1) * cfg.dt;

    Field rho_adv = advance_density(state.rho, flux, cfg.dt, grid);
    require_positive(rho_adv, n + 1, "advected density");

    IntermediateState inter = momentum_pressure_step(state, rho_adv, grid, c, ecfg);
    const Field& rho_np1 = inter.rho;
    enthalpy_step(state, rho_np1, inter, grid, c, ecfg);

    Field a = indicator_field(cfg.filter, inter.vx, inter.vz, grid, lin);
    Field mu_bar = artificial_viscosity(rho_np1, a, cfg.filter.alpha, cfg.dt);
    auto [u_bar, rep_u] = helmholtz_filter(inter.vx, mu_bar, rho_np1, cfg.dt, grid,
                                           BoundarySpec::velocity_x(), lin);
    auto [w_bar, rep_w] = helmholtz_filter(inter.vz, mu_bar, rho_np1, cfg.dt, grid,
                                           BoundarySpec::velocity_z(), lin);
    auto [l_bar, rep_l] = helmholtz_filter(inter.l, mu_bar, rho_np1, cfg.dt, grid,
                                           BoundarySpec::zero_gradient(), lin);

    state = relax_and_update(state, rho_np1, inter, u_bar, w_bar, l_bar, cfg.relax,
                             grid, c);
    check_state(state, n + 1);
    flux = std::move(inter.face_flux);

    out.indicator = std::move(a);

    if ((n + 1) % cfg.diagnostic_stride == 0 || n + 1 == n_steps)
      out.diagnostics.push_back(make_record(
          t_new, state, mu_bar, grid, c, spec.theta_ref, want_front,
          inter.pressure_report.iterations, inter.enthalpy_report.iterations,
          rep_u.iterations + rep_w.iterations + rep_l.iterations));

    if (snapshot_due(t_new)) {
      const std::string path = (out_dir / snapshot_name(t_new)).string();
      write_snapshot(path, grid, state, spec.theta_ref, c);
      out.snapshot_files.push_back(path);
    }

    if (on_step) on_step(n + 1, t_new, state);
  }
  } catch (...) {
    write_diagnostics_csv((out_dir / "diagnostics.csv").string(), out.diagnostics);
    write_manifest((out_dir / "manifest.txt").string(), cfg);
    throw;
  }

  out.state = std::move(state);
  write_diagnostics_csv((out_dir / "diagnostics.csv").string(), out.diagnostics);
  write_manifest((out_dir / "manifest.txt").string(), cfg);
  return out;
}

}  // namespace efr
