#include "efr/evolve.hpp"

#include "efr/cases.hpp"
#include "efr/filter.hpp"
#include "efr/relax.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

using namespace efr;

namespace {

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f) m = std::fmax(m, std::fabs(v));
  return m;
}

// One full evolve/filter/relax cycle with the filter switched off. The mass
// flux is threaded between steps exactly as the production loop does: the
// corrected flux of step n advects the density of step n+1.
State step_unfiltered(const State& s, FaceField& flux, const Grid& g,
                      const Constants& c, const EvolveConfig& cfg) {
  Field rho_adv = advance_density(s.rho, flux, cfg.dt, g);
  IntermediateState inter = momentum_pressure_step(s, rho_adv, g, c, cfg);
  enthalpy_step(s, inter.rho, inter, g, c, cfg);
  Field mu(g.cell_count(), 0.0);
  auto [ub, r1] = helmholtz_filter(inter.vx, mu, inter.rho, cfg.dt, g,
                                   BoundarySpec::velocity_x(), cfg.lin);
  auto [wb, r2] = helmholtz_filter(inter.vz, mu, inter.rho, cfg.dt, g,
                                   BoundarySpec::velocity_z(), cfg.lin);
  auto [lb, r3] = helmholtz_filter(inter.l, mu, inter.rho, cfg.dt, g,
                                   BoundarySpec::zero_gradient(), cfg.lin);
  State next = relax_and_update(s, inter.rho, inter, ub, wb, lb, RelaxParams{}, g, c);
  flux = std::move(inter.face_flux);
  return next;
}

State run_unfiltered(State s, int steps, const Grid& g, const Constants& c,
                     const EvolveConfig& cfg) {
  FaceField flux = state_mass_flux(s.rho, s.u, s.w, g);
  for (int n = 0; n < steps; ++n) s = step_unfiltered(s, flux, g, c, cfg);
  return s;
}

}  // namespace

TEST_CASE("density advance moves mass along a single face") {
  Grid g = build_grid(0.0, 4.0, 0.0, 3.0, 1.0);
  Field rho(g.cell_count(), 1.0);
  FaceField flux(g);
  flux.fill(0.0);
  flux.xf[g.x_face(1, 1)] = 0.5;  // out of (1,1), into (2,1)
  const double dt = 0.2;
  Field rho1 = advance_density(rho, flux, dt, g);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      double expect = 1.0;
      if (i == 1 && k == 1) expect -= dt * 0.5 / g.cell_volume();
      if (i == 2 && k == 1) expect += dt * 0.5 / g.cell_volume();
      CHECK(rho1[g.cell(i, k)] == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("density advance conserves total mass for wall-tight fluxes") {
  Grid g = build_grid(0.0, 6.0, 0.0, 5.0, 1.0);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field rho(g.cell_count());
  for (double& v : rho) v = 1.0 + 0.2 * dist(rng);
  FaceField flux(g);
  flux.fill(0.0);  // walls stay zero
  for (double& v : flux.xf) v = dist(rng);
  for (double& v : flux.zf) v = dist(rng);
  Field rho1 = advance_density(rho, flux, 0.1, g);
  double m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < g.cell_count(); ++i) {
    m0 += rho[i];
    m1 += rho1[i];
  }
  CHECK(m1 == doctest::Approx(m0).epsilon(1e-13));
}

TEST_CASE("state mass flux interpolates density and velocity to faces") {
  Grid g = build_grid(0.0, 3.0, 0.0, 2.0, 1.0);
  Field rho{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  Field u{0.5, 0.7, 0.9, 1.1, 1.3, 1.5};
  Field w{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  FaceField f = state_mass_flux(rho, u, w, g);
  // x-face between cells 0 and 1: mean rho 1.5, mean u 0.6, area 1
  CHECK(f.xf[g.x_face(0, 0)] == doctest::Approx(1.5 * 0.6).epsilon(1e-14));
  CHECK(f.xf[g.x_face(1, 0)] == doctest::Approx(2.5 * 0.8).epsilon(1e-14));
  // z-face between cells 0 and 3: mean rho 2.5, mean w 0.25
  CHECK(f.zf[g.z_face(0, 0)] == doctest::Approx(2.5 * 0.25).epsilon(1e-14));
  // impenetrable walls
  for (double v : f.west) CHECK(v == 0.0);
  for (double v : f.east) CHECK(v == 0.0);
  for (double v : f.bottom) CHECK(v == 0.0);
  for (double v : f.top) CHECK(v == 0.0);
}

TEST_CASE("a hydrostatic column stays at rest for one step") {
  Constants c;
  Grid g = build_grid(0.0, 200.0, 0.0, 200.0, 12.5);
  State s = init_rising_bubble(g, c, 0.0);
  EvolveConfig cfg;
  FaceField flux = state_mass_flux(s.rho, s.u, s.w, g);
  Field rho1 = advance_density(s.rho, flux, cfg.dt, g);
  for (int i = 0; i < g.cell_count(); ++i) CHECK(rho1[i] == s.rho[i]);

  IntermediateState inter = momentum_pressure_step(s, rho1, g, c, cfg);
  CHECK(max_abs(inter.vx) < 1e-8);   // measured ~1e-10
  CHECK(max_abs(inter.vz) < 1e-8);
  double flux_max = 0.0;
  for (double v : inter.face_flux.xf) flux_max = std::fmax(flux_max, std::fabs(v));
  for (double v : inter.face_flux.zf) flux_max = std::fmax(flux_max, std::fabs(v));
  CHECK(flux_max < 1e-6);
  double drho = 0.0;
  for (int i = 0; i < g.cell_count(); ++i)
    drho = std::fmax(drho, std::fabs(inter.rho[i] - s.rho[i]));
  CHECK(drho < 1e-9);
  // the intermediate pressure recovers the thermodynamic pressure up to the
  // trapezoidal column error g dz^3 rho''/12 per face (~1e-4 Pa here)
  double qp = 0.0;
  for (int i = 0; i < g.cell_count(); ++i)
    qp = std::fmax(qp, std::fabs(inter.q[i] - s.p[i]));
  CHECK(qp < 5e-3);

  enthalpy_step(s, inter.rho, inter, g, c, cfg);
  double dl = 0.0;
  for (int i = 0; i < g.cell_count(); ++i)
    dl = std::fmax(dl, std::fabs(inter.l[i] - s.h[i]));
  CHECK(dl < 5e-3);
}

TEST_CASE("a hydrostatic column stays at rest for one hundred steps") {
  Constants c;
  Grid g = build_grid(0.0, 200.0, 0.0, 200.0, 12.5);
  State s0 = init_rising_bubble(g, c, 0.0);
  State s = run_unfiltered(s0, 100, g, c, EvolveConfig{});
  CHECK(max_abs(s.u) < 1e-8);  // measured ~1.2e-10
  CHECK(max_abs(s.w) < 1e-8);
  Field tp = theta_perturbation(s.T, s.p, 300.0, c);
  CHECK(max_abs(tp) < 1e-5);  // measured ~2.4e-7: geometric drift fixed point
}

TEST_CASE("corrected fluxes satisfy discrete continuity") {
  Constants c;
  Grid g = build_grid(0.0, 10000.0, 0.0, 10000.0, 500.0);
  State s = init_rising_bubble(g, c, 2.0);
  EvolveConfig cfg;
  // develop a nontrivial flow first
  FaceField flux = state_mass_flux(s.rho, s.u, s.w, g);
  for (int n = 0; n < 10; ++n) s = step_unfiltered(s, flux, g, c, cfg);

  Field rho_adv = advance_density(s.rho, flux, cfg.dt, g);
  IntermediateState inter = momentum_pressure_step(s, rho_adv, g, c, cfg);
  Field div = divergence_of_flux(inter.face_flux, g);
  double worst = 0.0;
  for (int i = 0; i < g.cell_count(); ++i)
    worst = std::fmax(worst,
                      std::fabs(div[i] + (inter.rho[i] - s.rho[i]) / cfg.dt));
  CHECK(worst < 1e-8);  // exact by construction; contract-level bound

  // the end-of-step density equals the advected density plus the gas-law
  // response to the pressure update, up to the solver residual
  double eos_defect = 0.0;
  for (int i = 0; i < g.cell_count(); ++i) {
    const double psi = 1.0 / (c.R * s.T[i]);
    eos_defect = std::fmax(
        eos_defect, std::fabs(inter.rho[i] - rho_adv[i] -
                              psi * (inter.q_prime[i] - s.p_prime[i])));
  }
  CHECK(eos_defect < 1e-8);  // measured ~1e-12 at the 1e-8 solve tolerance
}

TEST_CASE("face system reassembles from the exposed internals") {
  Constants c;
  Grid g = build_grid(0.0, 10000.0, 0.0, 10000.0, 500.0);
  State s = init_rising_bubble(g, c, 2.0);
  EvolveConfig cfg;
  for (int n = 0; n < 5; ++n) s = step_unfiltered(s, g, c, cfg);

  FaceField flux = state_mass_flux(s.rho, s.u, s.w, g);
  Field rho1 = advance_density(s.rho, flux, cfg.dt, g);
  MomentumDebug dbg;
  IntermediateState inter = momentum_pressure_step(s, rho1, g, c, cfg, &dbg);

  // the linearization flux is the mass flux of (rho^{n+1}, u^n)
  FaceField phi_ref = state_mass_flux(rho1, s.u, s.w, g);
  for (size_t f = 0; f < phi_ref.xf.size(); ++f)
    CHECK(dbg.phi_star.xf[f] == doctest::Approx(phi_ref.xf[f]).epsilon(1e-13));
  for (size_t f = 0; f < phi_ref.zf.size(); ++f)
    CHECK(dbg.phi_star.zf[f] == doctest::Approx(phi_ref.zf[f]).epsilon(1e-13));

  // velocity reconstruction: a v + face-averaged acceleration = H
  for (int i = 0; i < g.cell_count(); ++i) {
    CHECK(dbg.a[i] * inter.vx[i] + dbg.accel_x[i] ==
          doctest::Approx(dbg.h_x[i]).epsilon(1e-11));
    CHECK(dbg.a[i] * inter.vz[i] + dbg.accel_z[i] ==
          doctest::Approx(dbg.h_z[i]).epsilon(1e-11));
  }

  // corrected flux: rho_f (H/a)_f A - gamma A (dq'/dn - g z_f drho/dn),
  // reassembled here from the exposed coefficients only
  const double ax = g.face_area_x(), az = g.face_area_z();
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f = g.x_face(i, k), p = g.cell(i, k), q = g.cell(i + 1, k);
      const double rho_f = 0.5 * (rho1[p] + rho1[q]);
      const double gamma = rho_f * 0.5 * (1.0 / dbg.a[p] + 1.0 / dbg.a[q]);
      const double hba = 0.5 * (dbg.h_x[p] / dbg.a[p] + dbg.h_x[q] / dbg.a[q]);
      const double grav = c.g * g.zc(k) * (rho1[q] - rho1[p]) / g.dx;
      const double dq = (inter.q_prime[q] - inter.q_prime[p]) / g.dx;
      const double expect = rho_f * hba * ax - gamma * ax * (dq - grav);
      CHECK(inter.face_flux.xf[f] == doctest::Approx(expect).epsilon(1e-10));
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.z_face(i, k), p = g.cell(i, k), q = g.cell(i, k + 1);
      const double rho_f = 0.5 * (rho1[p] + rho1[q]);
      const double gamma = rho_f * 0.5 * (1.0 / dbg.a[p] + 1.0 / dbg.a[q]);
      const double hba = 0.5 * (dbg.h_z[p] / dbg.a[p] + dbg.h_z[q] / dbg.a[q]);
      const double zf = g.z0 + (k + 1) * g.dz;
      const double grav = c.g * zf * (rho1[q] - rho1[p]) / g.dz;
      const double dq = (inter.q_prime[q] - inter.q_prime[p]) / g.dz;
      const double expect = rho_f * hba * az - gamma * az * (dq - grav);
      CHECK(inter.face_flux.zf[f] == doctest::Approx(expect).epsilon(1e-10));
    }

  // pressure reconstruction from its head-subtracted form
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int cc = g.cell(i, k);
      CHECK(inter.q[cc] ==
            doctest::Approx(inter.q_prime[cc] - rho1[cc] * c.g * g.zc(k))
                .epsilon(1e-12));
    }
}

TEST_CASE("enthalpy step balances the global energy budget") {
  Constants c;
  Grid g = build_grid(0.0, 10000.0, 0.0, 10000.0, 500.0);
  State s = init_rising_bubble(g, c, 2.0);
  EvolveConfig cfg;
  for (int n = 0; n < 10; ++n) s = step_unfiltered(s, g, c, cfg);

  FaceField flux = state_mass_flux(s.rho, s.u, s.w, g);
  Field rho1 = advance_density(s.rho, flux, cfg.dt, g);
  IntermediateState inter = momentum_pressure_step(s, rho1, g, c, cfg);
  enthalpy_step(s, rho1, inter, g, c, cfg);

  // summed over the domain every convective contribution telescopes away:
  // d/dt sum rho (h + K) = sum (q - p^n)/dt - sum rho^{n+1} g w
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
  for (int i = 0; i < g.cell_count(); ++i) {
    lhs += (rho1[i] * (inter.l[i] + inter.K_v[i]) -
            s.rho[i] * (s.h[i] + s.K[i])) /
           cfg.dt;
    rhs += (inter.q[i] - s.p[i]) / cfg.dt - rho1[i] * c.g * inter.vz[i];
    scale += rho1[i] * inter.l[i] / cfg.dt;
  }
  CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::fabs(scale));
}

TEST_CASE("bubble evolution keeps the mirror symmetry of its initial data") {
  Constants c;
  Grid g = build_grid(0.0, 10000.0, 0.0, 10000.0, 500.0);
  State s = init_rising_bubble(g, c, 2.0);
  EvolveConfig cfg;
  for (int n = 0; n < 5; ++n) s = step_unfiltered(s, g, c, cfg);

  double worst = 0.0;
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int a = g.cell(i, k), b = g.cell(g.nx - 1 - i, k);
      worst = std::fmax(worst, std::fabs(s.u[a] + s.u[b]));  // odd component
      worst = std::fmax(worst, std::fabs(s.w[a] - s.w[b]));
      worst = std::fmax(worst, std::fabs(s.rho[a] - s.rho[b]) * 1e3);
      worst = std::fmax(worst, std::fabs(s.T[a] - s.T[b]) * 1e2);
    }
  CHECK(worst < 1e-6);
}

TEST_CASE("central convection runs and stays finite") {
  Constants c;
  Grid g = build_grid(0.0, 10000.0, 0.0, 10000.0, 1000.0);
  State s = init_rising_bubble(g, c, 2.0);
  EvolveConfig cfg;
  cfg.scheme = ConvectionScheme::Central;
  for (int n = 0; n < 3; ++n) s = step_unfiltered(s, g, c, cfg);
  for (double v : s.T) CHECK(std::isfinite(v));
  for (double v : s.u) CHECK(std::isfinite(v));
}

TEST_CASE("momentum solve rejects a non-positive diagonal") {
  Constants c;
  Grid g = build_grid(0.0, 200.0, 0.0, 200.0, 50.0);
  State s = init_rising_bubble(g, c, 0.0);
  Field rho_bad(g.cell_count(), -1.0);
  EvolveConfig cfg;
  CHECK_THROWS_AS(momentum_pressure_step(s, rho_bad, g, c, cfg),
                  std::runtime_error);
}
