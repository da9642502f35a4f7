#include "efr/evolve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace efr {

namespace {

// Implicit face weights of the convection term: phi psi_f = wo psi_owner +
// wb psi_nbr (+ phi dc). Upwind keeps wo >= 0 >= wb sign structure so the
// momentum diagonal stays positive.
struct ImplicitWeights {
  std::vector<double> wo_x, wb_x, wo_z, wb_z;
};

ImplicitWeights implicit_weights(const FaceField& phi, ConvectionScheme sch,
                                 const Grid& g) {
  ImplicitWeights w;
  w.wo_x.resize(phi.xf.size());
  w.wb_x.resize(phi.xf.size());
  w.wo_z.resize(phi.zf.size());
  w.wb_z.resize(phi.zf.size());
  auto split = [sch](double f, double& wo, double& wb) {
    if (sch == ConvectionScheme::Central) {
      wo = wb = 0.5 * f;
    } else if (f >= 0.0) {
      wo = f;
      wb = 0.0;
    } else {
      wo = 0.0;
      wb = f;
    }
  };
  for (size_t f = 0; f < phi.xf.size(); ++f) split(phi.xf[f], w.wo_x[f], w.wb_x[f]);
  for (size_t f = 0; f < phi.zf.size(); ++f) split(phi.zf[f], w.wo_z[f], w.wb_z[f]);
  (void)g;
  return w;
}

// Second-order upwind-biased correction: the face value beyond first-order
// upwind, taken from the lagged field's cell gradient at the upwind cell.
struct Deferred {
  std::vector<double> x, z;
};

Deferred deferred_correction(const FaceField& phi, const Field& lagged,
                             const BoundarySpec& bc, ConvectionScheme sch,
                             const Grid& g) {
  Deferred dc;
  dc.x.assign(phi.xf.size(), 0.0);
  dc.z.assign(phi.zf.size(), 0.0);
  if (sch == ConvectionScheme::Central) return dc;
  Field ddx, ddz;
  gauss_gradient(lagged, g, bc, ddx, ddz);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f = g.x_face(i, k);
      const int c = g.cell(i, k);
      dc.x[f] = phi.xf[f] >= 0.0 ? 0.5 * g.dx * ddx[c] : -0.5 * g.dx * ddx[c + 1];
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.z_face(i, k);
      const int c = g.cell(i, k);
      dc.z[f] = phi.zf[f] >= 0.0 ? 0.5 * g.dz * ddz[c] : -0.5 * g.dz * ddz[c + g.nx];
    }
  return dc;
}

// Per-cell diagonal part of the implicit convection operator.
Field convection_diagonal(const ImplicitWeights& w, const Grid& g) {
  Field a(static_cast<size_t>(g.cell_count()), 0.0);
  const double inv_vol = 1.0 / g.cell_volume();
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f = g.x_face(i, k), c = g.cell(i, k);
      a[c] += w.wo_x[f] * inv_vol;
      a[c + 1] -= w.wb_x[f] * inv_vol;
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.z_face(i, k), c = g.cell(i, k);
      a[c] += w.wo_z[f] * inv_vol;
      a[c + g.nx] -= w.wb_z[f] * inv_vol;
    }
  return a;
}

// (1/V) sum_f +- (wo psi_O + wb psi_B + phi dc): the full convection
// divergence evaluated explicitly on psi.
Field explicit_convection(const ImplicitWeights& w, const Deferred& dc,
                          const FaceField& phi, const Field& psi, const Grid& g) {
  Field out(psi.size(), 0.0);
  const double inv_vol = 1.0 / g.cell_volume();
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f = g.x_face(i, k), c = g.cell(i, k);
      const double t =
          (w.wo_x[f] * psi[c] + w.wb_x[f] * psi[c + 1] + phi.xf[f] * dc.x[f]) * inv_vol;
      out[c] += t;
      out[c + 1] -= t;
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.z_face(i, k), c = g.cell(i, k);
      const double t =
          (w.wo_z[f] * psi[c] + w.wb_z[f] * psi[c + g.nx] + phi.zf[f] * dc.z[f]) * inv_vol;
      out[c] += t;
      out[c + g.nx] -= t;
    }
  return out;
}

// (1/V) sum_f +- phi dc only (the explicit part of linear upwind).
Field deferred_divergence(const Deferred& dc, const FaceField& phi, const Grid& g) {
  Field out(static_cast<size_t>(g.cell_count()), 0.0);
  const double inv_vol = 1.0 / g.cell_volume();
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f = g.x_face(i, k), c = g.cell(i, k);
      const double t = phi.xf[f] * dc.x[f] * inv_vol;
      out[c] += t;
      out[c + 1] -= t;
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.z_face(i, k), c = g.cell(i, k);
      const double t = phi.zf[f] * dc.z[f] * inv_vol;
      out[c] += t;
      out[c + g.nx] -= t;
    }
  return out;
}

void check_sizes(const State& sn, const Field& rho_np1, const Grid& g, const char* op) {
  const size_t n = static_cast<size_t>(g.cell_count());
  if (sn.rho.size() != n || sn.u.size() != n || sn.w.size() != n || rho_np1.size() != n)
    throw std::invalid_argument(std::string(op) + ": field size does not match grid");
}

}  // namespace

Field advance_density(const Field& rho_n, const FaceField& mass_flux_n, double dt,
                      const Grid& g) {
  if (rho_n.size() != static_cast<size_t>(g.cell_count()))
    throw std::invalid_argument("advance_density: field size does not match grid");
  if (dt <= 0.0) throw std::invalid_argument("advance_density: dt must be positive");
  const Field div = divergence_of_flux(mass_flux_n, g);
  Field rho(rho_n.size());
  for (size_t c = 0; c < rho.size(); ++c) rho[c] = rho_n[c] - dt * div[c];
  return rho;
}

FaceField state_mass_flux(const Field& rho, const Field& u, const Field& w,
                          const Grid& g) {
  FaceField flux(g);
  const double ax = g.face_area_x(), az = g.face_area_z();
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int c = g.cell(i, k);
      flux.xf[g.x_face(i, k)] =
          0.5 * (rho[c] + rho[c + 1]) * 0.5 * (u[c] + u[c + 1]) * ax;
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, k);
      flux.zf[g.z_face(i, k)] =
          0.5 * (rho[c] + rho[c + g.nx]) * 0.5 * (w[c] + w[c + g.nx]) * az;
    }
  return flux;  // wall faces stay zero: impenetrable boundary
}

IntermediateState momentum_pressure_step(const State& sn, const Field& rho_np1,
                                         const Grid& g, const Constants& c,
                                         const EvolveConfig& cfg, MomentumDebug* dbg) {
  check_sizes(sn, rho_np1, g, "momentum_pressure_step");
  const size_t n = static_cast<size_t>(g.cell_count());
  const double dt = cfg.dt;
  if (dt <= 0.0) throw std::invalid_argument("momentum_pressure_step: dt must be positive");

  // Linearization mass flux from the previous end-of-step velocity.
  const FaceField phi_star = state_mass_flux(rho_np1, sn.u, sn.w, g);
  const ImplicitWeights iw = implicit_weights(phi_star, cfg.scheme, g);
  const Deferred dc_u =
      deferred_correction(phi_star, sn.u, BoundarySpec::velocity_x(), cfg.scheme, g);
  const Deferred dc_w =
      deferred_correction(phi_star, sn.w, BoundarySpec::velocity_z(), cfg.scheme, g);

  const Field a_conv = convection_diagonal(iw, g);
  Field a(n), inv_a(n);
  for (size_t i = 0; i < n; ++i) {
    a[i] = rho_np1[i] / dt + a_conv[i];
    if (!(a[i] > 0.0))
      throw std::runtime_error("momentum_pressure_step: non-positive momentum diagonal");
    inv_a[i] = 1.0 / a[i];
  }

  // H(u^n): transient plus the off-diagonal/deferred convection evaluated
  // at the previous velocity (no predictor iteration).
  const Field conv_u = explicit_convection(iw, dc_u, phi_star, sn.u, g);
  const Field conv_w = explicit_convection(iw, dc_w, phi_star, sn.w, g);
  Field h_x(n), h_z(n), hba_x(n), hba_z(n);
  for (size_t i = 0; i < n; ++i) {
    h_x[i] = sn.rho[i] * sn.u[i] / dt - (conv_u[i] - a_conv[i] * sn.u[i]);
    h_z[i] = sn.rho[i] * sn.w[i] / dt - (conv_w[i] - a_conv[i] * sn.w[i]);
    hba_x[i] = h_x[i] * inv_a[i];
    hba_z[i] = h_z[i] * inv_a[i];
  }

  // Face data: Laplacian coefficient rho_f/a_f, predictor flux from H/a and
  // the buoyancy term g z_f drho/dn evaluated compactly per face. With the
  // split p = q' - rho g z the momentum force density is
  // -grad(q') + g z grad(rho): the body force cancels identically, so a
  // discrete hydrostatic column stays exactly at rest.
  FaceField gamma(g), pred_flux(g), grav_grad(g);
  const double ax = g.face_area_x(), az = g.face_area_z();
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f = g.x_face(i, k), cc = g.cell(i, k);
      const double rho_f = 0.5 * (rho_np1[cc] + rho_np1[cc + 1]);
      const double ra_f = 0.5 * (inv_a[cc] + inv_a[cc + 1]);
      gamma.xf[f] = rho_f * ra_f;
      grav_grad.xf[f] = c.g * g.zc(k) * (rho_np1[cc + 1] - rho_np1[cc]) / g.dx;
      pred_flux.xf[f] = rho_f * 0.5 * (hba_x[cc] + hba_x[cc + 1]) * ax +
                        gamma.xf[f] * ax * grav_grad.xf[f];
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.z_face(i, k), cc = g.cell(i, k);
      const double rho_f = 0.5 * (rho_np1[cc] + rho_np1[cc + g.nx]);
      const double ra_f = 0.5 * (inv_a[cc] + inv_a[cc + g.nx]);
      gamma.zf[f] = rho_f * ra_f;
      const double z_face = g.z0 + (k + 1) * g.dz;
      grav_grad.zf[f] = c.g * z_face * (rho_np1[cc + g.nx] - rho_np1[cc]) / g.dz;
      pred_flux.zf[f] = rho_f * 0.5 * (hba_z[cc] + hba_z[cc + g.nx]) * az +
                        gamma.zf[f] * az * grav_grad.zf[f];
    }

  // Pressure equation with the gas-law closure: the end-of-step density the
  // corrected flux must balance is rho_adv + psi (q' - p'^n) with
  // psi = 1/(R T^n), the isothermal pressure sensitivity of rho = p/(R T).
  // This yields (psi/dt) q' + Lap_gamma(q') = (psi/dt) p'^n - (drho_adv/dt)
  // - div(pred_flux): a strictly positive diagonal (no gauge pinning), an
  // implicit acoustic response, and a mesh-independent CG iteration count.
  // Solved in increment form about p'^n so the reference state is exact at
  // hydrostatic rest.
  Field psi_dt(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(sn.T[i] > 0.0))
      throw std::runtime_error("momentum_pressure_step: non-positive temperature");
    psi_dt[i] = 1.0 / (c.R * sn.T[i] * dt);
  }
  Field b(n);
  {
    const Field div_pred = divergence_of_flux(pred_flux, g);
    for (size_t i = 0; i < n; ++i)
      b[i] = psi_dt[i] * sn.p_prime[i] - (rho_np1[i] - sn.rho[i]) / dt - div_pred[i];
  }
  SparseOperator Ap =
      assemble_helmholtz(psi_dt, gamma, g, BoundarySpec::zero_gradient());
  Field r(n), tmp(n);
  Ap.apply(sn.p_prime, tmp);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];

  IntermediateState out;
  Field y(n, 0.0);
  out.pressure_report = cg_solve(Ap, r, y, cfg.lin);
  if (!out.pressure_report.converged)
    throw std::runtime_error("momentum_pressure_step: pressure solve did not converge");

  out.q_prime.resize(n);
  for (size_t i = 0; i < n; ++i) out.q_prime[i] = sn.p_prime[i] + y[i];

  // Corrected fluxes and the face-consistent velocity reconstruction: each
  // component averages the accelerations of its two bounding faces (walls
  // contribute zero), which keeps a discrete hydrostatic state exactly.
  out.face_flux = FaceField(g);
  Field accel_x(n, 0.0), accel_z(n, 0.0);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f = g.x_face(i, k), cc = g.cell(i, k);
      const double snq = (out.q_prime[cc + 1] - out.q_prime[cc]) / g.dx;
      out.face_flux.xf[f] = pred_flux.xf[f] - gamma.xf[f] * ax * snq;
      const double fa = snq - grav_grad.xf[f];
      accel_x[cc] += 0.5 * fa;
      accel_x[cc + 1] += 0.5 * fa;
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.z_face(i, k), cc = g.cell(i, k);
      const double snq = (out.q_prime[cc + g.nx] - out.q_prime[cc]) / g.dz;
      out.face_flux.zf[f] = pred_flux.zf[f] - gamma.zf[f] * az * snq;
      const double fa = snq - grav_grad.zf[f];
      accel_z[cc] += 0.5 * fa;
      accel_z[cc + g.nx] += 0.5 * fa;
    }

  out.vx.resize(n);
  out.vz.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.vx[i] = (h_x[i] - accel_x[i]) * inv_a[i];
    out.vz[i] = (h_z[i] - accel_z[i]) * inv_a[i];
  }
  out.K_v = kinetic_energy_density(out.vx, out.vz);

  // Final density from the corrected flux: exactly conservative and exactly
  // continuity-consistent, and equal to rho_adv + psi (q' - p'^n) up to the
  // pressure-solve residual.
  out.rho.resize(n);
  {
    const Field div_corr = divergence_of_flux(out.face_flux, g);
    for (int k = 0; k < g.nz; ++k)
      for (int i = 0; i < g.nx; ++i) {
        const int cc = g.cell(i, k);
        out.rho[cc] = sn.rho[cc] - dt * div_corr[cc];
        if (!(out.rho[cc] > 0.0))
          throw std::runtime_error(
              "momentum_pressure_step: non-positive corrected density at cell (" +
              std::to_string(i) + ", " + std::to_string(k) + ")");
      }
  }
  out.q.resize(n);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int cc = g.cell(i, k);
      out.q[cc] = out.q_prime[cc] - out.rho[cc] * c.g * g.zc(k);
    }

  if (dbg) {
    dbg->phi_star = phi_star;
    dbg->a = a;
    dbg->h_x = h_x;
    dbg->h_z = h_z;
    dbg->accel_x = accel_x;
    dbg->accel_z = accel_z;
    dbg->dc_div_x = deferred_divergence(dc_u, phi_star, g);
    dbg->dc_div_z = deferred_divergence(dc_w, phi_star, g);
  }
  return out;
}

void enthalpy_step(const State& sn, const Field& rho_np1, IntermediateState& inter,
                   const Grid& g, const Constants& c, const EvolveConfig& cfg) {
  check_sizes(sn, rho_np1, g, "enthalpy_step");
  const size_t n = static_cast<size_t>(g.cell_count());
  const double dt = cfg.dt;
  const double inv_vol = 1.0 / g.cell_volume();
  const BoundarySpec zg = BoundarySpec::zero_gradient();

  const FaceField& phi = inter.face_flux;
  const ImplicitWeights iw = implicit_weights(phi, cfg.scheme, g);
  const Deferred dc_l = deferred_correction(phi, sn.h, zg, cfg.scheme, g);
  const Deferred dc_k = deferred_correction(phi, inter.K_v, zg, cfg.scheme, g);

  SparseOperator A(g);
  A.symmetric = false;
  for (size_t i = 0; i < n; ++i) A.diag[i] = rho_np1[i] / dt;
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f = g.x_face(i, k), cc = g.cell(i, k);
      A.diag[cc] += iw.wo_x[f] * inv_vol;
      A.diag[cc + 1] -= iw.wb_x[f] * inv_vol;
      A.x_upper[f] = iw.wb_x[f] * inv_vol;
      A.x_lower[f] = -iw.wo_x[f] * inv_vol;
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.z_face(i, k), cc = g.cell(i, k);
      A.diag[cc] += iw.wo_z[f] * inv_vol;
      A.diag[cc + g.nx] -= iw.wb_z[f] * inv_vol;
      A.z_upper[f] = iw.wb_z[f] * inv_vol;
      A.z_lower[f] = -iw.wo_z[f] * inv_vol;
    }

  const Field conv_k = explicit_convection(iw, dc_k, phi, inter.K_v, g);
  const Field dc_div_l = deferred_divergence(dc_l, phi, g);

  Field b(n);
  for (size_t i = 0; i < n; ++i) {
    const double k_transient = (rho_np1[i] * inter.K_v[i] - sn.rho[i] * sn.K[i]) / dt;
    b[i] = sn.rho[i] * sn.h[i] / dt - dc_div_l[i] - k_transient - conv_k[i] +
           (inter.q[i] - sn.p[i]) / dt - rho_np1[i] * c.g * inter.vz[i];
  }

  inter.l = sn.h;  // warm start
  inter.enthalpy_report = bicgstab_solve(A, b, inter.l, cfg.lin);
  if (!inter.enthalpy_report.converged)
    throw std::runtime_error("enthalpy_step: enthalpy solve did not converge");

  inter.T_l.resize(n);
  const double cp = c.cp();
  for (size_t i = 0; i < n; ++i) inter.T_l[i] = sn.T[i] + (inter.l[i] - sn.h[i]) / cp;
}

}  // namespace efr
