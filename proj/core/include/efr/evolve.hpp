/// @file evolve.hpp
/// One segregated time step of the mildly compressible Euler system:
/// explicit density transport, a pressure-coupled momentum solve without a
/// predictor, and an implicit enthalpy equation driven by the corrected
/// mass fluxes.

#pragma once

#include "efr/grid.hpp"
#include "efr/linalg.hpp"
#include "efr/thermo.hpp"

namespace efr {

enum class ConvectionScheme { LinearUpwind, Central };

struct EvolveConfig {
  double dt{0.1};
  ConvectionScheme scheme{ConvectionScheme::LinearUpwind};
  SolverConfig lin{};
};

// Provisional (pre-filter) fields produced by the evolve step.
struct IntermediateState {
  Field rho;            // end-of-step density, conservative with face_flux [kg/m^3]
  Field vx, vz;         // provisional velocity [m/s]
  Field l;              // provisional specific enthalpy [J/kg]
  Field K_v;            // |v|^2 / 2 [J/kg]
  Field q;              // intermediate pressure [Pa]
  Field q_prime;        // q + rho g z [Pa]
  Field T_l;            // provisional temperature [K]
  FaceField face_flux;  // corrected mass flux rho v . A on faces [kg/s]
  SolverReport pressure_report;
  SolverReport enthalpy_report;
};

// Internals exposed for algebra cross-checks in tests.
struct MomentumDebug {
  FaceField phi_star;        // linearization mass flux (from rho^{n+1}, u^n)
  Field a;                   // diagonal momentum coefficient [kg/(m^3 s)]
  Field h_x, h_z;            // explicit operator H evaluated at u^n
  Field accel_x, accel_z;    // face-averaged q' + gravity acceleration [Pa/m]
  Field dc_div_x, dc_div_z;  // deferred-correction divergence per component
};

// rho_adv = rho^n - dt div(flux); flux is the corrected end-of-step mass flux
// of level n (zero on walls), so total mass is conserved exactly. The result
// is the advected density estimate fed to the momentum/pressure solve, which
// finalizes the step's density from its own corrected flux.
Field advance_density(const Field& rho_n, const FaceField& mass_flux_n, double dt,
                      const Grid& g);

// Mass flux interp(rho) interp(u,w) . n A with impenetrable walls; seeds the
// very first step before a corrected flux exists.
FaceField state_mass_flux(const Field& rho, const Field& u, const Field& w,
                          const Grid& g);

// Momentum linearized about u^n, with the pressure q' eliminating the
// velocity through the discrete continuity constraint
// div(rho^{n+1} v^{n+1}) = -(rho^{n+1}-rho^n)/dt, where the gas law closes
// the system: the solve carries a compressibility diagonal psi/dt with
// psi = 1/(R T^n), so the acoustic pressure response is implicit. Fills rho
// (the flux-consistent end-of-step density), vx, vz, K_v, q, q_prime,
// face_flux and the pressure report.
IntermediateState momentum_pressure_step(const State& sn, const Field& rho_np1,
                                         const Grid& g, const Constants& c,
                                         const EvolveConfig& cfg,
                                         MomentumDebug* dbg = nullptr);

// Implicit provisional-enthalpy solve with kinetic-energy, pressure-transient
// and gravity-work sources; rho_np1 must be the end-of-step density
// (inter.rho). Fills l, T_l and the enthalpy report.
void enthalpy_step(const State& sn, const Field& rho_np1, IntermediateState& inter,
                   const Grid& g, const Constants& c, const EvolveConfig& cfg);

}  // namespace efr
