/// @file thermo.hpp
/// Ideal-gas thermodynamics for dry air and the bundled simulation state.

#pragma once

#include "efr/grid.hpp"

namespace efr {

struct Constants {
  double R{287.0};        // specific gas constant [J/(kg K)]
  double cv{715.5};       // heat capacity at constant volume [J/(kg K)]
  double g{9.81};         // gravitational acceleration [m/s^2]
  double p0{1.0e5};       // reference pressure [Pa]

  double cp() const { return R + cv; }
};

// Cell-centred prognostic and derived fields at one time level.
// Consistency maintained by construction: p = p' + rho g z, p = rho R T,
// K = (u^2 + w^2)/2.
struct State {
  Field rho;      // density [kg/m^3]
  Field u, w;     // velocity components [m/s]
  Field p;        // pressure [Pa]
  Field p_prime;  // head-subtracted pressure p + rho g z [Pa]
  Field h;        // specific enthalpy [J/kg]
  Field K;        // specific kinetic energy [J/kg]
  Field T;        // temperature [K]
};

// T = p / (rho R); requires rho > 0.
double eos_temperature(double p, double rho, const Constants& c);

struct ExnerTheta {
  double pi;     // (p/p0)^(R/cp)
  double theta;  // T / pi
};

ExnerTheta exner_and_theta(double T, double p, const Constants& c);

Field kinetic_energy_density(const Field& u, const Field& w);

// theta' = T/pi - theta_ref per cell.
Field theta_perturbation(const Field& T, const Field& p, double theta_ref,
                         const Constants& c);

// Head-subtracted pressure p' = p + rho g z at cell-centroid heights
// (p minus rho times the gravity potential g.r = -g z); constant for a
// uniform-density column at rest.
Field split_pressure(const Field& p, const Field& rho, const Grid& g, const Constants& c);

}  // namespace efr
