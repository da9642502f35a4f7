/// @file filter.hpp
/// Differential (Helmholtz) velocity/enthalpy filtering and the indicator
/// functions that localize it.

#pragma once

#include "efr/grid.hpp"
#include "efr/linalg.hpp"

#include <utility>

namespace efr {

enum class FilterKind { Linear, Smagorinsky, Deconvolution };

struct FilterConfig {
  FilterKind kind{FilterKind::Linear};
  double alpha{0.0};         // filter radius [m]
  double deconv_alpha{0.0};  // inner filter radius for the deconvolution indicator
  double eps_grad{1e-12};    // gradient floor below which the field is treated as uniform
};

// a == 1 everywhere.
Field indicator_linear(const Grid& g);

// Frobenius norm of the velocity gradient normalized by its domain maximum;
// identically zero when the maximum falls below eps_grad.
Field indicator_smagorinsky(const Field& vx, const Field& vz, const Grid& g,
                            double eps_grad);

// |v - F(v)| with F a constant-radius Helmholtz filter (radius deconv_alpha),
// normalized by its domain maximum; identically zero for uniform flow.
Field indicator_deconvolution(const Field& vx, const Field& vz, const Grid& g,
                              double deconv_alpha, const SolverConfig& lin);

Field indicator_field(const FilterConfig& cfg, const Field& vx, const Field& vz,
                      const Grid& g, const SolverConfig& lin);

// mu_bar = rho alpha^2 a / dt.
Field artificial_viscosity(const Field& rho, const Field& a, double alpha, double dt);

// Solves rho/dt (phi_bar - phi) = div(mu_bar grad phi_bar) for phi_bar.
// Warm-started from phi, so mu_bar == 0 returns phi bitwise.
std::pair<Field, SolverReport> helmholtz_filter(const Field& phi, const Field& mu_bar,
                                                const Field& rho, double dt,
                                                const Grid& g, const BoundarySpec& bc,
                                                const SolverConfig& lin);

// Radius making the normalized-gradient viscosity match a Smagorinsky
// eddy viscosity with constant cs and filter width delta at the gradient
// magnitude grad_max: alpha = cs delta sqrt(dt grad_max).
double smagorinsky_alpha_hint(double cs, double delta, double dt, double grad_max);

}  // namespace efr
