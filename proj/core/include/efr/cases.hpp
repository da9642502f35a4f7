/// @file cases.hpp
/// The two stratified test flows (rising thermal bubble, density current),
/// their hydrostatic backgrounds, and the scalar diagnostics reported for
/// them.

#pragma once

#include "efr/grid.hpp"
#include "efr/thermo.hpp"

#include <optional>
#include <vector>

namespace efr {

enum class BenchmarkKind { RisingBubble, DensityCurrent };

struct BenchmarkSpec {
  BenchmarkKind kind{BenchmarkKind::RisingBubble};
  double x_min{0.0}, x_max{0.0};
  double z_min{0.0}, z_max{0.0};
  double t_final{0.0};
  double theta_ref{300.0};  // background potential temperature [K]
  std::vector<double> default_snapshot_times;
};

BenchmarkSpec benchmark_spec(BenchmarkKind kind);

/// Pressure of a column with uniform potential temperature theta:
// p(z) = p0 (1 - g z / (cp theta))^(cp/R). Requires the argument of the
// power to stay positive.
double hydrostatic_pressure(double z, double theta, const Constants& c);

// Quiescent hydrostatic atmosphere with a conical warm anomaly
// (amplitude * (1 - r/r0), r0 = 2000 m) centred at (5000, 2000) m.
// amplitude = 0 gives the unperturbed background.
State init_rising_bubble(const Grid& g, const Constants& c, double amplitude = 2.0);

// Quiescent hydrostatic atmosphere with an elliptical cold anomaly
// (amplitude/2 * (1 + cos(pi r)) inside the unit ellipse centred at
// (0, 3000) m with semi-axes (4000, 2000) m).
State init_density_current(const Grid& g, const Constants& c, double amplitude = -15.0);

struct Extrema {
  double min{0.0};
  double max{0.0};
};

Extrema field_extrema(const Field& f);

// Rightmost ground-row crossing of theta' through `threshold`, linearly
// interpolated between cell centroids; empty when no crossing exists.
std::optional<double> front_location(const Field& theta_prime, const Grid& g,
                                     double threshold = -1.0);

// Volume-weighted domain average of the filter viscosity.
double average_viscosity(const Field& mu_bar, const Grid& g);

}  // namespace efr
