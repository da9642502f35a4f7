#include "efr/cases.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace efr {

BenchmarkSpec benchmark_spec(BenchmarkKind kind) {
  BenchmarkSpec s;
  s.kind = kind;
  if (kind == BenchmarkKind::RisingBubble) {
    s.x_min = 0.0;
    s.x_max = 10000.0;
    s.z_min = 0.0;
    s.z_max = 10000.0;
    s.t_final = 1020.0;
    s.default_snapshot_times = {1020.0};
  } else {
    s.x_min = 0.0;
    s.x_max = 25600.0;
    s.z_min = 0.0;
    s.z_max = 6400.0;
    s.t_final = 900.0;
    s.default_snapshot_times = {300.0, 600.0, 750.0, 900.0};
  }
  return s;
}

double hydrostatic_pressure(double z, double theta, const Constants& c) {
  if (theta <= 0.0)
    throw std::domain_error("hydrostatic_pressure: theta must be positive");
  const double base = 1.0 - c.g * z / (c.cp() * theta);
  if (base <= 0.0)
    throw std::domain_error("hydrostatic_pressure: column extends above vacuum height");
  return c.p0 * std::pow(base, c.cp() / c.R);
}

namespace {

// Builds the quiescent state from a pointwise potential-temperature field:
// p hydrostatic in the local theta, rho = p0/(R theta) (p/p0)^(cv/cp) so
// that p = rho R T holds exactly, T = theta (p/p0)^(R/cp), h = cp T.
State quiescent_state(const Grid& g, const Constants& c,
                      const std::function<double(double, double)>& theta_of) {
  const size_t n = static_cast<size_t>(g.cell_count());
  State s;
  s.rho.resize(n);
  s.u.assign(n, 0.0);
  s.w.assign(n, 0.0);
  s.p.resize(n);
  s.h.resize(n);
  s.K.assign(n, 0.0);
  s.T.resize(n);
  const double cp = c.cp();
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int cc = g.cell(i, k);
      const double theta = theta_of(g.xc(i), g.zc(k));
      const double p = hydrostatic_pressure(g.zc(k), theta, c);
      const double pi_exner = std::pow(p / c.p0, c.R / cp);
      s.p[cc] = p;
      s.T[cc] = theta * pi_exner;
      s.rho[cc] = c.p0 / (c.R * theta) * std::pow(p / c.p0, c.cv / cp);
      s.h[cc] = cp * s.T[cc];
    }
  s.p_prime = split_pressure(s.p, s.rho, g, c);
  return s;
}

}  // namespace

State init_rising_bubble(const Grid& g, const Constants& c, double amplitude) {
  const double xc = 5000.0, zc = 2000.0, r0 = 2000.0, theta0 = 300.0;
  return quiescent_state(g, c, [&](double x, double z) {
    const double r = std::hypot(x - xc, z - zc);
    return r <= r0 ? theta0 + amplitude * (1.0 - r / r0) : theta0;
  });
}

State init_density_current(const Grid& g, const Constants& c, double amplitude) {
  const double xc = 0.0, zc = 3000.0, xr = 4000.0, zr = 2000.0, theta0 = 300.0;
  return quiescent_state(g, c, [&](double x, double z) {
    const double r = std::hypot((x - xc) / xr, (z - zc) / zr);
    return r <= 1.0 ? theta0 + 0.5 * amplitude * (1.0 + std::cos(std::numbers::pi * r))
                    : theta0;
  });
}

Extrema field_extrema(const Field& f) {
  if (f.empty()) throw std::invalid_argument("field_extrema: empty field");
  Extrema e{f[0], f[0]};
  for (double v : f) {
    e.min = std::min(e.min, v);
    e.max = std::max(e.max, v);
  }
  return e;
}

std::optional<double> front_location(const Field& theta_prime, const Grid& g,
                                     double threshold) {
  if (theta_prime.size() != static_cast<size_t>(g.cell_count()))
    throw std::invalid_argument("front_location: field size does not match grid");
  for (int i = g.nx - 2; i >= 0; --i) {
    const double a = theta_prime[g.cell(i, 0)] - threshold;
    const double b = theta_prime[g.cell(i + 1, 0)] - threshold;
    if (a * b > 0.0) continue;
    if (b == 0.0) return g.xc(i + 1);
    const double t = a / (a - b);
    return g.xc(i) + t * g.dx;
  }
  return std::nullopt;
}

double average_viscosity(const Field& mu_bar, const Grid& g) {
  if (mu_bar.size() != static_cast<size_t>(g.cell_count()))
    throw std::invalid_argument("average_viscosity: field size does not match grid");
  // Uniform cells: the volume weights cancel.
  double s = 0.0;
  for (double v : mu_bar) s += v;
  return s / static_cast<double>(mu_bar.size());
}

}  // namespace efr
