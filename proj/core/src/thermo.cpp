#include "efr/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace efr {

double eos_temperature(double p, double rho, const Constants& c) {
  if (rho <= 0.0) throw std::domain_error("eos_temperature: rho must be positive");
  return p / (rho * c.R);
}

ExnerTheta exner_and_theta(double T, double p, const Constants& c) {
  if (p <= 0.0) throw std::domain_error("exner_and_theta: p must be positive");
  ExnerTheta et;
  et.pi = std::pow(p / c.p0, c.R / c.cp());
  et.theta = T / et.pi;
  return et;
}

Field kinetic_energy_density(const Field& u, const Field& w) {
  if (u.size() != w.size())
    throw std::invalid_argument("kinetic_energy_density: component size mismatch");
  Field K(u.size());
  for (size_t i = 0; i < u.size(); ++i) K[i] = 0.5 * (u[i] * u[i] + w[i] * w[i]);
  return K;
}

Field theta_perturbation(const Field& T, const Field& p, double theta_ref,
                         const Constants& c) {
  if (T.size() != p.size())
    throw std::invalid_argument("theta_perturbation: field size mismatch");
  Field out(T.size());
  const double e = c.R / c.cp();
  for (size_t i = 0; i < T.size(); ++i)
    out[i] = T[i] / std::pow(p[i] / c.p0, e) - theta_ref;
  return out;
}

Field split_pressure(const Field& p, const Field& rho, const Grid& g, const Constants& c) {
  if (p.size() != rho.size() || p.size() != static_cast<size_t>(g.cell_count()))
    throw std::invalid_argument("split_pressure: field size mismatch");
  Field out(p.size());
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int idx = g.cell(i, k);
      out[idx] = p[idx] + rho[idx] * c.g * g.zc(k);
    }
  return out;
}

}  // namespace efr
