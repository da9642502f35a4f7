#include "efr/relax.hpp"

#include <stdexcept>

namespace efr {

State relax_and_update(const State& sn, const Field& rho_np1,
                       const IntermediateState& inter, const Field& u_bar,
                       const Field& w_bar, const Field& l_bar,
                       const RelaxParams& rp, const Grid& g, const Constants& c) {
  const size_t n = static_cast<size_t>(g.cell_count());
  if (rho_np1.size() != n || inter.vx.size() != n || inter.l.size() != n ||
      u_bar.size() != n || w_bar.size() != n || l_bar.size() != n)
    throw std::invalid_argument("relax_and_update: field size mismatch");
  if (rp.chi < 0.0 || rp.chi > 1.0 || rp.xi < 0.0 || rp.xi > 1.0)
    throw std::invalid_argument("relax_and_update: weights must lie in [0,1]");

  State s;
  s.rho = rho_np1;
  s.u.resize(n);
  s.w.resize(n);
  s.h.resize(n);
  s.T.resize(n);
  s.p.resize(n);
  const double cp = c.cp();
  for (size_t i = 0; i < n; ++i) {
    s.u[i] = (1.0 - rp.chi) * inter.vx[i] + rp.chi * u_bar[i];
    s.w[i] = (1.0 - rp.chi) * inter.vz[i] + rp.chi * w_bar[i];
    s.h[i] = (1.0 - rp.xi) * inter.l[i] + rp.xi * l_bar[i];
    s.T[i] = sn.T[i] + (s.h[i] - sn.h[i]) / cp;
    s.p[i] = rho_np1[i] * c.R * s.T[i];
  }
  s.p_prime = split_pressure(s.p, s.rho, g, c);
  s.K = kinetic_energy_density(s.u, s.w);
  return s;
}

}  // namespace efr
