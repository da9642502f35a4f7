/// @file relax.hpp
/// Convex blend of provisional and filtered fields, and the algebraic
/// closure of the time step (temperature increment, equation of state,
/// pressure split, kinetic energy).

#pragma once

#include "efr/evolve.hpp"
#include "efr/grid.hpp"
#include "efr/thermo.hpp"

namespace efr {

struct RelaxParams {
  double chi{1.0};  // velocity relaxation weight in [0,1]
  double xi{1.0};   // enthalpy relaxation weight in [0,1]
};

// u^{n+1} = (1-chi) v + chi v_bar, h^{n+1} = (1-xi) l + xi l_bar,
// T^{n+1} = T^n + (h^{n+1}-h^n)/cp, p^{n+1} = rho^{n+1} R T^{n+1},
// p' = p + rho g z, K = |u|^2/2.
State relax_and_update(const State& sn, const Field& rho_np1,
                       const IntermediateState& inter, const Field& u_bar,
                       const Field& w_bar, const Field& l_bar,
                       const RelaxParams& rp, const Grid& g, const Constants& c);

}  // namespace efr
