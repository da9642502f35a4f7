#include "efr/filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace efr {

namespace {

// Max-normalize in place; below the floor the field becomes identically zero.
void normalize_by_max(Field& a, double floor) {
  double m = 0.0;
  for (double v : a) m = std::max(m, v);
  if (m <= floor) {
    std::fill(a.begin(), a.end(), 0.0);
    return;
  }
  for (double& v : a) v /= m;
}

}  // namespace

Field indicator_linear(const Grid& g) {
  return Field(static_cast<size_t>(g.cell_count()), 1.0);
}

Field indicator_smagorinsky(const Field& vx, const Field& vz, const Grid& g,
                            double eps_grad) {
  Field dudx, dudz, dwdx, dwdz;
  gauss_gradient(vx, g, BoundarySpec::velocity_x(), dudx, dudz);
  gauss_gradient(vz, g, BoundarySpec::velocity_z(), dwdx, dwdz);
  Field a(vx.size());
  for (size_t c = 0; c < a.size(); ++c)
    a[c] = std::sqrt(dudx[c] * dudx[c] + dudz[c] * dudz[c] + dwdx[c] * dwdx[c] +
                     dwdz[c] * dwdz[c]);
  normalize_by_max(a, eps_grad);
  return a;
}

Field indicator_deconvolution(const Field& vx, const Field& vz, const Grid& g,
                              double deconv_alpha, const SolverConfig& lin) {
  const Field ones(static_cast<size_t>(g.cell_count()), 1.0);
  FaceField delta(g);
  delta.fill(deconv_alpha * deconv_alpha);
  const BoundarySpec zg = BoundarySpec::zero_gradient();
  const SparseOperator A = assemble_helmholtz(ones, delta, g, zg);

  auto inner_filter = [&](const Field& phi) {
    Field rhs = phi, x = phi;
    cg_solve(A, rhs, x, lin);
    return x;
  };
  const Field fx = inner_filter(vx);
  const Field fz = inner_filter(vz);
  Field a(vx.size());
  for (size_t c = 0; c < a.size(); ++c) {
    const double dx = vx[c] - fx[c], dz = vz[c] - fz[c];
    a[c] = std::sqrt(dx * dx + dz * dz);
  }
  normalize_by_max(a, 1e-14);
  return a;
}

Field indicator_field(const FilterConfig& cfg, const Field& vx, const Field& vz,
                      const Grid& g, const SolverConfig& lin) {
  switch (cfg.kind) {
    case FilterKind::Linear:
      return indicator_linear(g);
    case FilterKind::Smagorinsky:
      return indicator_smagorinsky(vx, vz, g, cfg.eps_grad);
    case FilterKind::Deconvolution:
      return indicator_deconvolution(vx, vz, g, cfg.deconv_alpha, lin);
  }
  throw std::logic_error("indicator_field: unknown kind");
}

Field artificial_viscosity(const Field& rho, const Field& a, double alpha, double dt) {
  if (rho.size() != a.size())
    throw std::invalid_argument("artificial_viscosity: field size mismatch");
  if (dt <= 0.0) throw std::invalid_argument("artificial_viscosity: dt must be positive");
  Field mu(rho.size());
  const double s = alpha * alpha / dt;
  for (size_t c = 0; c < mu.size(); ++c) mu[c] = rho[c] * s * a[c];
  return mu;
}

std::pair<Field, SolverReport> helmholtz_filter(const Field& phi, const Field& mu_bar,
                                                const Field& rho, double dt,
                                                const Grid& g, const BoundarySpec& bc,
                                                const SolverConfig& lin) {
  if (phi.size() != mu_bar.size() || phi.size() != rho.size())
    throw std::invalid_argument("helmholtz_filter: field size mismatch");
  if (dt <= 0.0) throw std::invalid_argument("helmholtz_filter: dt must be positive");

  Field diag(rho.size());
  for (size_t c = 0; c < diag.size(); ++c) diag[c] = rho[c] / dt;
  const FaceField mu_f = interpolate_to_faces(mu_bar, g, BoundarySpec::zero_gradient());
  const SparseOperator A = assemble_helmholtz(diag, mu_f, g, bc);

  Field b(phi.size());
  for (size_t c = 0; c < b.size(); ++c) b[c] = diag[c] * phi[c] + A.bc_rhs[c];
  Field x = phi;
  SolverReport rep = cg_solve(A, b, x, lin);
  return {std::move(x), rep};
}

double smagorinsky_alpha_hint(double cs, double delta, double dt, double grad_max) {
  if (cs < 0.0 || delta < 0.0 || dt <= 0.0 || grad_max < 0.0)
    throw std::invalid_argument("smagorinsky_alpha_hint: invalid argument");
  return cs * delta * std::sqrt(dt * grad_max);
}

}  // namespace efr
