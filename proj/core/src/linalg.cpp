#include "efr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace efr {

SparseOperator::SparseOperator(const Grid& g)
    : nx(g.nx), nz(g.nz),
      diag(static_cast<size_t>(g.cell_count()), 0.0),
      x_upper(static_cast<size_t>(g.x_face_count()), 0.0),
      x_lower(static_cast<size_t>(g.x_face_count()), 0.0),
      z_upper(static_cast<size_t>(g.z_face_count()), 0.0),
      z_lower(static_cast<size_t>(g.z_face_count()), 0.0),
      bc_rhs(static_cast<size_t>(g.cell_count()), 0.0) {}

void SparseOperator::apply(const Field& x, Field& y) const {
  const size_t n = diag.size();
  if (x.size() != n) throw std::invalid_argument("SparseOperator::apply: size mismatch");
  y.assign(n, 0.0);
  for (size_t c = 0; c < n; ++c) y[c] = diag[c] * x[c];
  for (int k = 0; k < nz; ++k) {
    const int row = k * nx, frow = k * (nx - 1);
    for (int i = 0; i + 1 < nx; ++i) {
      const int f = frow + i, c = row + i;
      y[c] += x_upper[f] * x[c + 1];
      y[c + 1] += x_lower[f] * x[c];
    }
  }
  for (int k = 0; k + 1 < nz; ++k) {
    const int row = k * nx;
    for (int i = 0; i < nx; ++i) {
      const int f = row + i, c = row + i;
      y[c] += z_upper[f] * x[c + nx];
      y[c + nx] += z_lower[f] * x[c];
    }
  }
}

void SparseOperator::pin(int cell) {
  if (cell < 0 || cell >= size()) throw std::invalid_argument("pin: cell out of range");
  const int i = cell % nx, k = cell / nx;
  if (i > 0) x_upper[k * (nx - 1) + i - 1] = x_lower[k * (nx - 1) + i - 1] = 0.0;
  if (i + 1 < nx) x_upper[k * (nx - 1) + i] = x_lower[k * (nx - 1) + i] = 0.0;
  if (k > 0) z_upper[(k - 1) * nx + i] = z_lower[(k - 1) * nx + i] = 0.0;
  if (k + 1 < nz) z_upper[k * nx + i] = z_lower[k * nx + i] = 0.0;
  bc_rhs[cell] = 0.0;
}

SparseOperator assemble_helmholtz(const Field& diag, const FaceField& diff,
                                  const Grid& g, const BoundarySpec& bc) {
  if (diag.size() != static_cast<size_t>(g.cell_count()))
    throw std::invalid_argument("assemble_helmholtz: diag size mismatch");
  if (diff.nx != g.nx || diff.nz != g.nz)
    throw std::invalid_argument("assemble_helmholtz: face field mismatch");
  for (double d : diag)
    if (d < 0.0) throw std::invalid_argument("assemble_helmholtz: negative diagonal");

  SparseOperator A(g);
  A.symmetric = true;
  for (int c = 0; c < A.size(); ++c) A.diag[c] = diag[c];

  const double inv_vol = 1.0 / g.cell_volume();
  const double cx = g.face_area_x() / g.dx * inv_vol;
  const double cz = g.face_area_z() / g.dz * inv_vol;

  auto face_coeff = [](double d, const char* what) {
    if (d < 0.0)
      throw std::invalid_argument(std::string("assemble_helmholtz: negative ") + what);
    return d;
  };

  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f = g.x_face(i, k);
      const double w = face_coeff(diff.xf[f], "x-face coefficient") * cx;
      A.diag[g.cell(i, k)] += w;
      A.diag[g.cell(i + 1, k)] += w;
      A.x_upper[f] = A.x_lower[f] = -w;
    }
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.z_face(i, k);
      const double w = face_coeff(diff.zf[f], "z-face coefficient") * cz;
      A.diag[g.cell(i, k)] += w;
      A.diag[g.cell(i, k + 1)] += w;
      A.z_upper[f] = A.z_lower[f] = -w;
    }

  // Fixed-value walls use the half-cell gradient (value - x_P)/(delta/2).
  for (int k = 0; k < g.nz; ++k) {
    if (bc.west.kind == BcKind::FixedValue) {
      const double w = 2.0 * face_coeff(diff.west[k], "west coefficient") * cx;
      A.diag[g.cell(0, k)] += w;
      A.bc_rhs[g.cell(0, k)] += w * bc.west.value;
    }
    if (bc.east.kind == BcKind::FixedValue) {
      const double w = 2.0 * face_coeff(diff.east[k], "east coefficient") * cx;
      A.diag[g.cell(g.nx - 1, k)] += w;
      A.bc_rhs[g.cell(g.nx - 1, k)] += w * bc.east.value;
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    if (bc.bottom.kind == BcKind::FixedValue) {
      const double w = 2.0 * face_coeff(diff.bottom[i], "bottom coefficient") * cz;
      A.diag[g.cell(i, 0)] += w;
      A.bc_rhs[g.cell(i, 0)] += w * bc.bottom.value;
    }
    if (bc.top.kind == BcKind::FixedValue) {
      const double w = 2.0 * face_coeff(diff.top[i], "top coefficient") * cz;
      A.diag[g.cell(i, g.nz - 1)] += w;
      A.bc_rhs[g.cell(i, g.nz - 1)] += w * bc.top.value;
    }
  }
  return A;
}

namespace {

double dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Field& a) { return std::sqrt(dot(a, a)); }

// Zero-fill incomplete factorization that modifies only the diagonal: the
// off-diagonals of A are reused in the triangular sweeps. Symmetric rule
// (incomplete Cholesky) when sym, otherwise the LU variant.
struct DiagonalModifiedIlu {
  const SparseOperator* A{nullptr};
  std::vector<double> rd;  // reciprocal of the modified diagonal

  void build(const SparseOperator& op, bool sym) {
    A = &op;
    const int nx = op.nx, nz = op.nz;
    rd.assign(op.diag.begin(), op.diag.end());
    for (int k = 0; k < nz; ++k)
      for (int i = 0; i < nx; ++i) {
        const int c = k * nx + i;
        if (rd[c] <= 0.0)
          throw std::runtime_error("preconditioner: non-positive pivot");
        if (i + 1 < nx) {
          const int f = k * (nx - 1) + i;
          const double prod =
              sym ? op.x_upper[f] * op.x_upper[f] : op.x_upper[f] * op.x_lower[f];
          rd[c + 1] -= prod / rd[c];
        }
        if (k + 1 < nz) {
          const int f = k * nx + i;
          const double prod =
              sym ? op.z_upper[f] * op.z_upper[f] : op.z_upper[f] * op.z_lower[f];
          rd[c + nx] -= prod / rd[c];
        }
      }
    for (double& d : rd) {
      if (d <= 0.0) throw std::runtime_error("preconditioner: non-positive pivot");
      d = 1.0 / d;
    }
  }

  // w = M^-1 r via forward then backward sweep in ascending owner order.
  void apply(const Field& r, Field& w) const {
    const int nx = A->nx, nz = A->nz;
    const size_t n = r.size();
    w.resize(n);
    for (size_t c = 0; c < n; ++c) w[c] = rd[c] * r[c];
    for (int k = 0; k < nz; ++k)
      for (int i = 0; i < nx; ++i) {
        const int c = k * nx + i;
        if (i + 1 < nx) {
          const int f = k * (nx - 1) + i;
          const double lower = A->symmetric ? A->x_upper[f] : A->x_lower[f];
          w[c + 1] -= rd[c + 1] * lower * w[c];
        }
        if (k + 1 < nz) {
          const int f = k * nx + i;
          const double lower = A->symmetric ? A->z_upper[f] : A->z_lower[f];
          w[c + nx] -= rd[c + nx] * lower * w[c];
        }
      }
    for (int k = nz - 1; k >= 0; --k)
      for (int i = nx - 1; i >= 0; --i) {
        const int c = k * nx + i;
        if (k + 1 < nz) {
          const int f = k * nx + i;
          w[c] -= rd[c] * A->z_upper[f] * w[c + nx];
        }
        if (i + 1 < nx) {
          const int f = k * (nx - 1) + i;
          w[c] -= rd[c] * A->x_upper[f] * w[c + 1];
        }
      }
  }
};

}  // namespace

SolverReport cg_solve(const SparseOperator& A, const Field& b, Field& x,
                      const SolverConfig& cfg) {
  if (!A.symmetric) throw std::invalid_argument("cg_solve: operator must be symmetric");
  const size_t n = b.size();
  if (x.size() != n || static_cast<size_t>(A.size()) != n)
    throw std::invalid_argument("cg_solve: size mismatch");

  SolverReport rep;
  Field r(n), q(n), z(n), p(n);
  A.apply(x, q);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  double rnorm = norm2(r);
  rep.initial_residual = rnorm;
  const double target = std::max(cfg.tol * rnorm, cfg.abs_floor);
  if (rnorm <= cfg.abs_floor) {
    rep.final_residual = rnorm;
    rep.converged = true;
    return rep;
  }

  DiagonalModifiedIlu M;
  M.build(A, true);
  M.apply(r, z);
  double rz = dot(r, z);
  if (rz <= 0.0) throw std::runtime_error("cg_solve: preconditioner breakdown");
  rep.residual_history.push_back(std::sqrt(rz));
  p = z;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    A.apply(p, q);
    const double pq = dot(p, q);
    if (pq <= 0.0) throw std::runtime_error("cg_solve: operator not positive definite");
    const double alpha = rz / pq;
    for (size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rep.iterations = it;
    rnorm = norm2(r);
    if (rnorm <= target) {
      rep.converged = true;
      break;
    }
    M.apply(r, z);
    const double rz_new = dot(r, z);
    if (rz_new <= 0.0) throw std::runtime_error("cg_solve: preconditioner breakdown");
    rep.residual_history.push_back(std::sqrt(rz_new));
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  rep.final_residual = rnorm;
  return rep;
}

SolverReport bicgstab_solve(const SparseOperator& A, const Field& b, Field& x,
                            const SolverConfig& cfg) {
  const size_t n = b.size();
  if (x.size() != n || static_cast<size_t>(A.size()) != n)
    throw std::invalid_argument("bicgstab_solve: size mismatch");

  SolverReport rep;
  Field r(n), rhat(n), p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
  A.apply(x, t);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - t[i];
  double rnorm = norm2(r);
  rep.initial_residual = rnorm;
  rep.residual_history.push_back(rnorm);
  const double target = std::max(cfg.tol * rnorm, cfg.abs_floor);
  if (rnorm <= cfg.abs_floor) {
    rep.final_residual = rnorm;
    rep.converged = true;
    return rep;
  }

  DiagonalModifiedIlu M;
  M.build(A, A.symmetric);

  rhat = r;
  double rho_old = 1.0, alpha = 1.0, omega = 1.0;
  bool restarted = false;
  const double breakdown = 1e-300;

  auto restart_or_fail = [&](const char* why) {
    if (restarted) throw std::runtime_error(std::string("bicgstab_solve: breakdown: ") + why);
    restarted = true;
    rhat = r;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    rho_old = alpha = omega = 1.0;
  };

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const double rho = dot(rhat, r);
    if (std::abs(rho) < breakdown) {
      restart_or_fail("rho ~ 0");
      continue;
    }
    const double beta = (rho / rho_old) * (alpha / omega);
    for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    M.apply(p, phat);
    A.apply(phat, v);
    const double rhat_v = dot(rhat, v);
    if (std::abs(rhat_v) < breakdown) {
      restart_or_fail("rhat.v ~ 0");
      continue;
    }
    alpha = rho / rhat_v;
    for (size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    rep.iterations = it;
    if (norm2(s) <= target) {
      for (size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
      r = s;
      rnorm = norm2(r);
      rep.residual_history.push_back(rnorm);
      rep.converged = true;
      break;
    }
    M.apply(s, shat);
    A.apply(shat, t);
    const double tt = dot(t, t);
    if (tt < breakdown) {
      restart_or_fail("t.t ~ 0");
      continue;
    }
    omega = dot(t, s) / tt;
    for (size_t i = 0; i < n; ++i) {
      x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * t[i];
    }
    rnorm = norm2(r);
    rep.residual_history.push_back(rnorm);
    if (rnorm <= target) {
      rep.converged = true;
      break;
    }
    if (std::abs(omega) < breakdown) {
      restart_or_fail("omega ~ 0");
      continue;
    }
    rho_old = rho;
  }
  rep.final_residual = rnorm;
  return rep;
}

}  // namespace efr
