/// @file linalg.hpp
/// Five-point-stencil sparse operators on the structured grid and the
/// preconditioned Krylov solvers used by the pressure, enthalpy and filter
/// equations.

#pragma once

#include "efr/grid.hpp"

#include <vector>

namespace efr {

// A x for the 5-point stencil. Off-diagonal coefficients are stored per
// interior face: `upper` multiplies the neighbour value in the owner row,
// `lower` multiplies the owner value in the neighbour row (owner = lower
// cell index). `bc_rhs` collects fixed-value wall contributions and is
// added to the right-hand side by the caller.
struct SparseOperator {
  int nx{0}, nz{0};
  std::vector<double> diag;
  std::vector<double> x_upper, x_lower;  // (nx-1)*nz interior x-faces
  std::vector<double> z_upper, z_lower;  // nx*(nz-1) interior z-faces
  std::vector<double> bc_rhs;
  bool symmetric{true};

  SparseOperator() = default;
  explicit SparseOperator(const Grid& g);

  int size() const { return nx * nz; }
  void apply(const Field& x, Field& y) const;

  // Decouples `cell` from its neighbours (row and column zeroed, diagonal
  // kept) so a pure-Neumann system becomes regular with x[cell] fixed by
  // b[cell]/diag[cell]. Callers set b[cell] = 0 to pin the value to zero.
  void pin(int cell);
};

// diag_i x_i - (1/|V|) sum_f diff_f A_f (x_N - x_P)/delta. Zero-gradient
// walls drop out; fixed-value walls fold into the diagonal and bc_rhs.
// diff must be non-negative on every face, diag non-negative per cell.
SparseOperator assemble_helmholtz(const Field& diag, const FaceField& diff,
                                  const Grid& g, const BoundarySpec& bc);

struct SolverConfig {
  double tol{1e-8};          // relative L2 residual reduction
  double abs_floor{1e-14};   // absolute stop once below this
  int max_iter{5000};
};

struct SolverReport {
  int iterations{0};
  double initial_residual{0.0};
  double final_residual{0.0};
  bool converged{false};
  std::vector<double> residual_history;  // preconditioned norm per iteration
};

// Conjugate gradients with a diagonal-modified zero-fill incomplete
// Cholesky preconditioner. Requires a symmetric operator with positive
// diagonal. Throws on indefiniteness (non-positive curvature).
SolverReport cg_solve(const SparseOperator& A, const Field& b, Field& x,
                      const SolverConfig& cfg);

// BiCGStab with a diagonal-modified zero-fill incomplete LU preconditioner.
// On scalar breakdown the iteration restarts once from the current iterate;
// a second breakdown throws.
SolverReport bicgstab_solve(const SparseOperator& A, const Field& b, Field& x,
                            const SolverConfig& cfg);

}  // namespace efr
