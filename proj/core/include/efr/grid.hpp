/// @file grid.hpp
/// Uniform structured 2D finite-volume grid (unit depth) and the face/cell
/// operators built on it. Cells are stored row-major with x fastest.

#pragma once

#include <cstddef>
#include <vector>

namespace efr {

using Field = std::vector<double>;

struct Grid {
  int nx{0};
  int nz{0};
  double dx{0.0};
  double dz{0.0};
  double x0{0.0};
  double z0{0.0};

  int cell_count() const { return nx * nz; }
  int cell(int i, int k) const { return k * nx + i; }
  double xc(int i) const { return x0 + (i + 0.5) * dx; }
  double zc(int k) const { return z0 + (k + 0.5) * dz; }
  double cell_volume() const { return dx * dz; }
  // Unit depth: an x-normal face has area dz, a z-normal face dx.
  double face_area_x() const { return dz; }
  double face_area_z() const { return dx; }

  int x_face_count() const { return (nx - 1) * nz; }
  int z_face_count() const { return nx * (nz - 1); }
  // Interior x-face f sits between cells (i,k) and (i+1,k), 0 <= i < nx-1.
  int x_face(int i, int k) const { return k * (nx - 1) + i; }
  // Interior z-face f sits between cells (i,k) and (i,k+1), 0 <= k < nz-1.
  int z_face(int i, int k) const { return k * nx + i; }
};

// Fails if an extent is not an integer multiple of h (relative tol 1e-9),
// or fewer than 2 cells result in either direction.
Grid build_grid(double x_min, double x_max, double z_min, double z_max, double h);

// Scalar values attached to faces. Interior faces are oriented +x / +z
// (owner = lower-index cell); boundary faces are oriented outward.
struct FaceField {
  int nx{0};
  int nz{0};
  std::vector<double> xf;      // interior x-normal faces, (nx-1)*nz
  std::vector<double> zf;      // interior z-normal faces, nx*(nz-1)
  std::vector<double> west;    // nz boundary faces at i = 0
  std::vector<double> east;    // nz boundary faces at i = nx-1
  std::vector<double> bottom;  // nx boundary faces at k = 0
  std::vector<double> top;     // nx boundary faces at k = nz-1

  FaceField() = default;
  explicit FaceField(const Grid& g)
      : nx(g.nx), nz(g.nz),
        xf(static_cast<size_t>(g.x_face_count()), 0.0),
        zf(static_cast<size_t>(g.z_face_count()), 0.0),
        west(static_cast<size_t>(g.nz), 0.0), east(static_cast<size_t>(g.nz), 0.0),
        bottom(static_cast<size_t>(g.nx), 0.0), top(static_cast<size_t>(g.nx), 0.0) {}

  void fill(double v);
};

enum class BcKind { ZeroGradient, FixedValue };

struct WallBc {
  BcKind kind{BcKind::ZeroGradient};
  double value{0.0};
};

// Per-wall condition for one field. Velocity components get FixedValue(0)
// on their wall-normal pair and ZeroGradient on the tangential pair.
struct BoundarySpec {
  WallBc west{}, east{}, bottom{}, top{};

  static BoundarySpec zero_gradient() { return {}; }
  static BoundarySpec fixed_value(double v) {
    WallBc f{BcKind::FixedValue, v};
    return {f, f, f, f};
  }
  static BoundarySpec velocity_x() {
    BoundarySpec b;
    b.west = b.east = WallBc{BcKind::FixedValue, 0.0};
    return b;
  }
  static BoundarySpec velocity_z() {
    BoundarySpec b;
    b.bottom = b.top = WallBc{BcKind::FixedValue, 0.0};
    return b;
  }
};

// (phi_N - phi_P)/delta on interior faces; on boundary faces the outward
// one-sided gradient: 0 for ZeroGradient, (phi_b - phi_P)/(delta/2) for
// FixedValue.
FaceField face_normal_gradient(const Field& phi, const Grid& g, const BoundarySpec& bc);

// Arithmetic mean on interior faces; boundary faces take phi_P for
// ZeroGradient and the fixed value otherwise.
FaceField interpolate_to_faces(const Field& phi, const Grid& g, const BoundarySpec& bc);

// Green-Gauss cell gradient from face-interpolated values.
void gauss_gradient(const Field& phi, const Grid& g, const BoundarySpec& bc,
                    Field& ddx, Field& ddz);

/// Per-volume divergence of a face flux field: outflow positive. Interior
// fluxes are oriented +x/+z, boundary fluxes outward.
Field divergence_of_flux(const FaceField& flux, const Grid& g);

}  // namespace efr
