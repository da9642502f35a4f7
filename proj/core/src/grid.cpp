#include "efr/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace efr {

namespace {

int extent_cells(double lo, double hi, double h, const char* axis) {
  if (h <= 0.0) throw std::invalid_argument("build_grid: h must be positive");
  double len = hi - lo;
  if (len <= 0.0)
    throw std::invalid_argument(std::string("build_grid: empty extent along ") + axis);
  double n_real = len / h;
  double n = std::round(n_real);
  if (std::abs(n_real - n) > 1e-9 * std::max(1.0, n_real))
    throw std::invalid_argument(std::string("build_grid: extent along ") + axis +
                                " is not an integer multiple of h");
  if (n < 2)
    throw std::invalid_argument(std::string("build_grid: fewer than 2 cells along ") + axis);
  return static_cast<int>(n);
}

void check_cell_size(const Field& phi, const Grid& g, const char* op) {
  if (phi.size() != static_cast<size_t>(g.cell_count()))
    throw std::invalid_argument(std::string(op) + ": field size does not match grid");
}

}  // namespace

Grid build_grid(double x_min, double x_max, double z_min, double z_max, double h) {
  Grid g;
  g.nx = extent_cells(x_min, x_max, h, "x");
  g.nz = extent_cells(z_min, z_max, h, "z");
  g.dx = h;
  g.dz = h;
  g.x0 = x_min;
  g.z0 = z_min;
  return g;
}

void FaceField::fill(double v) {
  for (auto& a : xf) a = v;
  for (auto& a : zf) a = v;
  for (auto& a : west) a = v;
  for (auto& a : east) a = v;
  for (auto& a : bottom) a = v;
  for (auto& a : top) a = v;
}

FaceField face_normal_gradient(const Field& phi, const Grid& g, const BoundarySpec& bc) {
  check_cell_size(phi, g, "face_normal_gradient");
  FaceField out(g);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i)
      out.xf[g.x_face(i, k)] = (phi[g.cell(i + 1, k)] - phi[g.cell(i, k)]) / g.dx;
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i)
      out.zf[g.z_face(i, k)] = (phi[g.cell(i, k + 1)] - phi[g.cell(i, k)]) / g.dz;
  for (int k = 0; k < g.nz; ++k) {
    out.west[k] = bc.west.kind == BcKind::FixedValue
                      ? (bc.west.value - phi[g.cell(0, k)]) / (0.5 * g.dx)
                      : 0.0;
    out.east[k] = bc.east.kind == BcKind::FixedValue
                      ? (bc.east.value - phi[g.cell(g.nx - 1, k)]) / (0.5 * g.dx)
                      : 0.0;
  }
  for (int i = 0; i < g.nx; ++i) {
    out.bottom[i] = bc.bottom.kind == BcKind::FixedValue
                        ? (bc.bottom.value - phi[g.cell(i, 0)]) / (0.5 * g.dz)
                        : 0.0;
    out.top[i] = bc.top.kind == BcKind::FixedValue
                     ? (bc.top.value - phi[g.cell(i, g.nz - 1)]) / (0.5 * g.dz)
                     : 0.0;
  }
  return out;
}

FaceField interpolate_to_faces(const Field& phi, const Grid& g, const BoundarySpec& bc) {
  check_cell_size(phi, g, "interpolate_to_faces");
  FaceField out(g);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i + 1 < g.nx; ++i)
      out.xf[g.x_face(i, k)] = 0.5 * (phi[g.cell(i, k)] + phi[g.cell(i + 1, k)]);
  for (int k = 0; k + 1 < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i)
      out.zf[g.z_face(i, k)] = 0.5 * (phi[g.cell(i, k)] + phi[g.cell(i, k + 1)]);
  for (int k = 0; k < g.nz; ++k) {
    out.west[k] = bc.west.kind == BcKind::FixedValue ? bc.west.value : phi[g.cell(0, k)];
    out.east[k] =
        bc.east.kind == BcKind::FixedValue ? bc.east.value : phi[g.cell(g.nx - 1, k)];
  }
  for (int i = 0; i < g.nx; ++i) {
    out.bottom[i] =
        bc.bottom.kind == BcKind::FixedValue ? bc.bottom.value : phi[g.cell(i, 0)];
    out.top[i] =
        bc.top.kind == BcKind::FixedValue ? bc.top.value : phi[g.cell(i, g.nz - 1)];
  }
  return out;
}

void gauss_gradient(const Field& phi, const Grid& g, const BoundarySpec& bc,
                    Field& ddx, Field& ddz) {
  check_cell_size(phi, g, "gauss_gradient");
  FaceField fv = interpolate_to_faces(phi, g, bc);
  ddx.assign(phi.size(), 0.0);
  ddz.assign(phi.size(), 0.0);
  const double ax = g.face_area_x(), az = g.face_area_z(), vol = g.cell_volume();
  for (int k = 0; k < g.nz; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, k);
      const double fw = (i == 0) ? fv.west[k] : fv.xf[g.x_face(i - 1, k)];
      const double fe = (i == g.nx - 1) ? fv.east[k] : fv.xf[g.x_face(i, k)];
      const double fb = (k == 0) ? fv.bottom[i] : fv.zf[g.z_face(i, k - 1)];
      const double ft = (k == g.nz - 1) ? fv.top[i] : fv.zf[g.z_face(i, k)];
      ddx[c] = (fe - fw) * ax / vol;
      ddz[c] = (ft - fb) * az / vol;
    }
  }
}

Field divergence_of_flux(const FaceField& flux, const Grid& g) {
  if (flux.nx != g.nx || flux.nz != g.nz)
    throw std::invalid_argument("divergence_of_flux: face field does not match grid");
  Field div(static_cast<size_t>(g.cell_count()), 0.0);
  const double inv_vol = 1.0 / g.cell_volume();
  for (int k = 0; k < g.nz; ++k) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const double f = flux.xf[g.x_face(i, k)];
      div[g.cell(i, k)] += f * inv_vol;
      div[g.cell(i + 1, k)] -= f * inv_vol;
    }
  }
  for (int k = 0; k + 1 < g.nz; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      const double f = flux.zf[g.z_face(i, k)];
      div[g.cell(i, k)] += f * inv_vol;
      div[g.cell(i, k + 1)] -= f * inv_vol;
    }
  }
  for (int k = 0; k < g.nz; ++k) {
    div[g.cell(0, k)] += flux.west[k] * inv_vol;
    div[g.cell(g.nx - 1, k)] += flux.east[k] * inv_vol;
  }
  for (int i = 0; i < g.nx; ++i) {
    div[g.cell(i, 0)] += flux.bottom[i] * inv_vol;
    div[g.cell(i, g.nz - 1)] += flux.top[i] * inv_vol;
  }
  return div;
}

}  // namespace efr
