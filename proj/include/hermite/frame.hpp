#pragma once

// Periodic staggered grids and the node data living on them.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hermite/errors.hpp"
#include "hermite/polyalg.hpp"

namespace hermite {

struct Grid {
  int dim = 1;
  double xl = 0.0, xr = 1.0;
  double yb = 0.0, yt = 1.0;
  int nx = 1, ny = 1;
  double dt = 0.0;
  long nt = 0;

  double dx() const { return (xr - xl) / nx; }
  double dy() const { return dim == 2 ? (yt - yb) / ny : dx(); }
  double h() const { return dim == 2 ? std::min(dx(), dy()) : dx(); }
  long nodes() const { return dim == 1 ? static_cast<long>(nx) : static_cast<long>(nx) * ny; }

  static Grid line(double xl, double xr, int nx) {
    Grid g;
    g.dim = 1;
    g.xl = xl;
    g.xr = xr;
    g.nx = nx;
    g.ny = 1;
    return g;
  }

  static Grid plane(double xl, double xr, double yb, double yt, int nx, int ny) {
    Grid g;
    g.dim = 2;
    g.xl = xl;
    g.xr = xr;
    g.yb = yb;
    g.yt = yt;
    g.nx = nx;
    g.ny = ny;
    return g;
  }

  /// Chooses dt = cfl * h, then shrinks it so an integer number of steps lands on T.
  void set_time(double final_time, double cfl) {
    if (final_time <= 0.0) {
      nt = 0;
      dt = cfl * h();
      return;
    }
    const double raw = cfl * h();
    nt = static_cast<long>(std::ceil(final_time / raw * (1.0 - 1e-12)));
    nt = std::max(nt, 1L);
    dt = final_time / static_cast<double>(nt);
  }

  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    if (dim != 1 && dim != 2) v.push_back("grid.dim must be 1 or 2");
    if (!(xr > xl)) v.push_back("grid.x extent must be increasing");
    if (nx < 2) v.push_back("grid.nx must be at least 2");
    if (dim == 2) {
      if (!(yt > yb)) v.push_back("grid.y extent must be increasing");
      if (ny < 2) v.push_back("grid.ny must be at least 2");
    }
    return v;
  }
};

enum class Mesh { primal, dual };

inline Mesh other(Mesh m) { return m == Mesh::primal ? Mesh::dual : Mesh::primal; }

/// Per-node scaled derivative data for every variable on one mesh.
///
/// Node data is stored at a fixed capacity of side = m_max+1 entries per
/// direction; entries above the node's own m are zero. The scaling is
/// dx^i dy^j / (i! j!) times the cross derivative, i.e. exactly the Taylor
/// coefficients in the cell-normalized coordinates.
struct FieldFrame {
  Mesh mesh = Mesh::primal;
  double time = 0.0;
  int dim = 1;
  int nvars = 6;
  int m_max = 0;
  int nx = 0, ny = 1;
  std::vector<int> m;
  std::vector<double> data;

  FieldFrame() = default;
  FieldFrame(const Grid& g, int nvars_, int m_max_, Mesh mesh_, double t)
      : mesh(mesh_), time(t), dim(g.dim), nvars(nvars_), m_max(m_max_), nx(g.nx), ny(g.dim == 2 ? g.ny : 1) {
    m.assign(static_cast<std::size_t>(nodes()), m_max);
    data.assign(static_cast<std::size_t>(nodes() * node_stride()), 0.0);
  }

  long nodes() const { return static_cast<long>(nx) * ny; }
  int side() const { return m_max + 1; }
  int block() const { return dim == 1 ? side() : side() * side(); }
  long node_stride() const { return static_cast<long>(nvars) * block(); }

  double* node(long i) { return data.data() + i * node_stride(); }
  const double* node(long i) const { return data.data() + i * node_stride(); }
  std::span<const double> var(long i, int v) const {
    return {node(i) + static_cast<long>(v) * block(), static_cast<std::size_t>(block())};
  }
  double value(long i, int v) const { return node(i)[static_cast<long>(v) * block()]; }

  Mesh cell_mesh_center() const { return other(mesh); }
};

/// Node position on a mesh.
inline std::array<double, 2> node_position(const Grid& g, Mesh mesh, long node) {
  const double off = mesh == Mesh::dual ? 0.5 : 0.0;
  const long i = node % g.nx;
  const long j = node / g.nx;
  return {g.xl + (static_cast<double>(i) + off) * g.dx(), g.dim == 2 ? g.yb + (static_cast<double>(j) + off) * g.dy() : 0.0};
}

/// Vertices of cell `c` of the frame's mesh. Cell c is centered on node c of
/// the other mesh. Order: 1D {left, right}; 2D {bl, br, tl, tr}.
inline std::array<long, 4> cell_vertices(const Grid& g, Mesh mesh, long c) {
  const long nx = g.nx;
  const long i = c % nx;
  auto lo_hi = [mesh](long idx, long n) -> std::array<long, 2> {
    if (mesh == Mesh::primal) return {idx, (idx + 1) % n};
    return {(idx - 1 + n) % n, idx};
  };
  const auto xi = lo_hi(i, nx);
  if (g.dim == 1) return {xi[0], xi[1], -1, -1};
  const long ny = g.ny;
  const long j = c / nx;
  const auto yj = lo_hi(j, ny);
  return {yj[0] * nx + xi[0], yj[0] * nx + xi[1], yj[1] * nx + xi[0], yj[1] * nx + xi[1]};
}

inline int cell_order(const FieldFrame& f, const std::array<long, 4>& vtx) {
  const int nv = f.dim == 1 ? 2 : 4;
  int mb = f.m[static_cast<std::size_t>(vtx[0])];
  for (int i = 1; i < nv; ++i) mb = std::min(mb, f.m[static_cast<std::size_t>(vtx[i])]);
  return mb;
}

/// Interpolates every variable on a cell at order `mbar`. `out` receives
/// nvars blocks of (2mbar+2)^dim coefficients; `scratch` must hold at
/// least 4 * (mbar+1)^2 doubles.
inline void interpolate_cell(const FieldFrame& f, const std::array<long, 4>& vtx, int mbar, double* out,
                             double* scratch) {
  const int n = poly::coeff_count(mbar);
  const int q = mbar + 1;
  const int side = f.side();
  if (f.dim == 1) {
    for (int v = 0; v < f.nvars; ++v) {
      const double* left = f.node(vtx[0]) + static_cast<long>(v) * side;
      const double* right = f.node(vtx[1]) + static_cast<long>(v) * side;
      poly::interp_scaled({left, static_cast<std::size_t>(q)}, {right, static_cast<std::size_t>(q)}, mbar,
                          {out + static_cast<long>(v) * n, static_cast<std::size_t>(n)});
    }
    return;
  }
  const int qq = q * q;
  const int block = side * side;
  for (int v = 0; v < f.nvars; ++v) {
    for (int c = 0; c < 4; ++c) {
      const double* src = f.node(vtx[c]) + static_cast<long>(v) * block;
      double* dst = scratch + c * qq;
      for (int j = 0; j < q; ++j)
        for (int i = 0; i < q; ++i) dst[j * q + i] = src[j * side + i];
    }
    poly::interp_scaled_2d({scratch, static_cast<std::size_t>(qq)}, {scratch + qq, static_cast<std::size_t>(qq)},
                           {scratch + 2 * qq, static_cast<std::size_t>(qq)},
                           {scratch + 3 * qq, static_cast<std::size_t>(qq)}, mbar,
                           {out + static_cast<long>(v) * n * n, static_cast<std::size_t>(n * n)});
  }
}

}  // namespace hermite
