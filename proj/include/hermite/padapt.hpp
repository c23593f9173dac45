#pragma once

// Per-node order selection from the magnitude of retained coefficients.

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

struct AdaptConfig {
  double eps_ptol = 1e-4;
  int m_min = 0;
  int m_max = poly::kMaxOrder;
  // Per-variable weights applied before taking the max over the stack.
  std::vector<double> scale;

  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    if (!(eps_ptol > 0.0)) v.push_back("adapt.eps_ptol must be positive");
    if (m_min < 0) v.push_back("adapt.m_min must be nonnegative");
    if (m_max > poly::kMaxOrder) v.push_back("adapt.m_max must not exceed " + std::to_string(poly::kMaxOrder));
    if (m_min > m_max) v.push_back("adapt.m_min must not exceed adapt.m_max");
    return v;
  }
};

/// Smallest admissible order for a node.
///
/// `stack` holds `nvars` blocks of `side^dim` coefficients (1D: index k;
/// 2D: index l*side + k). Candidates run from m_min to min(m_in, m_max);
/// a candidate m passes when every coefficient with an index above m in
/// any direction has magnitude at most eps_ptol for every variable.
inline int select_m(std::span<const double> stack, int nvars, int side, int dim, int m_in, const AdaptConfig& cfg) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("select_m: dimension must be 1 or 2");
  const int block = dim == 1 ? side : side * side;
  if (stack.size() != static_cast<std::size_t>(nvars * block)) throw std::invalid_argument("select_m: bad stack size");
  const int m_hi = std::min(m_in, cfg.m_max);
  if (cfg.m_min >= m_hi) return m_hi;

  // level[r]: max magnitude over the stack among entries whose largest
  // index equals r.
  std::array<double, 2 * poly::kMaxCoeffs> level{};
  for (int v = 0; v < nvars; ++v) {
    const double w = cfg.scale.empty() ? 1.0 : cfg.scale[static_cast<std::size_t>(v)];
    const double* b = stack.data() + static_cast<std::size_t>(v * block);
    if (dim == 1) {
      for (int k = 0; k < side; ++k) level[k] = std::max(level[k], w * std::abs(b[k]));
    } else {
      for (int l = 0; l < side; ++l)
        for (int k = 0; k < side; ++k) {
          const int r = std::max(k, l);
          level[r] = std::max(level[r], w * std::abs(b[l * side + k]));
        }
    }
  }
  // tail[m] = max of level[r] for r > m
  int chosen = m_hi;
  double tail = 0.0;
  for (int r = side - 1; r > cfg.m_min; --r) {
    tail = std::max(tail, level[r]);
    const int m = r - 1;
    if (m <= m_hi && tail <= cfg.eps_ptol) chosen = m;
    if (tail > cfg.eps_ptol) break;
  }
  return std::max(chosen, cfg.m_min);
}

inline int cell_mbar(std::span<const int> vertex_ms) {
  if (vertex_ms.empty()) throw std::invalid_argument("cell_mbar: no vertices");
  return *std::min_element(vertex_ms.begin(), vertex_ms.end());
}

struct MStats {
  int min = 0;
  int max = 0;
  double mean = 0.0;
  long long dof = 0;
};

inline MStats m_statistics(std::span<const int> node_m, int dim, int nvars) {
  if (node_m.empty()) throw std::invalid_argument("m_statistics: empty frame");
  MStats s;
  s.min = *std::min_element(node_m.begin(), node_m.end());
  s.max = *std::max_element(node_m.begin(), node_m.end());
  long long sum = 0;
  for (int m : node_m) {
    sum += m;
    const long long side = m + 1;
    s.dof += (dim == 1 ? side : side * side) * nvars;
  }
  s.mean = static_cast<double>(sum) / static_cast<double>(node_m.size());
  return s;
}

}  // namespace hermite
