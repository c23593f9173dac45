#pragma once

// Scaled-coefficient polynomial algebra on a Hermite cell.
//
// A cell polynomial is stored by its coefficients in the normalized
// coordinate xi = (x - x_center) / dx, so coefficient k equals
// dx^k f^(k)(x_center) / k!. Node data uses the same scaling, which makes
// the two-point Hermite interpolation independent of dx.
//
// 2D tensors are stored row-major by l (the eta power) then k (the xi
// power): entry (k, l) lives at index l * n + k with n = 2m + 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hermite::poly {

inline constexpr int kMaxOrder = 6;
inline constexpr int kMaxCoeffs = 2 * kMaxOrder + 2;

inline constexpr int coeff_count(int m) { return 2 * m + 2; }

struct CoeffTensor1D {
  int m = 0;
  std::vector<double> coeffs;

  CoeffTensor1D() : coeffs(2, 0.0) {}
  explicit CoeffTensor1D(int order) : m(order), coeffs(static_cast<std::size_t>(coeff_count(order)), 0.0) {
    if (order < 0) throw std::invalid_argument("CoeffTensor1D: negative order");
  }
  CoeffTensor1D(int order, std::vector<double> c) : m(order), coeffs(std::move(c)) {
    if (order < 0 || coeffs.size() != static_cast<std::size_t>(coeff_count(order)))
      throw std::invalid_argument("CoeffTensor1D: length must be 2m+2");
  }

  int size() const { return coeff_count(m); }
  double& operator[](int k) { return coeffs[static_cast<std::size_t>(k)]; }
  double operator[](int k) const { return coeffs[static_cast<std::size_t>(k)]; }
  std::span<double> span() { return coeffs; }
  std::span<const double> span() const { return coeffs; }
};

struct CoeffTensor2D {
  int m = 0;
  std::vector<double> coeffs;

  CoeffTensor2D() : coeffs(4, 0.0) {}
  explicit CoeffTensor2D(int order)
      : m(order), coeffs(static_cast<std::size_t>(coeff_count(order) * coeff_count(order)), 0.0) {
    if (order < 0) throw std::invalid_argument("CoeffTensor2D: negative order");
  }

  int size() const { return coeff_count(m); }
  double& at(int k, int l) { return coeffs[static_cast<std::size_t>(l * size() + k)]; }
  double at(int k, int l) const { return coeffs[static_cast<std::size_t>(l * size() + k)]; }
  std::span<double> span() { return coeffs; }
  std::span<const double> span() const { return coeffs; }
};

/// Raw derivatives d^k f / dx^k, k = 0..m, at a node.
struct DerivData {
  int m = 0;
  std::vector<double> values;

  DerivData() : values(1, 0.0) {}
  DerivData(int order, std::vector<double> v) : m(order), values(std::move(v)) {
    if (order < 0 || values.size() != static_cast<std::size_t>(order + 1))
      throw std::invalid_argument("DerivData: length must be m+1");
  }
};

/// Raw cross derivatives d^(i+j) f / dx^i dy^j at a node, stored at j * (m+1) + i.
struct DerivData2D {
  int m = 0;
  std::vector<double> values;

  DerivData2D() : values(1, 0.0) {}
  DerivData2D(int order, std::vector<double> v) : m(order), values(std::move(v)) {
    if (order < 0 || values.size() != static_cast<std::size_t>((order + 1) * (order + 1)))
      throw std::invalid_argument("DerivData2D: length must be (m+1)^2");
  }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j * (m + 1) + i)]; }
};

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

namespace detail {

// Linear map from scaled endpoint data to the 2m+2 monomial coefficients,
// built once per order from Hermite divided differences on the repeated
// nodes -1/2 (m+1 times) and +1/2 (m+1 times).
struct InterpMap {
  int m = -1;
  // left[k][j], right[k][j]: contribution of left/right datum j to coefficient k
  std::array<std::array<double, kMaxOrder + 1>, kMaxCoeffs> left{};
  std::array<std::array<double, kMaxOrder + 1>, kMaxCoeffs> right{};
};

inline void hermite_divided_differences(std::span<const double> left, std::span<const double> right, int m,
                                        std::span<double> out) {
  const int n = coeff_count(m);
  std::array<double, kMaxCoeffs> z{};
  for (int i = 0; i < n; ++i) z[i] = i <= m ? -0.5 : 0.5;

  std::array<std::array<double, kMaxCoeffs>, kMaxCoeffs> t{};
  for (int i = 0; i < n; ++i) t[i][0] = i <= m ? left[0] : right[0];
  for (int r = 1; r < n; ++r) {
    for (int i = 0; i + r < n; ++i) {
      const int j = i + r;
      if (z[i] == z[j])
        t[i][r] = i <= m ? left[r] : right[r];
      else
        t[i][r] = (t[i + 1][r - 1] - t[i][r - 1]) / (z[j] - z[i]);
    }
  }

  // Newton form to monomials by nested multiplication with (xi - z_r).
  std::array<double, kMaxCoeffs> p{};
  int len = 1;
  p[0] = t[0][n - 1];
  for (int r = n - 2; r >= 0; --r) {
    for (int k = len; k >= 1; --k) p[k] = p[k - 1] - z[r] * p[k];
    p[0] = -z[r] * p[0] + t[0][r];
    ++len;
  }
  for (int k = 0; k < n; ++k) out[k] = p[k];
}

inline const InterpMap& interp_map(int m) {
  static std::array<InterpMap, kMaxOrder + 1> maps;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int mm = 0; mm <= kMaxOrder; ++mm) {
      InterpMap& map = maps[mm];
      map.m = mm;
      const int n = coeff_count(mm);
      std::array<double, kMaxOrder + 1> l{}, r{};
      std::array<double, kMaxCoeffs> out{};
      for (int j = 0; j <= mm; ++j) {
        l.fill(0.0);
        r.fill(0.0);
        l[j] = 1.0;
        hermite_divided_differences(l, r, mm, out);
        for (int k = 0; k < n; ++k) map.left[k][j] = out[k];
        l[j] = 0.0;
        r[j] = 1.0;
        hermite_divided_differences(l, r, mm, out);
        for (int k = 0; k < n; ++k) map.right[k][j] = out[k];
      }
    }
  });
  if (m < 0 || m > kMaxOrder) throw std::out_of_range("interp_map: order out of range");
  return maps[m];
}

}  // namespace detail

/// Two-point Hermite interpolation on scaled data. `left` and `right` hold
/// dx^j f^(j) / j! at xi = -1/2 and xi = +1/2; `out` receives 2m+2 coefficients.
inline void interp_scaled(std::span<const double> left, std::span<const double> right, int m,
                          std::span<double> out) {
  const auto& map = detail::interp_map(m);
  const int n = coeff_count(m);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= m; ++j) s += map.left[k][j] * left[j] + map.right[k][j] * right[j];
    out[k] = s;
  }
}

/// Tensor-product interpolation on scaled corner data. Each corner block is
/// (m+1)x(m+1) with entry (i, j) at j * (m+1) + i; corners are ordered
/// bottom-left, bottom-right, top-left, top-right. `out` is (2m+2)^2.
inline void interp_scaled_2d(std::span<const double> bl, std::span<const double> br, std::span<const double> tl,
                             std::span<const double> tr, int m, std::span<double> out) {
  const int n = coeff_count(m);
  const int q = m + 1;
  // bottom[j][k], top[j][k]: xi-interpolant of the j-th eta-derivative on each edge
  std::array<double, (kMaxOrder + 1) * kMaxCoeffs> bottom{}, top{};
  for (int j = 0; j < q; ++j) {
    interp_scaled(bl.subspan(j * q, q), br.subspan(j * q, q), m, std::span<double>(bottom).subspan(j * n, n));
    interp_scaled(tl.subspan(j * q, q), tr.subspan(j * q, q), m, std::span<double>(top).subspan(j * n, n));
  }
  const auto& map = detail::interp_map(m);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int j = 0; j < q; ++j) s += map.left[l][j] * bottom[j * n + k] + map.right[l][j] * top[j * n + k];
      out[l * n + k] = s;
    }
  }
}

/// c_k = sum_{p<=k} a_p b_{k-p}, k < n.
inline void trunc_product(std::span<const double> a, std::span<const double> b, int n, std::span<double> out) {
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int p = 0; p <= k; ++p) s += a[p] * b[k - p];
    out[k] = s;
  }
}

/// 2D analogue of trunc_product on n x n tensors.
inline void trunc_product_2d(std::span<const double> a, std::span<const double> b, int n, std::span<double> out) {
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j <= l; ++j) {
        const double* arow = &a[j * n];
        const double* brow = &b[(l - j) * n];
        for (int i = 0; i <= k; ++i) s += arow[i] * brow[k - i];
      }
      out[l * n + k] = s;
    }
  }
}

inline double eval(std::span<const double> c, double xi) {
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * xi + c[k];
  return s;
}

inline double eval_2d(std::span<const double> c, int n, double xi, double eta) {
  double s = 0.0;
  for (int l = n; l-- > 0;) s = s * eta + eval(c.subspan(static_cast<std::size_t>(l * n), static_cast<std::size_t>(n)), xi);
  return s;
}

/// Coefficients of p(xi0 + s) in powers of s (Taylor shift).
inline std::vector<double> recenter(std::span<const double> c, double xi0) {
  std::vector<double> r(c.begin(), c.end());
  const std::size_t n = r.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) r[k - 1] += xi0 * r[k];
  return r;
}

// ---------------------------------------------------------------------------
// Checked value-level operations

inline CoeffTensor1D hermite_interp_1d(const DerivData& left, const DerivData& right, double dx) {
  if (left.m != right.m) throw std::invalid_argument("hermite_interp_1d: mismatched orders");
  if (!(dx > 0.0)) throw std::invalid_argument("hermite_interp_1d: dx must be positive");
  if (left.m > kMaxOrder) throw std::invalid_argument("hermite_interp_1d: order exceeds kMaxOrder");
  const int m = left.m;
  std::array<double, kMaxOrder + 1> ls{}, rs{};
  double scale = 1.0;
  for (int k = 0; k <= m; ++k) {
    ls[k] = left.values[k] * scale;
    rs[k] = right.values[k] * scale;
    scale *= dx / (k + 1);
  }
  CoeffTensor1D out(m);
  interp_scaled(ls, rs, m, out.span());
  return out;
}

/// corners = {bottom-left, bottom-right, top-left, top-right}
inline CoeffTensor2D hermite_interp_2d(const std::array<DerivData2D, 4>& corners, double dx, double dy) {
  const int m = corners[0].m;
  for (const auto& c : corners)
    if (c.m != m) throw std::invalid_argument("hermite_interp_2d: mismatched orders");
  if (!(dx > 0.0) || !(dy > 0.0)) throw std::invalid_argument("hermite_interp_2d: spacing must be positive");
  if (m > kMaxOrder) throw std::invalid_argument("hermite_interp_2d: order exceeds kMaxOrder");
  const int q = m + 1;
  std::array<std::vector<double>, 4> scaled;
  for (int c = 0; c < 4; ++c) {
    scaled[c].resize(static_cast<std::size_t>(q * q));
    for (int j = 0; j < q; ++j)
      for (int i = 0; i < q; ++i)
        scaled[c][j * q + i] = corners[c].at(i, j) * std::pow(dx, i) * std::pow(dy, j) / (factorial(i) * factorial(j));
  }
  CoeffTensor2D out(m);
  interp_scaled_2d(scaled[0], scaled[1], scaled[2], scaled[3], m, out.span());
  return out;
}

inline CoeffTensor1D trunc_product_1d(const CoeffTensor1D& a, const CoeffTensor1D& b) {
  if (a.m != b.m) throw std::invalid_argument("trunc_product_1d: mismatched orders");
  CoeffTensor1D out(a.m);
  trunc_product(a.span(), b.span(), a.size(), out.span());
  return out;
}

inline CoeffTensor2D trunc_product_2d(const CoeffTensor2D& a, const CoeffTensor2D& b) {
  if (a.m != b.m) throw std::invalid_argument("trunc_product_2d: mismatched orders");
  CoeffTensor2D out(a.m);
  trunc_product_2d(a.span(), b.span(), a.size(), out.span());
  return out;
}

/// Derivatives at the cell center: values[k] = k! c_k / dx^k.
inline DerivData coeffs_to_derivs(const CoeffTensor1D& c, double dx, int m_out) {
  if (m_out < 0 || m_out > c.m) throw std::invalid_argument("coeffs_to_derivs: m_out exceeds polynomial order");
  std::vector<double> v(static_cast<std::size_t>(m_out + 1));
  for (int k = 0; k <= m_out; ++k) v[k] = factorial(k) * c[k] / std::pow(dx, k);
  return DerivData(m_out, std::move(v));
}

/// Evaluation is valid for any xi; |xi| > 1/2 is extrapolation.
inline double eval_poly(const CoeffTensor1D& c, double xi) { return eval(c.span(), xi); }

inline double eval_poly(const CoeffTensor2D& c, double xi, double eta) { return eval_2d(c.span(), c.size(), xi, eta); }

}  // namespace hermite::poly
