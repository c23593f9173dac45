#pragma once

// Truncated Taylor arithmetic ("jets") used to turn closed-form space-time
// closures into scaled Taylor coefficients about a point.
//
// A Jet<T, Cap> holds the first n coefficients of a univariate power series
// whose coefficients are of type T. Nesting gives tensor-truncated
// multivariate series: Jet<Jet<double, 16>, 16> is truncated separately in
// each variable, which is exactly the (2m+2)^2 coefficient layout of a 2D
// Hermite cell. The innermost level is usually a Jet<double, 2> carrying a
// value and its first time derivative.
//
// `deg` tracks how many leading coefficients may be nonzero so that
// products of functions of a single variable stay cheap.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace hermite {

template <class T, int Cap>
struct Jet;

namespace detail {

template <class T>
struct is_jet : std::false_type {};
template <class T, int Cap>
struct is_jet<Jet<T, Cap>> : std::true_type {};

inline void acc_product(double& acc, double x, double y) { acc += x * y; }

template <class T, int Cap>
void acc_product(Jet<T, Cap>& acc, const Jet<T, Cap>& x, const Jet<T, Cap>& y);

inline void acc_scaled_product(double& acc, double x, double y, double s) { acc += s * x * y; }

template <class T, int Cap>
void acc_scaled_product(Jet<T, Cap>& acc, const Jet<T, Cap>& x, const Jet<T, Cap>& y, double s);

}  // namespace detail

template <class T, int Cap>
struct Jet {
  static_assert(Cap >= 1);
  using value_type = T;
  static constexpr int capacity = Cap;

  std::array<T, Cap> c;
  int n = 0;    // truncation length, 0 for a broadcast constant
  int deg = 1;  // c[k] is meaningful for k < deg and zero beyond

  Jet() { c[0] = T(0.0); }
  Jet(double v) { c[0] = T(v); }  // NOLINT(google-explicit-constructor)
  template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  Jet(const T& v) {  // NOLINT(google-explicit-constructor)
    c[0] = v;
  }

  /// Series a + b*s truncated to length n.
  static Jet variable(const T& a, const T& b, int n) {
    if (n < 1 || n > Cap) throw std::out_of_range("Jet::variable: bad truncation length");
    Jet r;
    r.n = n;
    r.c[0] = a;
    if (n > 1) {
      r.c[1] = b;
      r.deg = 2;
    }
    return r;
  }

  T get(int k) const { return k < deg ? c[k] : T(0.0); }

  int trunc() const { return n; }

  Jet operator-() const {
    Jet r = *this;
    for (int k = 0; k < deg; ++k) r.c[k] = -c[k];
    return r;
  }

  Jet& operator*=(double s) {
    for (int k = 0; k < deg; ++k) c[k] = c[k] * s;
    return *this;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.n = std::max(a.n, b.n);
    r.deg = std::max(a.deg, b.deg);
    for (int k = 0; k < r.deg; ++k) {
      if (k < a.deg && k < b.deg)
        r.c[k] = a.c[k] + b.c[k];
      else if (k < a.deg)
        r.c[k] = a.c[k];
      else
        r.c[k] = b.c[k];
    }
    return r;
  }

  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.n = std::max(a.n, b.n);
    r.deg = r.n > 0 ? std::min(a.deg + b.deg - 1, r.n) : 1;
    for (int k = 0; k < r.deg; ++k) {
      T s(0.0);
      const int lo = std::max(0, k - b.deg + 1);
      const int hi = std::min(k, a.deg - 1);
      for (int i = lo; i <= hi; ++i) detail::acc_product(s, a.c[i], b.c[k - i]);
      r.c[k] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    r.n = std::max(a.n, b.n);
    if (b.deg == 1) {
      r.deg = a.deg;
      for (int k = 0; k < r.deg; ++k) r.c[k] = a.c[k] / b.c[0];
      return r;
    }
    r.deg = r.n;
    for (int k = 0; k < r.deg; ++k) {
      T s = a.get(k);
      const int hi = std::min(k, b.deg - 1);
      for (int j = 1; j <= hi; ++j) detail::acc_product(s, -b.c[j], r.c[k - j]);
      r.c[k] = s / b.c[0];
    }
    return r;
  }

  friend Jet operator+(const Jet& a, double s) {
    Jet r = a;
    r.c[0] = r.c[0] + s;
    return r;
  }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, double s) {
    Jet r = a;
    r *= s;
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
  friend Jet operator/(double s, const Jet& a) { return Jet(s) / a; }
};

namespace detail {

template <class T, int Cap>
void acc_product(Jet<T, Cap>& acc, const Jet<T, Cap>& x, const Jet<T, Cap>& y) {
  const int n = std::max({acc.n, x.n, y.n});
  const int d = n > 0 ? std::min(x.deg + y.deg - 1, n) : 1;
  for (int k = acc.deg; k < d; ++k) acc.c[k] = T(0.0);
  acc.deg = std::max(acc.deg, d);
  acc.n = n;
  for (int k = 0; k < d; ++k) {
    const int lo = std::max(0, k - y.deg + 1);
    const int hi = std::min(k, x.deg - 1);
    for (int i = lo; i <= hi; ++i) acc_product(acc.c[k], x.c[i], y.c[k - i]);
  }
}

template <class T, int Cap>
void acc_scaled_product(Jet<T, Cap>& acc, const Jet<T, Cap>& x, const Jet<T, Cap>& y, double s) {
  const int n = std::max({acc.n, x.n, y.n});
  const int d = n > 0 ? std::min(x.deg + y.deg - 1, n) : 1;
  for (int k = acc.deg; k < d; ++k) acc.c[k] = T(0.0);
  acc.deg = std::max(acc.deg, d);
  acc.n = n;
  for (int k = 0; k < d; ++k) {
    const int lo = std::max(0, k - y.deg + 1);
    const int hi = std::min(k, x.deg - 1);
    for (int i = lo; i <= hi; ++i) acc_scaled_product(acc.c[k], x.c[i], y.c[k - i], s);
  }
}

}  // namespace detail

inline double value(double x) { return x; }

template <class T, int Cap>
double value(const Jet<T, Cap>& x) {
  return value(x.c[0]);
}

template <class T, int Cap>
Jet<T, Cap> exp(const Jet<T, Cap>& u) {
  using std::exp;
  Jet<T, Cap> r;
  r.n = u.n;
  r.c[0] = exp(u.c[0]);
  if (u.deg == 1) return r;
  r.deg = u.n;
  for (int k = 1; k < r.deg; ++k) {
    T s(0.0);
    const int hi = std::min(k, u.deg - 1);
    for (int j = 1; j <= hi; ++j) detail::acc_scaled_product(s, u.c[j], r.c[k - j], double(j));
    r.c[k] = s / double(k);
  }
  return r;
}

template <class T, int Cap>
void sincos(const Jet<T, Cap>& u, Jet<T, Cap>& sn, Jet<T, Cap>& cs) {
  using std::cos;
  using std::sin;
  sn = Jet<T, Cap>();
  cs = Jet<T, Cap>();
  sn.n = cs.n = u.n;
  sn.c[0] = sin(u.c[0]);
  cs.c[0] = cos(u.c[0]);
  if (u.deg == 1) return;
  sn.deg = cs.deg = u.n;
  for (int k = 1; k < u.n; ++k) {
    T s(0.0), c(0.0);
    const int hi = std::min(k, u.deg - 1);
    for (int j = 1; j <= hi; ++j) {
      detail::acc_scaled_product(s, u.c[j], cs.c[k - j], double(j));
      detail::acc_scaled_product(c, u.c[j], sn.c[k - j], -double(j));
    }
    sn.c[k] = s / double(k);
    cs.c[k] = c / double(k);
  }
}

template <class T, int Cap>
Jet<T, Cap> sin(const Jet<T, Cap>& u) {
  Jet<T, Cap> s, c;
  sincos(u, s, c);
  return s;
}

template <class T, int Cap>
Jet<T, Cap> cos(const Jet<T, Cap>& u) {
  Jet<T, Cap> s, c;
  sincos(u, s, c);
  return c;
}

inline double sech(double x) { return 1.0 / std::cosh(x); }

template <class T, int Cap>
Jet<T, Cap> sech(const Jet<T, Cap>& u) {
  return 2.0 / (exp(u) + exp(-u));
}

}  // namespace hermite
