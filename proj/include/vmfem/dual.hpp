#pragma once

#include <array>
#include <cmath>

namespace vmfem {

/// Forward-mode dual number carrying N directional derivatives. Used to
/// differentiate the local residual kernels with respect to their local
/// coefficients.
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {} // NOLINT: implicit promotion from constants

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(double s) {
    v *= s;
    for (int i = 0; i < N; ++i) d[i] *= s;
    return *this;
  }
  Dual& operator+=(double s) {
    v += s;
    return *this;
  }
  /// this += s * o, the hot path of residual scatter.
  void add_scaled(double s, const Dual& o) {
    v += s * o.v;
    for (int i = 0; i < N; ++i) d[i] += s * o.d[i];
  }
};

template <int N>
Dual<N> operator-(const Dual<N>& a) {
  Dual<N> r;
  r.v = -a.v;
  for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
  return r;
}

template <int N>
Dual<N> operator+(Dual<N> a, const Dual<N>& b) {
  return a += b;
}
template <int N>
Dual<N> operator-(Dual<N> a, const Dual<N>& b) {
  return a -= b;
}
template <int N>
Dual<N> operator+(Dual<N> a, double b) {
  return a += b;
}
template <int N>
Dual<N> operator+(double a, Dual<N> b) {
  return b += a;
}
template <int N>
Dual<N> operator-(Dual<N> a, double b) {
  a.v -= b;
  return a;
}
template <int N>
Dual<N> operator-(double a, const Dual<N>& b) {
  Dual<N> r = -b;
  r.v += a;
  return r;
}

template <int N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r;
  r.v = a.v * b.v;
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
template <int N>
Dual<N> operator*(Dual<N> a, double s) {
  return a *= s;
}
template <int N>
Dual<N> operator*(double s, Dual<N> a) {
  return a *= s;
}

template <int N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r;
  const double inv = 1.0 / b.v;
  r.v = a.v * inv;
  for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
  return r;
}
template <int N>
Dual<N> operator/(Dual<N> a, double s) {
  return a *= (1.0 / s);
}
template <int N>
Dual<N> operator/(double s, const Dual<N>& b) {
  return Dual<N>(s) / b;
}

template <int N>
Dual<N> sqrt(const Dual<N>& a) {
  Dual<N> r;
  r.v = std::sqrt(a.v);
  const double g = r.v > 0.0 ? 0.5 / r.v : 0.0;
  for (int i = 0; i < N; ++i) r.d[i] = g * a.d[i];
  return r;
}

/// |a| with derivative sign(a) (zero at the kink).
template <int N>
Dual<N> abs(const Dual<N>& a) {
  if (a.v > 0.0) return a;
  if (a.v < 0.0) return -a;
  return Dual<N>(0.0);
}

template <int N>
Dual<N> pow(const Dual<N>& a, double p) {
  Dual<N> r;
  r.v = std::pow(a.v, p);
  const double g = a.v != 0.0 ? p * std::pow(a.v, p - 1.0) : 0.0;
  for (int i = 0; i < N; ++i) r.d[i] = g * a.d[i];
  return r;
}

inline double value(double x) { return x; }
template <int N>
double value(const Dual<N>& x) {
  return x.v;
}

/// Kernels call these unqualified so the same code serves double and Dual.
using std::abs;
using std::pow;
using std::sqrt;

} // namespace vmfem
