#pragma once

#include <Eigen/Dense>

namespace vmfem {

/// Minimal 2-vector and 2x2 tensor over an arbitrary scalar (double or Dual).
template <class S>
struct Vec2 {
  S x{}, y{};

  S& operator[](int i) { return i == 0 ? x : y; }
  const S& operator[](int i) const { return i == 0 ? x : y; }
};

/// Row-major: m[i][j] = T_ij. For a velocity gradient, row i is the gradient
/// of component i.
template <class S>
struct Mat2 {
  S m[2][2]{};

  S& operator()(int i, int j) { return m[i][j]; }
  const S& operator()(int i, int j) const { return m[i][j]; }

  static Mat2 identity(const S& s) {
    Mat2 r;
    r(0, 0) = s;
    r(1, 1) = s;
    return r;
  }
};

template <class S>
Vec2<S> operator+(const Vec2<S>& a, const Vec2<S>& b) {
  return {a.x + b.x, a.y + b.y};
}
template <class S>
Vec2<S> operator-(const Vec2<S>& a, const Vec2<S>& b) {
  return {a.x - b.x, a.y - b.y};
}
template <class S, class T>
Vec2<S> operator*(const T& s, const Vec2<S>& a) {
  return {s * a.x, s * a.y};
}
template <class S>
Vec2<S> operator*(const Vec2<S>& a, const S& s) {
  return {s * a.x, s * a.y};
}

template <class S>
S dot(const Vec2<S>& a, const Vec2<S>& b) {
  return a.x * b.x + a.y * b.y;
}
template <class S>
S dot(const Vec2<S>& a, const Eigen::Vector2d& n) {
  return a.x * n.x() + a.y * n.y();
}

template <class S>
Mat2<S> operator+(const Mat2<S>& a, const Mat2<S>& b) {
  Mat2<S> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}
template <class S>
Mat2<S> operator-(const Mat2<S>& a, const Mat2<S>& b) {
  Mat2<S> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}
template <class S, class T>
Mat2<S> operator*(const T& s, const Mat2<S>& a) {
  Mat2<S> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = s * a(i, j);
  return r;
}

template <class S>
Mat2<S> transpose(const Mat2<S>& a) {
  Mat2<S> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(j, i);
  return r;
}
template <class S>
S trace(const Mat2<S>& a) {
  return a(0, 0) + a(1, 1);
}
/// A : B = sum_ij A_ij B_ij
template <class S>
S contract(const Mat2<S>& a, const Mat2<S>& b) {
  return a(0, 0) * b(0, 0) + a(0, 1) * b(0, 1) + a(1, 0) * b(1, 0) + a(1, 1) * b(1, 1);
}
template <class S>
Mat2<S> outer(const Vec2<S>& a, const Vec2<S>& b) {
  Mat2<S> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a[i] * b[j];
  return r;
}
template <class S>
Mat2<S> outer(const Vec2<S>& a, const Eigen::Vector2d& n) {
  Mat2<S> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a[i] * n(j);
  return r;
}
/// T n
template <class S>
Vec2<S> apply(const Mat2<S>& t, const Eigen::Vector2d& n) {
  return {t(0, 0) * n.x() + t(0, 1) * n.y(), t(1, 0) * n.x() + t(1, 1) * n.y()};
}

} // namespace vmfem
