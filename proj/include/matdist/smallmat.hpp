#pragma once

// Tiny fixed-size vector/matrix templates over a generic scalar, so a
// law written once evaluates with plain doubles or with dual numbers.
// Heavy linear algebra (SVD, QR, solves) stays on Eigen doubles.

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "matdist/dual.hpp"

namespace matdist {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

template <class S>
struct Vec3T {
  std::array<S, 3> e{};
  S& operator[](int i) { return e[static_cast<std::size_t>(i)]; }
  const S& operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
};

template <class S>
struct Mat3T {
  // Row-major storage; (i, j) = e[3*i + j].
  std::array<S, 9> e{};
  S& operator()(int i, int j) { return e[static_cast<std::size_t>(3 * i + j)]; }
  const S& operator()(int i, int j) const { return e[static_cast<std::size_t>(3 * i + j)]; }

  static Mat3T identity() {
    Mat3T m;
    m(0, 0) = S(1.0);
    m(1, 1) = S(1.0);
    m(2, 2) = S(1.0);
    return m;
  }
};

template <class S>
inline Mat3T<S> operator*(const Mat3T<S>& a, const Mat3T<S>& b) {
  Mat3T<S> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      S s = a(i, 0) * b(0, j);
      s += a(i, 1) * b(1, j);
      s += a(i, 2) * b(2, j);
      c(i, j) = s;
    }
  return c;
}

template <class S>
inline Mat3T<S> operator+(const Mat3T<S>& a, const Mat3T<S>& b) {
  Mat3T<S> c;
  for (int k = 0; k < 9; ++k) c.e[k] = a.e[k] + b.e[k];
  return c;
}

template <class S, class T>
inline Mat3T<S> operator*(const T& s, const Mat3T<S>& a) {
  Mat3T<S> c;
  for (int k = 0; k < 9; ++k) c.e[k] = s * a.e[k];
  return c;
}

template <class S>
inline Mat3T<S> transpose(const Mat3T<S>& a) {
  Mat3T<S> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = a(j, i);
  return c;
}

template <class S>
inline S trace(const Mat3T<S>& a) {
  return a(0, 0) + a(1, 1) + a(2, 2);
}

/// Sum of squared entries, tr(AᵀA).
template <class S>
inline S frobenius_sq(const Mat3T<S>& a) {
  S s = a.e[0] * a.e[0];
  for (int k = 1; k < 9; ++k) s += a.e[k] * a.e[k];
  return s;
}

template <class S>
inline S det3(const Mat3T<S>& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

/// Matrix exponential by scaling-and-squaring of a Taylor series.
/// Scaling is picked from the value part so duals follow the same branch.
template <class S>
inline Mat3T<S> matexp(const Mat3T<S>& a) {
  double amax = 0.0;
  for (int k = 0; k < 9; ++k) amax = std::max(amax, std::abs(scalar_value(a.e[k])));
  int squarings = 0;
  double scale = 1.0;
  while (amax * scale > 0.25 && squarings < 30) {
    scale *= 0.5;
    ++squarings;
  }
  const Mat3T<S> b = scale * a;
  Mat3T<S> result = Mat3T<S>::identity();
  Mat3T<S> term = Mat3T<S>::identity();
  for (int k = 1; k <= 14; ++k) {
    term = (1.0 / static_cast<double>(k)) * (term * b);
    result = result + term;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

inline Mat3T<double> from_eigen(const Mat3& m) {
  Mat3T<double> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(i, j);
  return r;
}

inline Mat3 to_eigen(const Mat3T<double>& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(i, j);
  return r;
}

}  // namespace matdist
