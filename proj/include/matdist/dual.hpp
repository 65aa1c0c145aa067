#pragma once

// Forward-mode dual numbers with a fixed-width gradient block: one pass
// through a generic evaluation yields the value and N directional
// derivatives.

#include <array>
#include <cmath>
#include <cstddef>

namespace matdist {

template <int N>
struct Dual {
  double val = 0.0;
  std::array<double, N> grad{};  // zero-initialized

  constexpr Dual() = default;
  constexpr Dual(double v) : val(v) {}  // NOLINT: implicit constant lift

  static constexpr Dual seeded(double v, int slot) {
    Dual d(v);
    d.grad[static_cast<std::size_t>(slot)] = 1.0;
    return d;
  }

  Dual& operator+=(const Dual& o) {
    val += o.val;
    for (int i = 0; i < N; ++i) grad[i] += o.grad[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    val -= o.val;
    for (int i = 0; i < N; ++i) grad[i] -= o.grad[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < N; ++i) grad[i] = grad[i] * o.val + val * o.grad[i];
    val *= o.val;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.val;
    for (int i = 0; i < N; ++i) grad[i] = (grad[i] - val * inv * o.grad[i]) * inv;
    val *= inv;
    return *this;
  }

  Dual operator-() const {
    Dual r(-val);
    for (int i = 0; i < N; ++i) r.grad[i] = -grad[i];
    return r;
  }
};

template <int N>
inline Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N>
inline Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N>
inline Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <int N>
inline Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }

template <int N>
inline Dual<N> operator+(Dual<N> a, double b) { a.val += b; return a; }
template <int N>
inline Dual<N> operator+(double a, Dual<N> b) { b.val += a; return b; }
template <int N>
inline Dual<N> operator-(Dual<N> a, double b) { a.val -= b; return a; }
template <int N>
inline Dual<N> operator-(double a, const Dual<N>& b) { return Dual<N>(a) - b; }
template <int N>
inline Dual<N> operator*(Dual<N> a, double b) {
  a.val *= b;
  for (int i = 0; i < N; ++i) a.grad[i] *= b;
  return a;
}
template <int N>
inline Dual<N> operator*(double a, Dual<N> b) { return b * a; }
template <int N>
inline Dual<N> operator/(Dual<N> a, double b) { return a * (1.0 / b); }
template <int N>
inline Dual<N> operator/(double a, const Dual<N>& b) { return Dual<N>(a) / b; }

template <int N>
inline bool operator<(const Dual<N>& a, const Dual<N>& b) { return a.val < b.val; }
template <int N>
inline bool operator>(const Dual<N>& a, const Dual<N>& b) { return a.val > b.val; }

template <int N>
inline Dual<N> sqrt(const Dual<N>& a) {
  Dual<N> r(std::sqrt(a.val));
  const double d = 0.5 / r.val;
  for (int i = 0; i < N; ++i) r.grad[i] = d * a.grad[i];
  return r;
}
template <int N>
inline Dual<N> exp(const Dual<N>& a) {
  Dual<N> r(std::exp(a.val));
  for (int i = 0; i < N; ++i) r.grad[i] = r.val * a.grad[i];
  return r;
}
template <int N>
inline Dual<N> log(const Dual<N>& a) {
  Dual<N> r(std::log(a.val));
  const double d = 1.0 / a.val;
  for (int i = 0; i < N; ++i) r.grad[i] = d * a.grad[i];
  return r;
}
template <int N>
inline Dual<N> sin(const Dual<N>& a) {
  Dual<N> r(std::sin(a.val));
  const double d = std::cos(a.val);
  for (int i = 0; i < N; ++i) r.grad[i] = d * a.grad[i];
  return r;
}
template <int N>
inline Dual<N> cos(const Dual<N>& a) {
  Dual<N> r(std::cos(a.val));
  const double d = -std::sin(a.val);
  for (int i = 0; i < N; ++i) r.grad[i] = d * a.grad[i];
  return r;
}
template <int N>
inline Dual<N> pow(const Dual<N>& a, int k) {
  Dual<N> r(1.0);
  Dual<N> base = a;
  int e = k < 0 ? -k : k;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return k < 0 ? 1.0 / r : r;
}
template <int N>
inline Dual<N> abs(const Dual<N>& a) { return a.val < 0.0 ? -a : a; }

/// The plain value of a scalar, dual or not.
inline double scalar_value(double x) { return x; }
template <int N>
inline double scalar_value(const Dual<N>& x) { return x.val; }

/// Gradient slots cover t (0), x (1..3) and the nine F entries (4..12),
/// row-major.
inline constexpr int kJetSlots = 13;
using Dual13 = Dual<kJetSlots>;

}  // namespace matdist
