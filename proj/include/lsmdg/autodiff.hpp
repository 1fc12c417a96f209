// Forward-mode dual numbers used to linearize the flux models.
//
// Dual<T, N> carries a value and N directional derivatives. Nesting
// Dual<Dual<double, N>, 1> gives the derivative along the reference
// coordinate of a quantity whose value and derivative both carry
// sensitivities to N local variables, which is what the cell residual
// Jacobian needs.
#pragma once

#include <array>
#include <cmath>
#include <type_traits>

namespace lsmdg::ad {

template <class T, int N>
struct Dual {
  using value_type = T;
  static constexpr int directions = N;

  T val{};
  std::array<T, N> grad{};

  constexpr Dual() = default;
  constexpr Dual(double v) : val(v) {}  // NOLINT(google-explicit-constructor)
  template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  constexpr Dual(const T& v) : val(v) {}  // NOLINT(google-explicit-constructor)

  static Dual variable(const T& v, int direction) {
    Dual d(v);
    d.grad[direction] = T(1.0);
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
    const T inv = T(1.0) / o.val;
    val *= inv;
    for (int i = 0; i < N; ++i) grad[i] = (grad[i] - val * o.grad[i]) * inv;
    return *this;
  }
  Dual& operator*=(double s) {
    val *= s;
    for (auto& g : grad) g *= s;
    return *this;
  }
};

template <class T, int N>
Dual<T, N> operator-(Dual<T, N> a) {
  a.val = -a.val;
  for (auto& g : a.grad) g = -g;
  return a;
}

template <class T, int N>
Dual<T, N> operator+(Dual<T, N> a, const Dual<T, N>& b) { return a += b; }
template <class T, int N>
Dual<T, N> operator-(Dual<T, N> a, const Dual<T, N>& b) { return a -= b; }
template <class T, int N>
Dual<T, N> operator*(Dual<T, N> a, const Dual<T, N>& b) { return a *= b; }
template <class T, int N>
Dual<T, N> operator/(Dual<T, N> a, const Dual<T, N>& b) { return a /= b; }

template <class T, int N>
Dual<T, N> operator+(Dual<T, N> a, double b) { a.val += b; return a; }
template <class T, int N>
Dual<T, N> operator+(double b, Dual<T, N> a) { a.val += b; return a; }
template <class T, int N>
Dual<T, N> operator-(Dual<T, N> a, double b) { a.val -= b; return a; }
template <class T, int N>
Dual<T, N> operator-(double b, const Dual<T, N>& a) { return -a + b; }
template <class T, int N>
Dual<T, N> operator*(Dual<T, N> a, double b) { return a *= b; }
template <class T, int N>
Dual<T, N> operator*(double b, Dual<T, N> a) { return a *= b; }
template <class T, int N>
Dual<T, N> operator/(Dual<T, N> a, double b) { return a *= (1.0 / b); }
template <class T, int N>
Dual<T, N> operator/(double b, const Dual<T, N>& a) { return Dual<T, N>(b) / a; }

/// Innermost double value of a possibly nested dual.
inline double value_of(double x) { return x; }
template <class T, int N>
double value_of(const Dual<T, N>& x) { return value_of(x.val); }

}  // namespace lsmdg::ad
