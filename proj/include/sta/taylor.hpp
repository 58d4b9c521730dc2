#pragma once

// Truncated Taylor series arithmetic ("jets"). A Taylor<N> holds the first
// N+1 coefficients of f(u0 + h) in powers of h. The closed-form protocol
// expressions are templated on their scalar type, so evaluating them on a
// Taylor variable yields all derivatives at once.

#include <array>
#include <cmath>
#include <cstddef>

namespace sta {

template <int N>
class Taylor {
  static_assert(N >= 0);

 public:
  static constexpr int order = N;

  constexpr Taylor() = default;
  constexpr Taylor(double value) { c_[0] = value; }  // NOLINT: implicit lift

  /// The independent variable u evaluated at u0.
  static constexpr Taylor variable(double u0) {
    Taylor r(u0);
    if constexpr (N > 0) r.c_[1] = 1.0;
    return r;
  }

  constexpr double value() const { return c_[0]; }
  constexpr double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  constexpr double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

  /// k-th derivative at u0 (k! times the k-th coefficient).
  constexpr double derivative(int k) const {
    double f = 1.0;
    for (int j = 2; j <= k; ++j) f *= j;
    return f * (*this)[k];
  }

  /// Series of d/du. The top coefficient is lost (set to zero).
  constexpr Taylor differentiate() const {
    Taylor r;
    for (int k = 0; k < N; ++k) r[k] = (k + 1) * (*this)[k + 1];
    return r;
  }

  constexpr Taylor operator-() const {
    Taylor r;
    for (int k = 0; k <= N; ++k) r[k] = -(*this)[k];
    return r;
  }

  constexpr Taylor& operator+=(const Taylor& o) {
    for (int k = 0; k <= N; ++k) (*this)[k] += o[k];
    return *this;
  }
  constexpr Taylor& operator-=(const Taylor& o) {
    for (int k = 0; k <= N; ++k) (*this)[k] -= o[k];
    return *this;
  }
  constexpr Taylor& operator*=(double s) {
    for (int k = 0; k <= N; ++k) (*this)[k] *= s;
    return *this;
  }
  constexpr Taylor& operator/=(double s) {
    for (int k = 0; k <= N; ++k) (*this)[k] /= s;
    return *this;
  }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

  friend constexpr Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend constexpr Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend constexpr Taylor operator+(Taylor a, double s) { a[0] += s; return a; }
  friend constexpr Taylor operator+(double s, Taylor a) { a[0] += s; return a; }
  friend constexpr Taylor operator-(Taylor a, double s) { a[0] -= s; return a; }
  friend constexpr Taylor operator-(double s, const Taylor& a) { return -a + s; }
  friend constexpr Taylor operator*(Taylor a, double s) { return a *= s; }
  friend constexpr Taylor operator*(double s, Taylor a) { return a *= s; }
  friend constexpr Taylor operator/(Taylor a, double s) { return a /= s; }

  friend constexpr Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int k = 0; k <= N; ++k) {
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) acc += a[j] * b[k - j];
      r[k] = acc;
    }
    return r;
  }

  friend constexpr Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor q;
    for (int k = 0; k <= N; ++k) {
      double acc = a[k];
      for (int j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
      q[k] = acc / b[0];
    }
    return q;
  }

  friend constexpr Taylor operator/(double s, const Taylor& b) { return Taylor(s) / b; }

 private:
  std::array<double, N + 1> c_{};
};

template <int N>
Taylor<N> log(const Taylor<N>& a) {
  Taylor<N> r(std::log(a[0]));
  for (int k = 1; k <= N; ++k) {
    double acc = a[k];
    for (int j = 1; j < k; ++j) acc -= (static_cast<double>(j) / k) * r[j] * a[k - j];
    r[k] = acc / a[0];
  }
  return r;
}

template <int N>
Taylor<N> sqrt(const Taylor<N>& a) {
  Taylor<N> r(std::sqrt(a[0]));
  for (int k = 1; k <= N; ++k) {
    double acc = a[k];
    for (int j = 1; j < k; ++j) acc -= r[j] * r[k - j];
    r[k] = acc / (2.0 * r[0]);
  }
  return r;
}

template <int N>
Taylor<N> atan(const Taylor<N>& a) {
  // d/du atan(a) = a' / (1 + a^2); integrate the quotient term by term.
  const Taylor<N> q = a.differentiate() / (1.0 + a * a);
  Taylor<N> r(std::atan(a[0]));
  for (int k = 1; k <= N; ++k) r[k] = q[k - 1] / k;
  return r;
}

template <int N>
Taylor<N> exp(const Taylor<N>& a) {
  Taylor<N> r(std::exp(a[0]));
  for (int k = 1; k <= N; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * a[j] * r[k - j];
    r[k] = acc / k;
  }
  return r;
}

/// Value part of a scalar or a jet.
inline double value_of(double x) { return x; }
template <int N>
double value_of(const Taylor<N>& x) {
  return x.value();
}

}  // namespace sta
