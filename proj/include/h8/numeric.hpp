#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace h8 {

using ComplexValue = std::complex<double>;

inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr double kPi = std::numbers::pi;

/// Neumaier-compensated accumulator. Deterministic for a fixed term order.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Truncated Taylor expansion f(s0 + e) = sum_k c[k] e^k, k < N.
/// Used to carry exact derivatives through closed-form expressions.
template <std::size_t N>
struct Jet {
  std::array<ComplexValue, N> c{};

  static Jet constant(ComplexValue v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(ComplexValue s0) {
    Jet j;
    j.c[0] = s0;
    if constexpr (N > 1) j.c[1] = 1.0;
    return j;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k < N; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator*=(ComplexValue v) {
    for (auto& x : c) x *= v;
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator*(Jet a, ComplexValue v) { return a *= v; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; i + j < N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }

  /// k-th derivative at s0.
  ComplexValue derivative(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return c[k] * fact;
  }
};

/// Expansion of x^{-s} around s0 for real x > 0.
template <std::size_t N>
Jet<N> power_jet(double x, ComplexValue s0) {
  const double lx = std::log(x);
  Jet<N> j;
  ComplexValue v = std::exp(-s0 * lx);
  for (std::size_t k = 0; k < N; ++k) {
    j.c[k] = v;
    v *= -lx / static_cast<double>(k + 1);
  }
  return j;
}

/// Expansion of 1/(s - 1) around s0 != 1.
template <std::size_t N>
Jet<N> pole_jet(ComplexValue s0) {
  Jet<N> j;
  const ComplexValue w = 1.0 / (s0 - 1.0);
  ComplexValue v = w;
  for (std::size_t k = 0; k < N; ++k) {
    j.c[k] = v;
    v *= -w;
  }
  return j;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) noexcept {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// floor(sqrt(n)) without floating-point error.
inline std::uint64_t isqrt(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Smallest m with m^3 >= n.
inline std::uint64_t icbrt_ceil(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && (r - 1) * (r - 1) * (r - 1) >= n) --r;
  while (r * r * r < n) ++r;
  return r;
}

}  // namespace h8
