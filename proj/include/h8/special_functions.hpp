#pragma once

#include <span>

#include "h8/identity_report.hpp"
#include "h8/numeric.hpp"

namespace h8 {

struct EvalConfig {
  int euler_maclaurin_cutoff = 50;
  int em_correction_terms = 8;
  double derivative_step = 1e-5;
  long series_terms = 1'000'000;
  double tolerance_default = 1e-10;

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

/// log Gamma(s) on the branch that is real for s > 0 and continuous in
/// Re(s) > 0. Left of 1/2 the reflection formula is used, so the imaginary
/// part there is only defined modulo 2*pi.
ComplexValue log_gamma(ComplexValue s);

/// Gamma'/Gamma(s). Throws PoleError at s = 0, -1, -2, ...
ComplexValue gamma_logderiv(ComplexValue s, const EvalConfig& cfg = {});

/// order-th derivative (order <= 3) of the Hurwitz zeta function zeta(s, a),
/// a in (0, 1], by Euler-Maclaurin summation. Derivatives are carried exactly
/// through the summation formula with truncated Taylor arithmetic.
ComplexValue zeta_family(ComplexValue s, double a, int order, const EvalConfig& cfg = {});

inline ComplexValue riemann_zeta(ComplexValue s, const EvalConfig& cfg = {}) {
  return zeta_family(s, 1.0, 0, cfg);
}

struct ChiFactor {
  ComplexValue a_value;
  /// (1/2)psi(s/2) + (1/2)psi((1-s)/2) + log(pi), exactly in the printed form.
  ComplexValue a_logderiv_closed;
};

/// A(s) = pi^{s-1/2} Gamma((1-s)/2) / Gamma(s/2) together with the printed
/// closed form of its log-derivative.
ChiFactor chi_factor(ComplexValue s, const EvalConfig& cfg = {});

/// log A(s); the imaginary part is defined modulo 2*pi.
ComplexValue log_chi_factor(ComplexValue s);

/// Derivative of a log-valued function by 4-point central differences with
/// one Richardson level. Jumps of the imaginary part by multiples of 2*pi
/// between stencil points are unwrapped.
template <class F>
ComplexValue log_derivative_oracle(F&& log_f, ComplexValue s, double step) {
  auto unwrap = [](ComplexValue d) {
    const double two_pi = 2.0 * kPi;
    return ComplexValue(d.real(), d.imag() - two_pi * std::round(d.imag() / two_pi));
  };
  auto four_point = [&](double h) {
    const ComplexValue f0 = log_f(s);
    const ComplexValue p1 = unwrap(log_f(s + h) - f0);
    const ComplexValue m1 = unwrap(log_f(s - h) - f0);
    const ComplexValue p2 = unwrap(log_f(s + 2.0 * h) - f0);
    const ComplexValue m2 = unwrap(log_f(s - 2.0 * h) - f0);
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  };
  const ComplexValue coarse = four_point(step);
  const ComplexValue fine = four_point(step / 2.0);
  return (16.0 * fine - coarse) / 15.0;
}

/// d/ds log A(s) from finite differences of log A (step 1e-5 * max(1, |s|)
/// scaled by cfg.derivative_step / 1e-5).
ComplexValue a_logderiv_oracle(ComplexValue s, const EvalConfig& cfg = {});

/// Probes FE_ZETA, LOGDERIV_ZETA or AFORM_CLOSED_VS_ORACLE at each point.
/// Points within 0.05 of a pole or zero of a constituent are skipped and
/// flagged. Other identity ids are served by their own modules and raise
/// DomainError here.
IdentityReport identity_probe(IdentityId id, std::span<const ComplexValue> sample_points,
                              const EvalConfig& cfg = {});

/// Default tolerance attached to each identity's report.
double default_tolerance(IdentityId id);

struct SymmetryProbeInput {
  double alpha = 0.0;
  double gamma_ord = 14.134725;
  int delta = 0;
  long terms = 1'000'000;
};

struct SymmetryProbeResult {
  double series_value;
  double digamma_value;
  double difference;
};

/// Partial sum of the printed off-line symmetry series against the imaginary
/// part of the four-digamma combination it is meant to equal.
SymmetryProbeResult symmetry_series_probe(const SymmetryProbeInput& input);

}  // namespace h8
