#include "h8/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "h8/error.hpp"

namespace h8 {

namespace {

// B_2, B_4, ..., B_24
constexpr std::array<double, 12> kBernoulli = {
    1.0 / 6.0,           -1.0 / 30.0,        1.0 / 42.0,          -1.0 / 30.0,
    5.0 / 66.0,          -691.0 / 2730.0,    7.0 / 6.0,           -3617.0 / 510.0,
    43867.0 / 798.0,     -174611.0 / 330.0,  854513.0 / 138.0,    -236364091.0 / 2730.0,
};

constexpr double kAsymptoticRadius = 15.0;

bool is_nonpositive_integer(ComplexValue z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// Distance from z to the nearest pole of Gamma (0, -1, -2, ...).
double gamma_pole_distance(ComplexValue z) {
  const double k = std::min(0.0, std::round(z.real()));
  return std::abs(z - ComplexValue(k, 0.0));
}

// pi * cot(pi z), stable for large |Im z|.
ComplexValue pi_cot_pi(ComplexValue z) {
  const ComplexValue w = kPi * z;
  if (w.imag() < 0.0) return std::conj(pi_cot_pi(std::conj(z)));
  const ComplexValue e = std::exp(ComplexValue(0.0, 2.0) * w);
  return kPi * ComplexValue(0.0, 1.0) * (e + 1.0) / (e - 1.0);
}

// log sin(pi z), any branch; stable for large |Im z|.
ComplexValue log_sin_pi(ComplexValue z) {
  const ComplexValue w = kPi * z;
  if (w.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  const ComplexValue i(0.0, 1.0);
  const ComplexValue e = std::exp(2.0 * i * w);
  return -i * w + std::log((e - 1.0) / (2.0 * i));
}

ComplexValue digamma_impl(ComplexValue z) {
  if (is_nonpositive_integer(z)) {
    throw PoleError("digamma pole at " + std::to_string(z.real()));
  }
  if (z.real() < 0.5) return digamma_impl(1.0 - z) - pi_cot_pi(z);
  ComplexValue shift(0.0, 0.0);
  while (std::abs(z) < kAsymptoticRadius) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const ComplexValue inv2 = 1.0 / (z * z);
  ComplexValue zpow = inv2;
  ComplexValue series(0.0, 0.0);
  for (int k = 1; k <= 8; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k) * zpow;
    zpow *= inv2;
  }
  return shift + std::log(z) - 0.5 / z - series;
}

template <std::size_t N>
Jet<N> hurwitz_jet(ComplexValue s, double a, const EvalConfig& cfg) {
  const int cutoff = std::max(cfg.euler_maclaurin_cutoff,
                              static_cast<int>(std::ceil(10.0 * std::abs(s.imag()))));
  Jet<N> direct;
  for (int n = 0; n < cutoff; ++n) direct += power_jet<N>(n + a, s);

  const double x = cutoff + a;
  const Jet<N> p = power_jet<N>(x, s);
  Jet<N> total = direct + (p * pole_jet<N>(s)) * ComplexValue(x, 0.0) + p * ComplexValue(0.5, 0.0);

  Jet<N> rising = Jet<N>::variable(s);
  double factorial = 2.0;  // (2k)!
  double xpow = 1.0 / x;   // x^{-(2k-1)}
  for (int k = 1; k <= cfg.em_correction_terms; ++k) {
    const double coeff = kBernoulli[k - 1] / factorial * xpow;
    total += (rising * p) * ComplexValue(coeff, 0.0);
    rising = rising * Jet<N>::variable(s + 2.0 * k - 1.0);
    rising = rising * Jet<N>::variable(s + 2.0 * k);
    factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    xpow /= x * x;
  }
  return total;
}

}  // namespace

void EvalConfig::validate() const {
  if (euler_maclaurin_cutoff < 10) throw DomainError("euler_maclaurin_cutoff must be >= 10");
  if (em_correction_terms < 2 || em_correction_terms > 12) {
    throw DomainError("em_correction_terms must lie in [2, 12]");
  }
  if (!(derivative_step > 0.0 && derivative_step <= 1e-2)) {
    throw DomainError("derivative_step must lie in (0, 1e-2]");
  }
  if (series_terms <= 0) throw DomainError("series_terms must be positive");
  if (!(tolerance_default > 0.0)) throw DomainError("tolerance_default must be positive");
}

ComplexValue log_gamma(ComplexValue z) {
  if (is_nonpositive_integer(z)) {
    throw PoleError("log-gamma pole at " + std::to_string(z.real()));
  }
  if (z.real() < 0.5) {
    return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  ComplexValue shift(0.0, 0.0);
  while (std::abs(z) < kAsymptoticRadius) {
    shift -= std::log(z);
    z += 1.0;
  }
  const ComplexValue inv = 1.0 / z;
  const ComplexValue inv2 = inv * inv;
  ComplexValue zpow = inv;
  ComplexValue series(0.0, 0.0);
  for (int k = 1; k <= 8; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * zpow;
    zpow *= inv2;
  }
  return shift + (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
}

ComplexValue gamma_logderiv(ComplexValue s, const EvalConfig&) { return digamma_impl(s); }

ComplexValue zeta_family(ComplexValue s, double a, int order, const EvalConfig& cfg) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("Hurwitz parameter must lie in (0, 1]");
  if (order < 0 || order > 3) throw DomainError("derivative order must lie in [0, 3]");
  if (s == ComplexValue(1.0, 0.0)) throw PoleError("zeta pole at s = 1");
  switch (order) {
    case 0:
      return hurwitz_jet<1>(s, a, cfg).c[0];
    case 1:
      return hurwitz_jet<2>(s, a, cfg).derivative(1);
    case 2:
      return hurwitz_jet<3>(s, a, cfg).derivative(2);
    default:
      return hurwitz_jet<4>(s, a, cfg).derivative(3);
  }
}

ComplexValue log_chi_factor(ComplexValue s) {
  return (s - 0.5) * std::log(kPi) + log_gamma((1.0 - s) / 2.0) - log_gamma(s / 2.0);
}

ChiFactor chi_factor(ComplexValue s, const EvalConfig& cfg) {
  if (is_nonpositive_integer(s / 2.0) || is_nonpositive_integer((1.0 - s) / 2.0)) {
    throw PoleError("A(s) undefined at s = " + std::to_string(s.real()));
  }
  ChiFactor out;
  out.a_value = std::exp(log_chi_factor(s));
  out.a_logderiv_closed = 0.5 * gamma_logderiv(s / 2.0, cfg) +
                          0.5 * gamma_logderiv((1.0 - s) / 2.0, cfg) + std::log(kPi);
  return out;
}

ComplexValue a_logderiv_oracle(ComplexValue s, const EvalConfig& cfg) {
  const double step = cfg.derivative_step * std::max(1.0, std::abs(s));
  return log_derivative_oracle([](ComplexValue w) { return log_chi_factor(w); }, s, step);
}

double default_tolerance(IdentityId id) {
  switch (id) {
    case IdentityId::FE_ZETA:
      return 1e-8;
    case IdentityId::FE_L:
    case IdentityId::LOGDERIV_ZETA:
    case IdentityId::LOGDERIV_L:
    case IdentityId::AFORM_CLOSED_VS_ORACLE:
      return 1e-6;
    case IdentityId::SYMMETRY_SERIES:
    case IdentityId::THETA_PSI_EQUIV:
      return 1e-9;
  }
  return 1e-9;
}

IdentityReport identity_probe(IdentityId id, std::span<const ComplexValue> sample_points,
                              const EvalConfig& cfg) {
  if (id != IdentityId::FE_ZETA && id != IdentityId::LOGDERIV_ZETA &&
      id != IdentityId::AFORM_CLOSED_VS_ORACLE) {
    throw DomainError("identity_probe handles FE_ZETA, LOGDERIV_ZETA, AFORM_CLOSED_VS_ORACLE");
  }
  constexpr double kExclusion = 0.05;
  IdentityReport report;
  report.identity_id = id;
  report.context = "zeta";
  report.tolerance = default_tolerance(id);

  for (const ComplexValue s : sample_points) {
    if (std::abs(s - 1.0) < kExclusion || std::abs(s) < kExclusion) {
      report.skip(s, "within 0.05 of the zeta pole at s or 1-s");
      continue;
    }
    if (gamma_pole_distance(s / 2.0) < kExclusion / 2.0 ||
        gamma_pole_distance((1.0 - s) / 2.0) < kExclusion / 2.0) {
      report.skip(s, "within 0.05 of a Gamma pole of A(s)");
      continue;
    }
    try {
      switch (id) {
        case IdentityId::FE_ZETA: {
          const ComplexValue lhs = zeta_family(s, 1.0, 0, cfg);
          const ComplexValue rhs = chi_factor(s, cfg).a_value * zeta_family(1.0 - s, 1.0, 0, cfg);
          report.add(s, std::abs(lhs - rhs), lhs - rhs);
          break;
        }
        case IdentityId::LOGDERIV_ZETA: {
          const ComplexValue z0 = zeta_family(s, 1.0, 0, cfg);
          const ComplexValue z1 = zeta_family(s, 1.0, 1, cfg);
          const ComplexValue w0 = zeta_family(1.0 - s, 1.0, 0, cfg);
          const ComplexValue w1 = zeta_family(1.0 - s, 1.0, 1, cfg);
          // Newton-step distance estimate to the nearest zero.
          if (std::abs(z0 / z1) < kExclusion || std::abs(w0 / w1) < kExclusion) {
            report.skip(s, "within ~0.05 of a zeta zero at s or 1-s");
            break;
          }
          const ComplexValue lhs = z1 / z0 + w1 / w0;
          const ComplexValue delta = lhs - a_logderiv_oracle(s, cfg);
          report.add(s, std::abs(delta), delta);
          break;
        }
        default: {
          const ComplexValue delta = chi_factor(s, cfg).a_logderiv_closed - a_logderiv_oracle(s, cfg);
          report.add(s, std::abs(delta), delta);
          break;
        }
      }
    } catch (const PoleError& e) {
      report.skip(s, e.what());
    }
  }
  report.finalize();
  return report;
}

SymmetryProbeResult symmetry_series_probe(const SymmetryProbeInput& in) {
  if (!(in.alpha >= 0.0 && in.alpha <= 0.5)) throw DomainError("alpha must lie in [0, 1/2]");
  if (in.gamma_ord == 0.0) throw DomainError("gamma ordinate must be nonzero");
  if (in.delta != 0 && in.delta != 1) throw DomainError("delta must be 0 or 1");
  if (in.terms <= 0) throw DomainError("terms must be positive");

  const double a = in.alpha;
  const double g = in.gamma_ord;
  const double shift = in.delta / 2.0 + 0.25;
  CompensatedSum series;
  for (long n = 0; n < in.terms; ++n) {
    const double c = static_cast<double>(n) + shift;
    const double inner = c * c - g * g / 4.0 - a * a / 4.0;
    const double den = inner * inner + g * g * c * c;
    if (!(den >= 1e-30)) {
      throw GuardError("symmetry series denominator below 1e-30 at n = " + std::to_string(n));
    }
    series += -a * g * c / den;
  }

  const ComplexValue rho(0.5 + a, g);
  const ComplexValue rho_bar = std::conj(rho);
  const double d = in.delta;
  const ComplexValue p1 = digamma_impl((rho + d) / 2.0);
  const ComplexValue p2 = digamma_impl((1.0 - rho + d) / 2.0);
  const ComplexValue p3 = digamma_impl((rho_bar + d) / 2.0);
  const ComplexValue p4 = digamma_impl((1.0 - rho_bar + d) / 2.0);
  // Grouped so that the alpha = 0 case (1 - rho == conj(rho)) cancels exactly.
  const double digamma_value = ((p1 - p4) + (p2 - p3)).imag();

  SymmetryProbeResult out;
  out.series_value = series.value();
  out.digamma_value = digamma_value;
  out.difference = out.series_value - out.digamma_value;
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(IdentityId id) {
  switch (id) {
    case IdentityId::FE_ZETA:
      return "FE_ZETA";
    case IdentityId::FE_L:
      return "FE_L";
    case IdentityId::LOGDERIV_ZETA:
      return "LOGDERIV_ZETA";
    case IdentityId::LOGDERIV_L:
      return "LOGDERIV_L";
    case IdentityId::AFORM_CLOSED_VS_ORACLE:
      return "AFORM_CLOSED_VS_ORACLE";
    case IdentityId::SYMMETRY_SERIES:
      return "SYMMETRY_SERIES";
    case IdentityId::THETA_PSI_EQUIV:
      return "THETA_PSI_EQUIV";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

void IdentityReport::add(SamplePoint p, double residual, ComplexValue signed_delta) {
  sample_points.push_back(std::move(p));
  residuals.push_back(residual);
  signed_deltas.push_back(signed_delta);
}

void IdentityReport::skip(SamplePoint p, std::string reason) {
  skipped.push_back({std::move(p), std::move(reason)});
}

void IdentityReport::finalize() {
  max_residual = 0.0;
  bool finite = true;
  for (double r : residuals) {
    if (!std::isfinite(r)) finite = false;
    max_residual = std::max(max_residual, r);
  }
  if (residuals.empty()) {
    verdict = Verdict::inconclusive;
  } else if (!finite) {
    max_residual = std::numeric_limits<double>::infinity();
    verdict = Verdict::fails;
  } else {
    verdict = max_residual <= tolerance ? Verdict::holds : Verdict::fails;
  }
}

IdentityReport merge(IdentityReport a, const IdentityReport& b) {
  if (a.identity_id != b.identity_id) throw DomainError("cannot merge reports of different identities");
  a.sample_points.insert(a.sample_points.end(), b.sample_points.begin(), b.sample_points.end());
  a.residuals.insert(a.residuals.end(), b.residuals.begin(), b.residuals.end());
  a.signed_deltas.insert(a.signed_deltas.end(), b.signed_deltas.begin(), b.signed_deltas.end());
  a.skipped.insert(a.skipped.end(), b.skipped.begin(), b.skipped.end());
  if (a.sample_points.empty() && a.skipped.empty()) {
    a.tolerance = b.tolerance;
    a.context = b.context;
  } else {
    a.tolerance = std::min(a.tolerance, b.tolerance);
  }
  a.finalize();
  return a;
}

}  // namespace h8
