#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "h8/error.hpp"
#include "h8/special_functions.hpp"

using h8::ComplexValue;
using h8::EvalConfig;
using h8::IdentityId;

namespace {

// psi(z) = -gamma + sum_{n>=0} (1/(n+1) - 1/(n+z)), summed to M terms with
// the leading tail term (z - 1)/M added back.
double digamma_series_oracle(double z, long terms) {
  double acc = 0.0;
  for (long n = terms - 1; n >= 0; --n) acc += 1.0 / (n + 1.0) - 1.0 / (n + z);
  return -h8::kEulerGamma + acc + (z - 1.0) / (terms + z / 2.0);
}

// sum_{n>=0} (n+a)^{-2} summed backwards to M terms plus the integral tail.
double hurwitz2_oracle(double a, long terms) {
  double acc = 0.0;
  for (long n = terms - 1; n >= 0; --n) acc += 1.0 / ((n + a) * (n + a));
  const double m = terms + a;
  return acc + 1.0 / m - 0.5 / (m * m) + 1.0 / (6.0 * m * m * m);
}

}  // namespace

TEST_CASE("digamma at small arguments") {
  CHECK(h8::gamma_logderiv(1.0).real() == doctest::Approx(-0.5772156649).epsilon(1e-10));
  CHECK(h8::gamma_logderiv(2.0).real() == doctest::Approx(0.4227843351).epsilon(1e-10));
  const double oracle = digamma_series_oracle(0.5, 10'000'000);
  CHECK(std::abs(oracle - (-1.9635100260)) < 1e-9);
  CHECK(std::abs(h8::gamma_logderiv(0.5).real() - oracle) < 1e-9);
  CHECK(std::abs(h8::gamma_logderiv(0.5).imag()) < 1e-15);
}

TEST_CASE("digamma poles") {
  CHECK_THROWS_AS(h8::gamma_logderiv(0.0), h8::PoleError);
  CHECK_THROWS_AS(h8::gamma_logderiv(-3.0), h8::PoleError);
  CHECK_NOTHROW(h8::gamma_logderiv(ComplexValue(-3.0, 1e-3)));
}

TEST_CASE("digamma recurrence on random strip points") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> re(-2.0, 3.0), im(-40.0, 40.0);
  for (int i = 0; i < 50; ++i) {
    const ComplexValue s(re(rng), im(rng));
    const ComplexValue lhs = h8::gamma_logderiv(s + 1.0) - h8::gamma_logderiv(s);
    CHECK(std::abs(lhs - 1.0 / s) <= 1e-10);
  }
}

TEST_CASE("log-gamma agrees with digamma and known values") {
  CHECK(std::abs(h8::log_gamma(5.0) - std::log(24.0)) < 1e-13);
  CHECK(std::abs(std::exp(h8::log_gamma(-0.5)) - (-2.0 * std::sqrt(h8::kPi))) < 1e-12);
  const ComplexValue s(0.7, 12.0);
  const ComplexValue fd = h8::log_derivative_oracle([](ComplexValue w) { return h8::log_gamma(w); }, s, 1e-4);
  CHECK(std::abs(fd - h8::gamma_logderiv(s)) < 1e-9);
  // Stirling branch: arg Gamma(1/4 + 10i) continuous, matches reference.
  CHECK(h8::log_gamma(ComplexValue(0.25, 10.0)).imag() == doctest::Approx(12.634193666938486).epsilon(1e-11));
}

TEST_CASE("Hurwitz and Riemann zeta values") {
  const double z2 = hurwitz2_oracle(1.0, 1'000'000);
  CHECK(std::abs(z2 - 1.6449340668) < 1e-10);
  CHECK(std::abs(h8::zeta_family(2.0, 1.0, 0) - z2) < 1e-11);

  const double z2h = hurwitz2_oracle(0.5, 1'000'000);
  CHECK(std::abs(z2h - 4.9348022005) < 1e-9);
  CHECK(std::abs(h8::zeta_family(2.0, 0.5, 0) - z2h) < 1e-11);

  CHECK(std::abs(h8::riemann_zeta(0.0) - (-0.5)) < 1e-13);
  // Continuation through the functional equation just right of 0.
  const ComplexValue s(1e-7, 0.0);
  const ComplexValue via_reflection = h8::chi_factor(s).a_value * h8::riemann_zeta(1.0 - s);
  CHECK(std::abs(via_reflection - (-0.5)) < 1e-6);

  CHECK(std::abs(h8::riemann_zeta(0.5) - (-1.4603545088095868)) < 1e-12);
  CHECK(std::abs(h8::riemann_zeta(-1.0) - (-1.0 / 12.0)) < 1e-13);
}

TEST_CASE("zeta_family domain checks") {
  CHECK_THROWS_AS(h8::zeta_family(1.0, 1.0, 0), h8::PoleError);
  CHECK_THROWS_AS(h8::zeta_family(2.0, 0.0, 0), h8::DomainError);
  CHECK_THROWS_AS(h8::zeta_family(2.0, 1.5, 0), h8::DomainError);
  CHECK_THROWS_AS(h8::zeta_family(2.0, 1.0, 4), h8::DomainError);
  CHECK_THROWS_AS(h8::zeta_family(2.0, 1.0, -1), h8::DomainError);
}

TEST_CASE("conjugate symmetry of zeta") {
  for (double re : {-1.0, 0.3, 0.5, 1.7}) {
    for (double im : {0.5, 7.0, 25.0, 90.0}) {
      const ComplexValue s(re, im);
      CHECK(std::abs(h8::riemann_zeta(std::conj(s)) - std::conj(h8::riemann_zeta(s))) <= 1e-10);
    }
  }
}

TEST_CASE("derivative orders match finite differences of the lower order") {
  const std::vector<ComplexValue> points = {{0.5, 3.0}, {2.0, 0.0}, {-0.5, 10.0}, {0.8, 21.0}};
  const double h = 2e-3;
  for (const auto s : points) {
    for (int order = 1; order <= 3; ++order) {
      auto f = [&](ComplexValue w) { return h8::zeta_family(w, 0.7, order - 1); };
      const ComplexValue fd = (f(s - 2.0 * h) - 8.0 * f(s - h) + 8.0 * f(s + h) - f(s + 2.0 * h)) / (12.0 * h);
      const ComplexValue exact = h8::zeta_family(s, 0.7, order);
      CHECK(std::abs(fd - exact) <= 1e-5 * std::max(1.0, std::abs(exact)));
    }
  }
  // zeta'(0) = -log(2 pi)/2
  CHECK(std::abs(h8::zeta_family(0.0, 1.0, 1) - (-0.5 * std::log(2.0 * h8::kPi))) < 1e-12);
}

TEST_CASE("chi factor") {
  CHECK(std::abs(h8::chi_factor(0.5).a_value - 1.0) < 1e-14);
  const ComplexValue a2 = h8::chi_factor(2.0).a_value;
  CHECK(std::abs(a2 - (-2.0 * h8::kPi * h8::kPi)) < 1e-11);
  CHECK(std::abs(a2 * h8::riemann_zeta(-1.0) - h8::riemann_zeta(2.0)) < 1e-11);

  // Printed closed form at 0.3 + 5i (digamma values from an independent
  // 30-digit evaluation).
  const ComplexValue closed = h8::chi_factor({0.3, 5.0}).a_logderiv_closed;
  CHECK(std::abs(closed - ComplexValue(2.0601491777633271, 0.0401137867214897)) < 1e-12);

  CHECK_THROWS_AS(h8::chi_factor(0.0), h8::PoleError);
  CHECK_THROWS_AS(h8::chi_factor(-2.0), h8::PoleError);
  CHECK_THROWS_AS(h8::chi_factor(1.0), h8::PoleError);
  CHECK_THROWS_AS(h8::chi_factor(3.0), h8::PoleError);
}

TEST_CASE("functional-equation probe") {
  const std::vector<ComplexValue> pts = {{2.0, 0.0}};
  const auto r2 = h8::identity_probe(IdentityId::FE_ZETA, pts);
  REQUIRE(r2.residuals.size() == 1);
  CHECK(r2.residuals[0] < 1e-10);

  const std::vector<ComplexValue> pts2 = {{0.5, 3.0}};
  CHECK(h8::identity_probe(IdentityId::FE_ZETA, pts2).residuals[0] < 1e-8);

  std::vector<ComplexValue> grid;
  for (double re = -1.0; re <= 2.0001; re += 0.25) {
    for (double im = -30.0; im <= 30.0001; im += 6.0) grid.emplace_back(re, im);
  }
  REQUIRE(grid.size() >= 100);
  const auto report = h8::identity_probe(IdentityId::FE_ZETA, grid);
  CHECK(report.sample_points.size() + report.skipped.size() == grid.size());
  CHECK(report.sample_points.size() >= 100);
  CHECK(report.max_residual <= 1e-8);
  CHECK(report.verdict == h8::Verdict::holds);
}

TEST_CASE("poles and zeros are skipped and flagged") {
  const std::vector<ComplexValue> pts = {{1.01, 0.0}, {0.02, 0.0}, {0.5, 14.134725141734693}, {0.5, 10.0}};
  const auto fe = h8::identity_probe(IdentityId::FE_ZETA, pts);
  CHECK(fe.skipped.size() == 2);
  CHECK(fe.sample_points.size() == 2);
  const auto ld = h8::identity_probe(IdentityId::LOGDERIV_ZETA, pts);
  CHECK(ld.skipped.size() == 3);
  CHECK(ld.sample_points.size() == 1);
  CHECK(ld.max_residual < 1e-6);
  CHECK_THROWS_AS(h8::identity_probe(IdentityId::FE_L, pts), h8::DomainError);
}

TEST_CASE("log-derivative identity with oracle and the printed closed form") {
  std::vector<ComplexValue> pts;
  for (double re : {-0.7, 0.3, 0.8, 1.6}) {
    for (double im : {2.0, 5.0, 9.0, 17.0, 23.0}) pts.emplace_back(re, im);
  }
  const auto ld = h8::identity_probe(IdentityId::LOGDERIV_ZETA, pts);
  CHECK(ld.residuals.size() > 10);
  CHECK(ld.max_residual <= 1e-6);

  // d/ds log A vs the printed form at 0.3 + 5i: oracle value from an
  // independent 30-digit differentiation, |delta| = 1.83259553190913632.
  const std::vector<ComplexValue> one = {{0.3, 5.0}};
  const auto af = h8::identity_probe(IdentityId::AFORM_CLOSED_VS_ORACLE, one);
  REQUIRE(af.residuals.size() == 1);
  CHECK(std::abs(h8::a_logderiv_oracle({0.3, 5.0}) - ComplexValue(0.2293105939354732, -0.0401137867214897)) < 1e-9);
  CHECK(af.residuals[0] == doctest::Approx(1.8325955319091363).epsilon(1e-8));
  CHECK(af.signed_deltas[0].real() > 0.0);
  CHECK(af.verdict == h8::Verdict::fails);
}

TEST_CASE("symmetry series probe") {
  const auto zero = h8::symmetry_series_probe({0.0, 14.13, 0, 1000});
  CHECK(zero.series_value == 0.0);
  CHECK(std::abs(zero.digamma_value) <= 1e-10);

  const auto zero_odd = h8::symmetry_series_probe({0.0, 6.02, 1, 1000});
  CHECK(zero_odd.series_value == 0.0);
  CHECK(std::abs(zero_odd.digamma_value) <= 1e-10);

  // Independent 30-digit summation / digamma evaluation.
  const auto off = h8::symmetry_series_probe({0.25, 14.0, 0, 1'000'000});
  CHECK(off.series_value == doctest::Approx(-0.0357256924253164).epsilon(1e-10));
  CHECK(off.digamma_value == doctest::Approx(-0.0714513848541329).epsilon(1e-10));
  CHECK(off.difference == doctest::Approx(0.0357256924288165).epsilon(1e-8));

  CHECK_THROWS_AS(h8::symmetry_series_probe({0.5, 1e-16, 0, 10}), h8::GuardError);
  CHECK_THROWS_AS(h8::symmetry_series_probe({0.6, 14.0, 0, 10}), h8::DomainError);
  CHECK_THROWS_AS(h8::symmetry_series_probe({0.1, 0.0, 0, 10}), h8::DomainError);
  CHECK_THROWS_AS(h8::symmetry_series_probe({0.1, 1.0, 2, 10}), h8::DomainError);
}

TEST_CASE("report merge is a concatenation with max-reduction") {
  const std::vector<ComplexValue> a = {{2.0, 1.0}, {0.5, 3.0}};
  const std::vector<ComplexValue> b = {{-0.5, 7.0}};
  const std::vector<ComplexValue> c = {{1.5, -4.0}, {1.0, 0.0}};
  auto ra = h8::identity_probe(IdentityId::FE_ZETA, a);
  auto rb = h8::identity_probe(IdentityId::FE_ZETA, b);
  auto rc = h8::identity_probe(IdentityId::FE_ZETA, c);
  auto left = h8::merge(h8::merge(ra, rb), rc);
  auto right = h8::merge(ra, h8::merge(rb, rc));
  CHECK(left.residuals == right.residuals);
  CHECK(left.max_residual == right.max_residual);
  CHECK(left.skipped.size() == 1);
  std::vector<ComplexValue> all = a;
  all.insert(all.end(), b.begin(), b.end());
  all.insert(all.end(), c.begin(), c.end());
  CHECK(h8::identity_probe(IdentityId::FE_ZETA, all).residuals == left.residuals);
}

TEST_CASE("EvalConfig invariants") {
  EvalConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.euler_maclaurin_cutoff = 5;
  CHECK_THROWS_AS(cfg.validate(), h8::DomainError);
  cfg = {};
  cfg.em_correction_terms = 13;
  CHECK_THROWS_AS(cfg.validate(), h8::DomainError);
  cfg = {};
  cfg.derivative_step = 0.1;
  CHECK_THROWS_AS(cfg.validate(), h8::DomainError);
}
