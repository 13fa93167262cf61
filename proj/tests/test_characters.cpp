#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "h8/characters.hpp"

using h8::Character;
using h8::ComplexValue;

namespace {

// Smallest d | q such that chi is trivial on units n = 1 mod d.
std::uint32_t brute_force_conductor(const Character& chi) {
  const std::uint32_t q = chi.modulus;
  for (std::uint32_t d = 1; d <= q; ++d) {
    if (q % d != 0) continue;
    bool trivial = true;
    for (std::uint32_t n = 1; n < q && trivial; ++n) {
      if (std::gcd(n, q) == 1 && n % d == 1 % d && std::abs(chi(n) - 1.0) > 1e-9) trivial = false;
    }
    if (trivial) return d;
  }
  return q;
}

const Character& nonprincipal(const std::vector<Character>& chars) {
  return *std::find_if(chars.begin(), chars.end(), [](const Character& c) { return !c.is_principal; });
}

}  // namespace

TEST_CASE("enumeration counts and flags") {
  const auto five = h8::enumerate_characters(5);
  CHECK(five.size() == 4);
  CHECK(std::count_if(five.begin(), five.end(), [](auto& c) { return c.is_principal; }) == 1);
  CHECK(std::count_if(five.begin(), five.end(), [](auto& c) { return c.is_primitive; }) == 3);
  CHECK(five[1].label() == "5.2");
  CHECK(five[0].is_principal);

  const auto eight = h8::enumerate_characters(8);
  std::vector<std::uint32_t> conductors;
  for (const auto& c : eight) conductors.push_back(c.conductor);
  std::sort(conductors.begin(), conductors.end());
  CHECK(conductors == std::vector<std::uint32_t>{1, 4, 8, 8});

  const auto one = h8::enumerate_characters(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].values.size() == 1);
  CHECK(one[0].values[0] == ComplexValue(1.0, 0.0));
  CHECK(one[0](12345) == ComplexValue(1.0, 0.0));
  CHECK(one[0].is_principal);

  CHECK_THROWS_AS(h8::enumerate_characters(0), h8::DomainError);
  CHECK_THROWS_AS(h8::enumerate_characters(10'001), h8::DomainError);
}

TEST_CASE("conductors agree with the brute-force definition") {
  for (std::uint32_t q = 1; q <= 64; ++q) {
    for (const auto& chi : h8::enumerate_characters(q)) {
      CHECK_MESSAGE(chi.conductor == brute_force_conductor(chi), chi.label());
      CHECK(chi.is_primitive == (chi.conductor == q));
    }
  }
}

TEST_CASE("character invariants hold exhaustively for q <= 100") {
  for (std::uint32_t q = 1; q <= 100; ++q) {
    const auto chars = h8::enumerate_characters(q);
    const std::uint32_t phi = static_cast<std::uint32_t>(chars.size());
    std::uint32_t units = 0;
    for (std::uint32_t n = 0; n < q; ++n) units += std::gcd(n, q) == 1;
    REQUIRE(phi == units);
    std::vector<std::vector<std::uint32_t>> seen;
    for (const auto& chi : chars) {
      seen.push_back(chi.exponents);
      CHECK(chi(1) == ComplexValue(1.0, 0.0));
      for (std::uint32_t n = 0; n < q; ++n) {
        const bool unit = std::gcd(n, q) == 1;
        CHECK((chi.values[n] == 0.0) == !unit);
        if (!unit) continue;
        // root of unity of order dividing phi(q)
        CHECK(std::abs(std::pow(chi.values[n], static_cast<double>(phi)) - 1.0) < 1e-12 * phi);
        for (std::uint32_t m = 1; m < q; ++m) {
          if (std::gcd(m, q) != 1) continue;
          CHECK(std::abs(chi(static_cast<std::int64_t>(m) * n) - chi(m) * chi(n)) < 1e-12);
        }
      }
      const double expected_delta = std::round((1.0 - chi(q - 1).real()) / 2.0);
      CHECK(chi.parity_delta == static_cast<int>(expected_delta));
    }
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  }
}

TEST_CASE("orthogonality for q <= 50") {
  for (std::uint32_t q = 1; q <= 50; ++q) {
    const auto chars = h8::enumerate_characters(q);
    const double phi = static_cast<double>(chars.size());
    for (std::uint32_t n = 1; n <= q; ++n) {
      if (std::gcd(n, q) != 1) continue;
      for (std::uint32_t l = 1; l <= q; ++l) {
        if (std::gcd(l, q) != 1) continue;
        ComplexValue acc(0.0, 0.0);
        for (const auto& chi : chars) acc += chi(n) * std::conj(chi(l));
        const double expected = (n % q == l % q) ? phi : 0.0;
        CHECK(std::abs(acc - expected) <= 1e-9);
      }
    }
  }
}

TEST_CASE("Gauss sums") {
  const auto four = h8::enumerate_characters(4);
  CHECK(std::abs(h8::gauss_sum(nonprincipal(four)) - ComplexValue(0.0, 2.0)) < 1e-14);

  for (const auto& chi : h8::enumerate_characters(5)) {
    if (chi.is_primitive) CHECK(std::abs(std::norm(h8::gauss_sum(chi)) - 5.0) < 1e-12);
  }
  for (std::uint32_t q : {3u, 7u, 13u, 31u}) {
    // sum_{n=1}^{q-1} e(n/q) = (sum over a full period) - 1 = -1
    CHECK(std::abs(h8::gauss_sum(h8::enumerate_characters(q)[0]) - (-1.0)) < 1e-12);
  }
  for (std::uint32_t q = 1; q <= 50; ++q) {
    for (const auto& chi : h8::enumerate_characters(q)) {
      if (chi.is_primitive) CHECK(std::abs(std::norm(h8::gauss_sum(chi)) - q) <= 1e-9);
    }
  }
}

TEST_CASE("L-function values") {
  // Catalan's constant from the alternating series, averaged partial sums.
  double catalan = 0.0, prev = 0.0;
  for (long k = 0; k < 2'000'000; ++k) {
    prev = catalan;
    catalan += (k % 2 == 0 ? 1.0 : -1.0) / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
  }
  const double catalan_oracle = 0.5 * (catalan + prev);
  CHECK(std::abs(catalan_oracle - 0.9159655942) < 1e-10);

  const auto four = h8::enumerate_characters(4);
  const auto& chi4 = nonprincipal(four);
  CHECK(std::abs(h8::l_eval(2.0, chi4).l_value - catalan_oracle) < 1e-11);
  CHECK(std::abs(h8::l_function(1.0, chi4) - h8::kPi / 4.0) < 1e-13);

  const auto six = h8::enumerate_characters(6);
  CHECK(std::abs(h8::l_eval(2.0, six[0]).l_value - h8::kPi * h8::kPi / 9.0) < 1e-12);
  CHECK_FALSE(h8::l_eval(2.0, six[0]).fe_residual.has_value());
  CHECK_THROWS_AS(h8::l_eval(1.0, six[0]), h8::PoleError);

  for (const auto& chi : h8::enumerate_characters(5)) {
    if (!chi.is_primitive) continue;
    const auto r = h8::l_eval({0.5, 2.0}, chi);
    REQUIRE(r.fe_residual.has_value());
    CHECK(*r.fe_residual < 1e-6);
  }
}

TEST_CASE("principal L equals zeta times Euler factors") {
  const std::vector<ComplexValue> pts = {{2.0, 0.0}, {0.5, 3.0}, {1.5, -7.0}, {-0.5, 11.0}, {0.2, 25.0}};
  int count = 0;
  for (std::uint32_t q : {2u, 6u, 10u, 12u}) {
    const auto chi0 = h8::enumerate_characters(q)[0];
    for (const auto s : pts) {
      ComplexValue euler = h8::riemann_zeta(s);
      for (std::uint32_t p : {2u, 3u, 5u}) {
        if (q % p == 0) euler *= 1.0 - std::exp(-s * std::log(static_cast<double>(p)));
      }
      CHECK(std::abs(h8::l_function(s, chi0) - euler) <= 1e-8);
      ++count;
    }
  }
  CHECK(count == 20);
}

TEST_CASE("L log-derivative probes") {
  const auto& chi4 = nonprincipal(h8::enumerate_characters(4));
  const std::vector<ComplexValue> p4 = {{0.3, 2.0}};
  const auto r4 = h8::l_identity_probe(chi4, p4);
  REQUIRE(r4.logderiv.residuals.size() == 1);
  CHECK(r4.logderiv.residuals[0] < 1e-6);
  CHECK(r4.closed_form.residuals.size() == 1);

  const auto& chi3 = nonprincipal(h8::enumerate_characters(3));
  const std::vector<ComplexValue> p3 = {{0.5, 1.0}, {0.5, 1.0}};
  const auto r3 = h8::l_identity_probe(chi3, p3);
  REQUIRE(r3.logderiv.residuals.size() == 2);
  CHECK(r3.logderiv.residuals[0] == r3.logderiv.residuals[1]);
  CHECK(r3.logderiv.verdict != h8::Verdict::inconclusive);

  const auto six = h8::enumerate_characters(6);
  CHECK_THROWS_AS(h8::l_identity_probe(six[0], p3), h8::NotPrimitive);
  CHECK_THROWS_AS(h8::l_fe_probe(six[1], p3), h8::NotPrimitive);
}

TEST_CASE("FE_L probe over primitive characters q <= 12") {
  std::vector<ComplexValue> pts;
  for (int k = 0; k < 20; ++k) pts.emplace_back(-0.5 + 0.1 * (k % 10), -15.0 + 1.7 * k);
  for (std::uint32_t q = 1; q <= 12; ++q) {
    for (const auto& chi : h8::enumerate_characters(q)) {
      if (!chi.is_primitive) continue;
      const auto r = h8::l_fe_probe(chi, pts);
      CHECK(r.residuals.size() == 20);
      CHECK_MESSAGE(r.max_residual <= 1e-6, chi.label());
    }
  }
}
