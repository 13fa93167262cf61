#include "h8/characters.hpp"

#include <cmath>
#include <numeric>

namespace h8 {

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint32_t primitive_root_mod_prime_power(std::uint32_t p, std::uint32_t pk) {
  const auto factors = prime_factors(p - 1);
  std::uint32_t g = 2;
  for (;; ++g) {
    bool ok = true;
    for (auto r : factors) {
      if (pow_mod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) break;
  }
  if (pk != p && pow_mod(g, p - 1, static_cast<std::uint64_t>(p) * p) == 1) g += p;
  return g;
}

std::uint32_t valuation(std::uint32_t n, std::uint32_t p) {
  std::uint32_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

bool near_gamma_pole(ComplexValue z, double radius) {
  const double k = std::min(0.0, std::round(z.real()));
  return std::abs(z - ComplexValue(k, 0.0)) < radius;
}

}  // namespace

ComplexValue unit_root(std::uint64_t k, std::uint64_t m) {
  k %= m;
  if ((4 * k) % m == 0) {
    switch ((4 * k) / m) {
      case 0:
        return {1.0, 0.0};
      case 1:
        return {0.0, 1.0};
      case 2:
        return {-1.0, 0.0};
      default:
        return {0.0, -1.0};
    }
  }
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m));
}

std::string Character::label() const { return std::to_string(modulus) + "." + std::to_string(index); }

Character Character::conjugate() const {
  Character c = *this;
  for (auto& v : c.values) v = std::conj(v);
  return c;
}

CharacterGroup::CharacterGroup(std::uint32_t q) : q_(q) {
  if (q < 1 || q > 10'000) throw DomainError("character modulus must lie in [1, 10^4]");

  std::uint32_t rest = q;
  for (std::uint32_t p = 2; rest > 1; ++p) {
    if (p * p > rest) p = rest;
    if (rest % p != 0) continue;
    std::uint32_t pk = 1;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
    }
    if (p == 2) {
      if (pk >= 4) comps_.push_back({2, pk, 2, 1});
      if (pk >= 8) comps_.push_back({2, pk, pk / 4, 2});
    } else {
      comps_.push_back({p, pk, pk / p * (p - 1), 0});
    }
  }

  phi_ = 1;
  exponent_ = 1;
  for (const auto& c : comps_) {
    orders_.push_back(c.order);
    phi_ *= c.order;
    exponent_ = std::lcm(exponent_, c.order);
  }

  // Local discrete logarithms, indexed by residue mod the prime power.
  std::vector<std::vector<std::uint32_t>> local(comps_.size());
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    const auto& c = comps_[j];
    auto& table = local[j];
    table.assign(c.prime_power, 0);
    if (c.kind == 0) {
      const std::uint64_t g = primitive_root_mod_prime_power(c.prime, c.prime_power);
      std::uint64_t x = 1;
      for (std::uint32_t e = 0; e < c.order; ++e) {
        table[x] = e;
        x = x * g % c.prime_power;
      }
    } else {
      // x = (-1)^a 5^b mod 2^k
      const std::uint32_t b_order = c.prime_power >= 8 ? c.prime_power / 4 : 1;
      std::uint64_t five = 1;
      for (std::uint32_t b = 0; b < b_order; ++b) {
        const std::uint64_t minus = (c.prime_power - five) % c.prime_power;
        table[five] = c.kind == 1 ? 0 : b;
        table[minus] = c.kind == 1 ? 1 : b;
        five = five * 5 % c.prime_power;
      }
    }
  }

  const std::size_t nc = comps_.size();
  unit_.assign(q, false);
  scaled_log_.assign(static_cast<std::size_t>(q) * nc, 0);
  for (std::uint32_t n = 0; n < q; ++n) {
    if (std::gcd(n, q) != 1) continue;
    unit_[n] = true;
    for (std::size_t j = 0; j < nc; ++j) {
      scaled_log_[n * nc + j] = local[j][n % comps_[j].prime_power] * (exponent_ / comps_[j].order);
    }
  }
  roots_.resize(exponent_);
  for (std::uint32_t k = 0; k < exponent_; ++k) roots_[k] = unit_root(k, exponent_);
}

Character CharacterGroup::character(std::uint32_t index) const {
  if (index < 1 || index > phi_) throw DomainError("character index out of range");
  Character chi;
  chi.modulus = q_;
  chi.index = index;

  const std::size_t nc = comps_.size();
  chi.exponents.assign(nc, 0);
  std::uint32_t rem = index - 1;
  for (std::size_t j = nc; j-- > 0;) {
    chi.exponents[j] = rem % comps_[j].order;
    rem /= comps_[j].order;
  }

  chi.values.assign(q_, ComplexValue(0.0, 0.0));
  for (std::uint32_t n = 0; n < q_; ++n) {
    if (!unit_[n]) continue;
    std::uint64_t k = 0;
    for (std::size_t j = 0; j < nc; ++j) k += static_cast<std::uint64_t>(chi.exponents[j]) * scaled_log_[n * nc + j];
    chi.values[n] = roots_[k % exponent_];
  }

  chi.is_principal = true;
  chi.conductor = 1;
  for (std::size_t j = 0; j < nc; ++j) {
    const auto& c = comps_[j];
    const std::uint32_t e = chi.exponents[j];
    if (e != 0) chi.is_principal = false;
    if (c.kind == 0) {
      if (e == 0) continue;
      const std::uint32_t local_order = c.order / std::gcd(e, c.order);
      std::uint32_t f = c.prime;
      for (std::uint32_t v = valuation(local_order, c.prime); v > 0; --v) f *= c.prime;
      chi.conductor *= f;
    }
  }
  // Power of 2: the sign and <5> components combine into one local conductor.
  std::uint32_t sign_e = 0, five_e = 0, five_order = 1;
  for (std::size_t j = 0; j < nc; ++j) {
    if (comps_[j].kind == 1) sign_e = chi.exponents[j];
    if (comps_[j].kind == 2) {
      five_e = chi.exponents[j];
      five_order = comps_[j].order;
    }
  }
  if (five_e != 0) {
    const std::uint32_t local_order = five_order / std::gcd(five_e, five_order);
    chi.conductor *= 4u << valuation(local_order, 2);
  } else if (sign_e != 0) {
    chi.conductor *= 4;
  }
  chi.is_primitive = chi.conductor == q_;

  const double minus_one = chi.values[(q_ - 1) % q_].real();
  chi.parity_delta = static_cast<int>(std::lround((1.0 - minus_one) / 2.0));
  return chi;
}

std::vector<Character> CharacterGroup::all() const {
  std::vector<Character> out;
  out.reserve(phi_);
  for (std::uint32_t i = 1; i <= phi_; ++i) out.push_back(character(i));
  return out;
}

std::vector<Character> enumerate_characters(std::uint32_t q) { return CharacterGroup(q).all(); }

ComplexValue gauss_sum(const Character& chi) {
  ComplexValue acc(0.0, 0.0);
  for (std::uint32_t n = 1; n <= chi.modulus; ++n) acc += chi(n) * unit_root(n, chi.modulus);
  return acc;
}

ComplexValue l_function(ComplexValue s, const Character& chi, int order, const EvalConfig& cfg) {
  if (order < 0 || order > 1) throw DomainError("L-function derivative order must be 0 or 1");
  const double q = chi.modulus;
  if (s == ComplexValue(1.0, 0.0)) {
    if (chi.is_principal) throw PoleError("L(s, chi0) pole at s = 1");
    if (order != 0) throw DomainError("L'(1, chi) is not available");
    // zeta(s, a) = 1/(s-1) - psi(a) + O(s-1); the poles cancel over a.
    ComplexValue acc(0.0, 0.0);
    for (std::uint32_t a = 1; a <= chi.modulus; ++a) {
      if (chi.values[a % chi.modulus] == 0.0) continue;
      acc -= chi(a) * gamma_logderiv(a / q, cfg);
    }
    return acc / q;
  }
  ComplexValue h(0.0, 0.0), dh(0.0, 0.0);
  for (std::uint32_t a = 1; a <= chi.modulus; ++a) {
    const ComplexValue c = chi(a);
    if (c == 0.0) continue;
    h += c * zeta_family(s, a / q, 0, cfg);
    if (order == 1) dh += c * zeta_family(s, a / q, 1, cfg);
  }
  const ComplexValue scale = std::exp(-s * std::log(q));
  if (order == 0) return scale * h;
  return scale * (dh - std::log(q) * h);
}

ComplexValue root_number(const Character& chi) {
  const ComplexValue i_delta = chi.parity_delta == 0 ? ComplexValue(1.0, 0.0) : ComplexValue(0.0, 1.0);
  return gauss_sum(chi) / (i_delta * std::sqrt(static_cast<double>(chi.modulus)));
}

ComplexValue log_l_chi_factor(ComplexValue s, const Character& chi) {
  const double q = chi.modulus;
  const double d = chi.parity_delta;
  return std::log(root_number(chi)) + (0.5 - s) * std::log(q / kPi) + log_gamma((1.0 - s + d) / 2.0) -
         log_gamma((s + d) / 2.0);
}

LEvalResult l_eval(ComplexValue s, const Character& chi, const EvalConfig& cfg) {
  LEvalResult out;
  out.l_value = l_function(s, chi, 0, cfg);
  try {
    out.a_factor = std::exp(log_l_chi_factor(s, chi));
  } catch (const PoleError&) {
    return out;
  }
  if (chi.is_primitive) {
    const ComplexValue rhs = *out.a_factor * l_function(1.0 - s, chi.conjugate(), 0, cfg);
    out.fe_residual = std::abs(out.l_value - rhs);
  }
  return out;
}

namespace {

// Shared skip rules for the L probes; returns the reason or an empty string.
std::string l_probe_exclusion(ComplexValue s, const Character& chi) {
  constexpr double kExclusion = 0.05;
  if (chi.is_principal && (std::abs(s - 1.0) < kExclusion || std::abs(s) < kExclusion)) {
    return "within 0.05 of the L pole at s or 1-s";
  }
  const double d = chi.parity_delta;
  if (near_gamma_pole((s + d) / 2.0, kExclusion / 2.0) || near_gamma_pole((1.0 - s + d) / 2.0, kExclusion / 2.0)) {
    return "within 0.05 of a Gamma pole of A(s, chi)";
  }
  return {};
}

}  // namespace

IdentityReport l_fe_probe(const Character& chi, std::span<const ComplexValue> points, const EvalConfig& cfg) {
  if (!chi.is_primitive) throw NotPrimitive("character " + chi.label() + " is not primitive");
  IdentityReport report;
  report.identity_id = IdentityId::FE_L;
  report.context = chi.label();
  report.tolerance = default_tolerance(IdentityId::FE_L);
  const Character conj = chi.conjugate();
  for (const ComplexValue s : points) {
    if (auto why = l_probe_exclusion(s, chi); !why.empty()) {
      report.skip(s, why);
      continue;
    }
    try {
      const ComplexValue lhs = l_function(s, chi, 0, cfg);
      const ComplexValue rhs = std::exp(log_l_chi_factor(s, chi)) * l_function(1.0 - s, conj, 0, cfg);
      report.add(s, std::abs(lhs - rhs), lhs - rhs);
    } catch (const PoleError& e) {
      report.skip(s, e.what());
    }
  }
  report.finalize();
  return report;
}

LIdentityProbe l_identity_probe(const Character& chi, std::span<const ComplexValue> points, const EvalConfig& cfg) {
  if (!chi.is_primitive) throw NotPrimitive("character " + chi.label() + " is not primitive");
  LIdentityProbe out;
  out.logderiv.identity_id = IdentityId::LOGDERIV_L;
  out.closed_form.identity_id = IdentityId::AFORM_CLOSED_VS_ORACLE;
  out.logderiv.context = chi.label();
  out.closed_form.context = chi.label();
  out.logderiv.tolerance = default_tolerance(IdentityId::LOGDERIV_L);
  out.closed_form.tolerance = default_tolerance(IdentityId::AFORM_CLOSED_VS_ORACLE);

  const Character conj = chi.conjugate();
  const double d = chi.parity_delta;
  for (const ComplexValue s : points) {
    if (auto why = l_probe_exclusion(s, chi); !why.empty()) {
      out.logderiv.skip(s, why);
      out.closed_form.skip(s, why);
      continue;
    }
    try {
      const double step = cfg.derivative_step * std::max(1.0, std::abs(s));
      const ComplexValue oracle =
          log_derivative_oracle([&](ComplexValue w) { return log_l_chi_factor(w, chi); }, s, step);
      const ComplexValue closed =
          0.5 * gamma_logderiv((s + d) / 2.0, cfg) + 0.5 * gamma_logderiv((1.0 - s + d) / 2.0, cfg) + std::log(kPi);
      out.closed_form.add(s, std::abs(closed - oracle), closed - oracle);

      const ComplexValue l0 = l_function(s, chi, 0, cfg);
      const ComplexValue l1 = l_function(s, chi, 1, cfg);
      const ComplexValue m0 = l_function(1.0 - s, conj, 0, cfg);
      const ComplexValue m1 = l_function(1.0 - s, conj, 1, cfg);
      if (std::abs(l0 / l1) < 0.05 || std::abs(m0 / m1) < 0.05) {
        out.logderiv.skip(s, "within ~0.05 of an L zero at s or 1-s");
        continue;
      }
      const ComplexValue delta = l1 / l0 + m1 / m0 - oracle;
      out.logderiv.add(s, std::abs(delta), delta);
    } catch (const PoleError& e) {
      out.logderiv.skip(s, e.what());
      out.closed_form.skip(s, e.what());
    }
  }
  out.logderiv.finalize();
  out.closed_form.finalize();
  return out;
}

}  // namespace h8
