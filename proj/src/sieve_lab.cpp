#include "h8/sieve_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "h8/error.hpp"

namespace h8 {

namespace {

constexpr double kEndpointTol = 1e-12;

double clamp_endpoint(double u, double lo, double hi, const char* what) {
  if (!(u >= lo - kEndpointTol && u <= hi + kEndpointTol))
    throw DomainError(std::string(what) + " defined for " + std::to_string(lo) + " <= u <= " + std::to_string(hi) +
                      ", got u = " + std::to_string(u));
  return std::clamp(u, lo, hi);
}

}  // namespace

const char* to_string(SieveKind k) { return k == SieveKind::goldbach ? "goldbach" : "twin"; }

SieveTarget SieveTarget::goldbach(std::uint64_t n) {
  if (n < 4 || n % 2) throw DomainError("goldbach target needs even N >= 4");
  return {SieveKind::goldbach, n};
}

SieveTarget SieveTarget::twin(std::uint64_t n) {
  if (n < 3) throw DomainError("twin target needs N >= 3");
  return {SieveKind::twin, n};
}

double rosser_f(double u) {
  u = clamp_endpoint(u, 2.0, 4.0, "f(u)");
  return 2.0 * std::exp(kEulerGamma) / u * std::log(u - 1.0);
}

double rosser_F(double u) {
  u = clamp_endpoint(u, 2.0, 3.0, "F(u)");
  return 2.0 * std::exp(kEulerGamma) / u;
}

RosserValues rosser_fF(double u) {
  RosserValues v{rosser_f(u), std::nullopt};
  if (u <= 3.0 + kEndpointTol) v.F = rosser_F(u);
  return v;
}

double s_exact(const SieveTarget& target, double z, const PrimeTable& table, const SieveOptions& options) {
  if (!(z >= 2.0)) throw DomainError("sieve level z must be >= 2");
  if (target.n > table.limit()) throw RangeError("N exceeds prime table limit");
  const auto primes = table.primes();
  auto below_z = [&](double v) { return options.inclusive_z ? v <= z : v < z; };
  // true when a has a prime factor below z
  auto sifted = [&](std::uint64_t a) {
    for (std::uint64_t q : primes) {
      if (!below_z(static_cast<double>(q))) return false;
      if (q * q > a) break;
      if (a % q == 0) return true;
    }
    return a > 1 && below_z(static_cast<double>(a));  // a is 1 or prime here
  };
  CompensatedSum sum;
  for (std::size_t i = 0; i < primes.size() && primes[i] <= target.n; ++i) {
    const std::uint64_t p = primes[i];
    if (p == 2) continue;
    if (!sifted(target.shift(p))) sum += table.log_prime(i);
  }
  return sum.value();
}

RemainderResult remainder_sum(const SieveTarget& target, std::uint64_t d_cap, const PrimeTable& table,
                              double work_budget) {
  RemainderResult out;
  if (d_cap < 2) return out;
  if (target.n > table.limit()) throw RangeError("N exceeds prime table limit");
  const double work = static_cast<double>(d_cap) * static_cast<double>(table.prime_count(target.n));
  if (work > work_budget)
    throw ResourceError("remainder sum work estimate " + std::to_string(work) + " exceeds budget");
  CompensatedSum total;
  for (std::uint64_t d = 2; d <= d_cap; ++d) {
    const ResidueSums sums = residue_sums(target.n, d, table);
    RemainderRow row;
    row.d = d;
    row.l = target.residue_l(d);
    row.theta = sums.theta[row.l];
    row.coprime = gcd_u64(row.l, d) == 1;
    row.main_term = row.coprime ? static_cast<double>(target.n) / static_cast<double>(euler_phi(d)) : 0.0;
    row.r_d = row.theta - row.main_term;
    total += std::abs(row.r_d);
    out.rows.push_back(row);
  }
  out.total = total.value();
  return out;
}

SieveBoundReport bound_report(const SieveTarget& target, double y, double z, std::uint64_t d_cap,
                              const PrimeTable& table, const BoundOptions& options) {
  if (!(z >= 2.0)) throw DomainError("sieve level z must be >= 2");
  if (!(z <= std::sqrt(y) * (1.0 + kEndpointTol))) throw DomainError("need z <= y^(1/2)");
  SieveBoundReport r;
  r.n = target.n;
  r.kind = target.kind;
  r.z = z;
  r.y = y;
  r.u = std::log(y) / std::log(z);
  r.d_cap = d_cap;
  r.inclusive_z = options.sieve.inclusive_z;
  const RosserValues fF = rosser_fF(r.u);
  r.f_u = fF.f;
  r.F_u = fF.F.value_or(std::numeric_limits<double>::quiet_NaN());

  const std::uint64_t cutoff = options.constant_cutoff ? options.constant_cutoff
                                                       : std::min<std::uint64_t>(table.limit(), 1'000'000);
  r.c_of_n = singular_series(target.n, twin_prime_product(cutoff, table)).value;
  r.s_exact = s_exact(target, z, table, options.sieve);
  r.remainder_sum = remainder_sum(target, d_cap, table, options.work_budget).total;

  const double scale = 2.0 * std::exp(-kEulerGamma) * r.c_of_n * static_cast<double>(target.n) / std::log(z);
  r.lower_bound = scale * r.f_u;
  r.upper_bound = fF.F ? scale * *fF.F : std::numeric_limits<double>::quiet_NaN();
  const bool above = r.lower_bound - r.remainder_sum <= r.s_exact;
  const bool below = !fF.F || r.s_exact <= r.upper_bound + r.remainder_sum;
  r.within_bounds = above && below;
  return r;
}

}  // namespace h8
