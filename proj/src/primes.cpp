#include "h8/primes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <bit>

#include "h8/error.hpp"
#include "h8/parallel.hpp"

namespace h8 {

namespace {

std::vector<std::uint32_t> simple_sieve(std::uint32_t n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = std::uint64_t{i} * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t k = r / new_r;
    t = std::exchange(new_t, t - k * new_t);
    r = std::exchange(new_r, r - k * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t) % m;
}

void check_range(std::uint64_t x, const PrimeTable& table) {
  if (x > table.limit())
    throw RangeError("x = " + std::to_string(x) + " exceeds prime table limit " + std::to_string(table.limit()));
}

}  // namespace

PrimeTable PrimeTable::build(std::uint64_t limit, const PrimeTableOptions& options) {
  if (limit < 2) throw DomainError("prime table limit must be >= 2");
  if (limit > kMaxLimit) throw DomainError("prime table limit must be <= 10^9");
  if (options.segment_size < 128 || options.segment_size % 128 != 0)
    throw DomainError("segment_size must be a positive multiple of 128");

  const std::uint64_t words = limit / 128 + 1;
  const double est_primes = limit < 100 ? 30.0 : 1.15 * limit / std::log(static_cast<double>(limit));
  const double est_bytes = words * 8.0 + est_primes * (4.0 + 8.0) + options.segment_size;
  if (est_bytes > static_cast<double>(options.memory_budget_bytes))
    throw ResourceError("prime table up to " + std::to_string(limit) + " needs about " +
                        std::to_string(static_cast<std::uint64_t>(est_bytes)) + " bytes, budget is " +
                        std::to_string(options.memory_budget_bytes));

  PrimeTable t;
  t.limit_ = limit;
  t.segment_size_ = options.segment_size;
  t.bits_.assign(words, ~std::uint64_t{0});

  const auto base = simple_sieve(static_cast<std::uint32_t>(isqrt(limit)));
  // bit i of the odd bitmap stands for 2i + 1
  const std::uint64_t seg_words = options.segment_size / 128;
  const std::uint64_t n_segments = (words + seg_words - 1) / seg_words;
  parallel_for(n_segments, options.workers, [&](std::size_t s0, std::size_t s1) {
    for (std::size_t s = s0; s < s1; ++s) {
      const std::uint64_t w0 = s * seg_words;
      const std::uint64_t w1 = std::min(words, w0 + seg_words);
      const std::uint64_t i0 = w0 * 64, i1 = w1 * 64;
      std::uint64_t* seg = t.bits_.data();
      for (std::uint32_t p : base) {
        if (p == 2) continue;
        const std::uint64_t pp = std::uint64_t{p} * p;
        if ((pp >> 1) >= i1) break;
        std::uint64_t lo_n = 2 * i0 + 1;
        std::uint64_t m = std::max(pp, (lo_n + p - 1) / p * p);
        if (m % 2 == 0) m += p;
        for (std::uint64_t i = m >> 1; i < i1; i += p) seg[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
      }
    }
  });
  t.bits_[0] &= ~std::uint64_t{1};  // 1 is not prime
  // clear bits above limit
  for (std::uint64_t i = (limit + 1) / 2; i < words * 64; ++i)
    t.bits_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));

  t.primes_.reserve(static_cast<std::size_t>(est_primes));
  t.primes_.push_back(2);
  for (std::uint64_t w = 0; w < words; ++w) {
    std::uint64_t bits = t.bits_[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      bits &= bits - 1;
      t.primes_.push_back(static_cast<std::uint32_t>(2 * (w * 64 + b) + 1));
    }
  }
  t.logs_.resize(t.primes_.size());
  for (std::size_t i = 0; i < t.primes_.size(); ++i) t.logs_[i] = std::log(static_cast<double>(t.primes_[i]));

  for (std::uint32_t p : t.primes_) {
    if (std::uint64_t{p} * p > limit) break;
    for (std::uint64_t v = std::uint64_t{p} * p; v <= limit; v *= p) {
      t.powers_.push_back({v, p});
      if (v > limit / p) break;
    }
  }
  std::sort(t.powers_.begin(), t.powers_.end(), [](const PrimePower& a, const PrimePower& b) { return a.value < b.value; });
  return t;
}

std::uint64_t PrimeTable::prime_count(std::uint64_t x) const {
  if (x > limit_) throw RangeError("x exceeds prime table limit");
  return static_cast<std::uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

double PrimeTable::von_mangoldt(std::uint64_t n) const {
  if (n > limit_) throw RangeError("n exceeds prime table limit");
  if (is_prime(n)) return std::log(static_cast<double>(n));
  auto it = std::lower_bound(powers_.begin(), powers_.end(), n,
                             [](const PrimePower& a, std::uint64_t v) { return a.value < v; });
  if (it != powers_.end() && it->value == n) return std::log(static_cast<double>(it->prime));
  return 0.0;
}

ChebyshevSnapshot chebyshev_snapshot(std::uint64_t x, const PrimeTable& table) {
  check_range(x, table);
  CompensatedSum psi, theta;
  std::uint64_t pi = 0;
  table.for_each_prime_power(x, [&](std::uint64_t n, double lp) {
    psi += lp;
    if (table.is_prime(n)) {
      theta += lp;
      ++pi;
    }
  });
  return {psi.value(), theta.value(), pi};
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw DomainError("phi(0) undefined");
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

ResidueSums residue_sums(std::uint64_t y, std::uint64_t q, const PrimeTable& table) {
  check_range(y, table);
  if (q < 1) throw DomainError("modulus must be >= 1");
  std::vector<CompensatedSum> psi(q), theta(q);
  table.for_each_prime_power(y, [&](std::uint64_t n, double lp) {
    const std::uint64_t r = n % q;
    psi[r] += lp;
    if (n > 2 && table.is_prime(n)) theta[r] += lp;
  });
  ResidueSums out;
  out.psi.resize(q);
  out.theta.resize(q);
  for (std::uint64_t r = 0; r < q; ++r) {
    out.psi[r] = psi[r].value();
    out.theta[r] = theta[r].value();
  }
  return out;
}

namespace {

APErrorRecord make_record(std::uint64_t x, std::uint64_t q, std::uint64_t l, std::uint64_t b, double psi, double theta,
                          std::uint64_t phi_q) {
  APErrorRecord r;
  r.x = x;
  r.q = q;
  r.l = l;
  r.b = b;
  r.psi_val = psi;
  r.theta_val = theta;
  r.main_term = (static_cast<double>(x) / static_cast<double>(b)) / static_cast<double>(phi_q);
  r.e_psi = psi - r.main_term;
  r.e_theta = theta - r.main_term;
  return r;
}

// residue of n with b n = l (mod q), or nullopt when no n exists
std::optional<std::uint64_t> scaled_residue(std::uint64_t q, std::uint64_t l, std::uint64_t b) {
  if (gcd_u64(b, q) != 1) return std::nullopt;
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(l % q) * inverse_mod(b % q, q)) % q);
}

}  // namespace

APErrorRecord ap_error(std::uint64_t x, std::uint64_t q, std::uint64_t l, std::uint64_t b, const PrimeTable& table) {
  if (q < 2) throw DomainError("modulus must be >= 2");
  if (b < 1) throw DomainError("scale b must be >= 1");
  if (gcd_u64(l % q, q) != 1) throw DomainError("gcd(l, q) must be 1");
  if (2 * b > x) throw DomainError("need 2b <= x");
  check_range(x, table);
  const std::uint64_t y = x / b;
  const auto r = scaled_residue(q, l, b);
  CompensatedSum psi, theta;
  if (r) {
    table.for_each_prime_power(y, [&](std::uint64_t n, double lp) {
      if (n % q != *r) return;
      psi += lp;
      if (n > 2 && table.is_prime(n)) theta += lp;
    });
  }
  return make_record(x, q, l % q, b, psi.value(), theta.value(), euler_phi(q));
}

ComplexValue psi_chi(std::uint64_t x, const Character& chi, const PrimeTable& table) {
  check_range(x, table);
  CompensatedSum re, im;
  table.for_each_prime_power(x, [&](std::uint64_t n, double lp) {
    const ComplexValue v = chi(static_cast<std::int64_t>(n));
    if (v == ComplexValue{}) return;
    re += lp * v.real();
    im += lp * v.imag();
  });
  return {re.value(), im.value()};
}

ScanResult error_scan(std::uint64_t x, std::uint64_t d_cap, const ScanOptions& options, const PrimeTable& table) {
  if (d_cap < 2) throw DomainError("d_cap must be >= 2");
  if (d_cap > x) throw DomainError("d_cap must not exceed x");
  if (options.b_cap < 1) throw DomainError("b_cap must be >= 1");
  if (x < 4) throw DomainError("x must be >= 4");
  check_range(x, table);
  const std::uint64_t b_cap = std::min(options.b_cap, x / 2);

  const double logx = std::log(static_cast<double>(x));
  double work = 0.0;
  for (std::uint64_t b = 1; b <= b_cap; ++b) work += static_cast<double>(x / b) / std::max(1.0, std::log(double(x / b)));
  work *= static_cast<double>(d_cap - 1);
  if (work > options.work_budget)
    throw ResourceError("error scan work estimate " + std::to_string(work) + " exceeds budget " +
                        std::to_string(options.work_budget));

  const std::uint64_t n_q = d_cap - 1;
  std::vector<std::vector<ScanRow>> per_q(n_q);
  parallel_for(n_q, options.workers, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const std::uint64_t q = i + 2;
      const std::uint64_t phi_q = euler_phi(q);
      auto& rows = per_q[i];
      for (std::uint64_t b = 1; b <= b_cap; ++b) {
        if (gcd_u64(b, q) != 1) continue;  // b n = l has no solution for a unit l
        const ResidueSums sums = residue_sums(x / b, q, table);
        auto record_for = [&](std::uint64_t l) {
          const auto r = scaled_residue(q, l, b);
          const double psi = r ? sums.psi[*r] : 0.0;
          const double theta = r ? sums.theta[*r] : 0.0;
          return make_record(x, q, l, b, psi, theta, phi_q);
        };
        APErrorRecord best = record_for(1);
        if (options.policy == LPolicy::max_over_l) {
          for (std::uint64_t l = 2; l < q; ++l) {
            if (gcd_u64(l, q) != 1) continue;
            APErrorRecord cand = record_for(l);
            if (std::abs(cand.e_psi) > std::abs(best.e_psi)) best = cand;
          }
        }
        ScanRow row{best, std::nullopt};
        if (b == 1 && q <= options.chi_cap) {
          double m = 0.0;
          for (const Character& chi : CharacterGroup(q).all()) {
            if (chi.is_principal) continue;
            CompensatedSum re, im;
            for (std::uint64_t a = 1; a < q; ++a) {
              const ComplexValue v = chi(static_cast<std::int64_t>(a));
              re += v.real() * sums.psi[a];
              im += v.imag() * sums.psi[a];
            }
            m = std::max(m, std::abs(ComplexValue{re.value(), im.value()}));
          }
          row.max_abs_psi_chi = m;
        }
        rows.push_back(row);
      }
    }
  });

  ScanResult out;
  CompensatedSum total;
  for (auto& rows : per_q)
    for (auto& row : rows) {
      total += std::abs(row.record.e_psi);
      out.rows.push_back(row);
    }
  auto& s = out.summary;
  s.x = x;
  s.d_cap = d_cap;
  s.policy = options.policy;
  s.total = total.value();
  s.a_exponent = options.a_exponent;
  s.b_exponent = options.b_exponent;
  s.comparison = static_cast<double>(x) / std::pow(logx, options.a_exponent);
  s.suggested_d_cap = static_cast<double>(x) / std::pow(logx, options.b_exponent);
  s.b_cap = b_cap;
  return out;
}

IdentityReport theta_psi_probe(std::uint64_t x, std::uint64_t q_max, const PrimeTable& table) {
  if (q_max < 2) throw DomainError("q_max must be >= 2");
  check_range(x, table);
  IdentityReport report;
  report.identity_id = IdentityId::THETA_PSI_EQUIV;
  report.context = "x=" + std::to_string(x);
  report.tolerance = default_tolerance(IdentityId::THETA_PSI_EQUIV);
  for (std::uint64_t q = 2; q <= q_max; ++q) {
    const ResidueSums sums = residue_sums(x, q, table);
    const double main = static_cast<double>(x) / static_cast<double>(euler_phi(q));
    for (std::uint64_t l = 1; l < q; ++l) {
      if (gcd_u64(l, q) != 1) continue;
      const double et = std::abs(sums.theta[l] - main);
      const double ep = std::abs(sums.psi[l] - main);
      report.add(std::vector<double>{double(x), double(q), double(l)}, std::abs(et - ep), et - ep);
    }
  }
  report.finalize();
  return report;
}

SingularSeries twin_prime_product(std::uint64_t cutoff, const PrimeTable& table) {
  if (cutoff < 3) throw DomainError("cutoff must be >= 3");
  check_range(cutoff, table);
  double prod = 1.0;
  for (std::uint32_t p : table.primes()) {
    if (p > cutoff) break;
    if (p == 2) continue;
    const double d = static_cast<double>(p) - 1.0;
    prod *= 1.0 - 1.0 / (d * d);
  }
  // sum_{p > cutoff} 1/(p-1)^2 <= 1/(cutoff - 1) bounds the relative deficit
  return {prod, prod / (static_cast<double>(cutoff) - 1.0)};
}

SingularSeries singular_series(std::uint64_t n, const SingularSeries& infinite_part) {
  if (n == 0) throw DomainError("C(N) needs N >= 1");
  double factor = 1.0;
  while (n % 2 == 0) n /= 2;
  for (std::uint64_t p = 3; p * p <= n; p += 2) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    factor *= (static_cast<double>(p) - 1.0) / (static_cast<double>(p) - 2.0);
  }
  if (n > 1) factor *= (static_cast<double>(n) - 1.0) / (static_cast<double>(n) - 2.0);
  return {factor * infinite_part.value, factor * infinite_part.tail_bound};
}

double mertens_interval_sum(std::uint64_t n, const PrimeTable& table) {
  if (n < 1) throw DomainError("N must be >= 1");
  const std::uint64_t lo = icbrt_ceil(n), hi = isqrt(n);
  check_range(hi, table);
  CompensatedSum sum;
  for (std::uint32_t p : table.primes()) {
    if (p > hi) break;
    if (p >= lo) sum += 1.0 / static_cast<double>(p);
  }
  return sum.value();
}

ArithmeticConstants arithmetic_constants(std::uint64_t n, std::uint64_t cutoff, const PrimeTable& table) {
  if (n < 2 || n % 2 != 0) throw DomainError("C(N) requires even N");
  const SingularSeries c = singular_series(n, twin_prime_product(cutoff, table));
  return {euler_phi(n), c.value, c.tail_bound, mertens_interval_sum(n, table)};
}

}  // namespace h8
