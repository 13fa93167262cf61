#include "h8/goldbach_twin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "h8/error.hpp"
#include "h8/parallel.hpp"
#include "h8/sieve_lab.hpp"

namespace h8 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t cutoff_for(const GoldbachOptions& o, const PrimeTable& table) {
  return o.constant_cutoff ? o.constant_cutoff : std::min<std::uint64_t>(table.limit(), 1'000'000);
}

double bound_for(std::uint64_t n, double c_of_n) {
  const double x = static_cast<double>(n);
  return goldbach_constant() * c_of_n * x / std::log(x);
}

struct ThreeTerm {
  double s_lower;
  double middle;
};

// S(A, N^(1/3)) and the sum over N^(1/3) <= p <= N^(1/2) of S(A(p), N^(1/3))
ThreeTerm three_term(std::uint64_t n, const PrimeTable& table) {
  const auto primes = table.primes();
  std::size_t n_small = 0;  // sifting primes p with p^3 < N
  while (n_small < primes.size() && std::uint64_t{primes[n_small]} * primes[n_small] * primes[n_small] < n) ++n_small;
  const std::uint64_t root = isqrt(n);
  CompensatedSum lower, middle;
  for (std::size_t i = 1; i < primes.size() && primes[i] < n; ++i) {
    const std::uint64_t a = n - primes[i];
    bool sifted = false;
    for (std::size_t j = 0; j < n_small; ++j) {
      if (a % primes[j] == 0) {
        sifted = true;
        break;
      }
    }
    if (sifted) continue;
    const double lp = table.log_prime(i);
    lower += lp;
    if (a == 1) continue;
    // every prime factor of a is >= N^(1/3) and a < N, so a is p or p*q
    if (table.is_prime(a)) {
      if (a <= root) middle += lp;
      continue;
    }
    for (std::size_t j = n_small; j < primes.size() && std::uint64_t{primes[j]} * primes[j] <= a; ++j) {
      const std::uint64_t p = primes[j];
      if (a % p) continue;
      middle += lp;
      const std::uint64_t other = a / p;
      if (other != p && other <= root) middle += lp;
      break;
    }
  }
  return {lower.value(), middle.value()};
}

void finish_goldbach(GoldbachRecord& r, const SingularSeries& inf) {
  r.c_of_n = singular_series(r.n, inf).value;
  r.bound_value = bound_for(r.n, r.c_of_n);
  r.ratio = r.weighted_sum / r.bound_value;
}

void finish_twin(TwinRecord& r, const SingularSeries& inf) {
  r.c_of_n = singular_series(r.n, inf).value;
  r.bound_value = bound_for(r.n, r.c_of_n);
  r.ratio = r.weighted_sum / r.bound_value;
  r.hl_ratio = static_cast<double>(r.pair_count) / hardy_littlewood_twin(r.n, singular_series(2, inf).value);
}

void check_n(std::uint64_t n, const PrimeTable& table) {
  if (n > table.limit()) throw RangeError("N = " + std::to_string(n) + " exceeds prime table limit");
}

}  // namespace

double goldbach_constant() { return 4.0 * (2.0 * std::log(2.0) - std::log(3.0)); }

double hardy_littlewood_twin(std::uint64_t n, double c2) {
  if (n <= 2) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  auto f = [](double t) {
    const double l = std::log(t);
    return 1.0 / (l * l);
  };
  const double integral = gauss_kronrod<double, 61>::integrate(f, 2.0, static_cast<double>(n), 15, 1e-12);
  return 2.0 * c2 * integral;
}

GoldbachRecord evaluate_even(std::uint64_t n, const PrimeTable& table, const GoldbachOptions& options) {
  if (n < 6 || n % 2) throw DomainError("Goldbach evaluation needs even N >= 6");
  check_n(n, table);
  GoldbachRecord r;
  r.n = n;
  const auto primes = table.primes();
  CompensatedSum w;
  for (std::size_t i = 1; i < primes.size() && primes[i] < n; ++i) {
    if (!table.is_prime(n - primes[i])) continue;
    w += table.log_prime(i);
    ++r.pair_count_ordered;
  }
  r.weighted_sum = w.value();
  finish_goldbach(r, twin_prime_product(cutoff_for(options, table), table));
  r.pair_count_unordered = (r.pair_count_ordered + (table.is_prime(n / 2) ? 1 : 0)) / 2;
  const ThreeTerm t = three_term(n, table);
  r.s_lower = t.s_lower;
  r.middle_term = t.middle;
  return r;
}

TwinRecord evaluate_twin(std::uint64_t n, const PrimeTable& table, const GoldbachOptions& options) {
  if (n < 6) throw DomainError("twin evaluation needs N >= 6");
  check_n(n, table);
  TwinRecord r;
  r.n = n;
  const auto primes = table.primes();
  CompensatedSum w;
  for (std::size_t i = 1; i < primes.size() && primes[i] <= n; ++i) {
    if (!table.is_prime(primes[i] - 2)) continue;
    w += table.log_prime(i);
    ++r.pair_count;
  }
  r.weighted_sum = w.value();
  finish_twin(r, twin_prime_product(cutoff_for(options, table), table));
  return r;
}

RangeScan scan_range(std::uint64_t n_start, std::uint64_t n_end, std::uint64_t step, TargetKind kind,
                     const PrimeTable& table, const GoldbachOptions& options) {
  if (n_start < 6) throw DomainError("scan range must start at N >= 6");
  if (n_end < n_start) throw DomainError("scan range end below start");
  if (step < 1) throw DomainError("scan step must be >= 1");
  check_n(n_end, table);
  const SingularSeries inf = twin_prime_product(cutoff_for(options, table), table);
  RangeScan out;
  out.kind = kind;
  const auto primes = table.primes();

  if (kind == TargetKind::goldbach) {
    if (n_start % 2 || step % 2) throw DomainError("Goldbach scan needs even start and even step");
    const double pi_end = static_cast<double>(table.prime_count(n_end));
    if (pi_end * pi_end / 2.0 > options.work_budget)
      throw ResourceError("Goldbach scan work estimate exceeds budget");
    const std::size_t m = (n_end - n_start) / 2 + 1;  // every even N in range
    std::vector<double> w(m, 0.0);
    std::vector<std::uint32_t> cnt(m, 0);
    const std::size_t first_odd = 1, n_primes = primes.size();
    parallel_for(m, options.workers, [&](std::size_t k0, std::size_t k1) {
      const std::uint64_t lo = n_start + 2 * k0, hi = n_start + 2 * (k1 - 1);
      for (std::size_t a = first_odd; a < n_primes; ++a) {
        const std::uint64_t p = primes[a];
        if (2 * p > hi) break;
        const double lp = table.log_prime(a);
        const std::uint64_t qmin = std::max(p, lo > p ? lo - p : 0);
        auto it = std::lower_bound(primes.begin() + a, primes.end(), qmin);
        for (std::size_t b = static_cast<std::size_t>(it - primes.begin()); b < n_primes; ++b) {
          const std::uint64_t s = p + primes[b];
          if (s > hi) break;
          const std::size_t k = (s - n_start) / 2;
          if (b == a) {
            cnt[k] += 1;
            w[k] += lp;
          } else {
            cnt[k] += 2;
            w[k] += lp + table.log_prime(b);
          }
        }
      }
    });
    for (std::uint64_t n = n_start; n <= n_end; n += step) {
      const std::size_t k = (n - n_start) / 2;
      GoldbachRecord r;
      r.n = n;
      r.weighted_sum = w[k];
      r.pair_count_ordered = cnt[k];
      out.goldbach.push_back(r);
    }
    parallel_for(out.goldbach.size(), options.workers, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) {
        GoldbachRecord& r = out.goldbach[i];
        finish_goldbach(r, inf);
        r.pair_count_unordered = (r.pair_count_ordered + (table.is_prime(r.n / 2) ? 1 : 0)) / 2;
        if (r.n <= options.sieve_columns_max_n) {
          const ThreeTerm t = three_term(r.n, table);
          r.s_lower = t.s_lower;
          r.middle_term = t.middle;
        } else {
          r.s_lower = kNaN;
          r.middle_term = kNaN;
        }
      }
    });
  } else {
    CompensatedSum w;
    std::uint64_t count = 0;
    std::size_t i = 1;
    for (std::uint64_t n = n_start; n <= n_end; n += step) {
      for (; i < primes.size() && primes[i] <= n; ++i) {
        if (!table.is_prime(primes[i] - 2)) continue;
        w += table.log_prime(i);
        ++count;
      }
      TwinRecord r;
      r.n = n;
      r.weighted_sum = w.value();
      r.pair_count = count;
      out.twin.push_back(r);
      if (n_end - n < step) break;
    }
    parallel_for(out.twin.size(), options.workers, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t k = i0; k < i1; ++k) finish_twin(out.twin[k], inf);
    });
  }

  auto& s = out.summary;
  s.min_ratio = kNaN;
  auto visit = [&](std::uint64_t n, std::uint64_t pairs, double ratio) {
    ++s.records;
    if (pairs == 0) s.violations.push_back(n);
    if (n >= 10'000 && (std::isnan(s.min_ratio) || ratio < s.min_ratio)) {
      s.min_ratio = ratio;
      s.min_ratio_n = n;
    }
  };
  for (const auto& r : out.goldbach) visit(r.n, r.pair_count_ordered, r.ratio);
  for (const auto& r : out.twin) visit(r.n, r.pair_count, r.ratio);
  return out;
}

Reconciliation reconcile_goldbach(std::uint64_t n, const PrimeTable& table) {
  if (n < 6 || n % 2) throw DomainError("reconciliation needs even N >= 6");
  check_n(n, table);
  Reconciliation r;
  r.n = n;
  const std::uint64_t z = isqrt(n) + 1;
  r.z = static_cast<double>(z);
  r.s_exact = s_exact(SieveTarget::goldbach(n), r.z, table);
  const GoldbachRecord g = evaluate_even(n, table);
  const auto primes = table.primes();
  CompensatedSum rec;
  rec += g.weighted_sum;
  for (std::size_t i = 1; i < primes.size() && primes[i] < n; ++i) {
    const std::uint64_t a = n - primes[i];
    if (a < z && table.is_prime(a)) rec += -table.log_prime(i);
  }
  if (table.is_prime(n - 1)) rec += std::log(static_cast<double>(n - 1));
  r.reconstructed = rec.value();
  r.difference = r.s_exact - r.reconstructed;
  return r;
}

}  // namespace h8
