#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "h8/characters.hpp"
#include "h8/identity_report.hpp"
#include "h8/numeric.hpp"

namespace h8 {

struct PrimeTableOptions {
  std::uint32_t segment_size = 1u << 18;  // numbers per segment, multiple of 128
  std::uint64_t memory_budget_bytes = 1ull << 30;
  unsigned workers = 1;
};

struct PrimePower {
  std::uint64_t value;  // p^m, m >= 2
  std::uint32_t prime;
};

/// Primality bitmap (odd numbers only) and prime list up to a limit, built by
/// a segmented sieve of Eratosthenes. Immutable once built.
class PrimeTable {
 public:
  static constexpr std::uint64_t kMaxLimit = 1'000'000'000;

  static PrimeTable build(std::uint64_t limit, const PrimeTableOptions& options = {});

  std::uint64_t limit() const { return limit_; }
  std::uint32_t segment_size() const { return segment_size_; }
  std::span<const std::uint32_t> primes() const { return primes_; }
  /// p^m <= limit with m >= 2, ascending.
  std::span<const PrimePower> prime_powers() const { return powers_; }

  bool is_prime(std::uint64_t n) const {
    if (n < 2 || n > limit_) return false;
    if (n % 2 == 0) return n == 2;
    return (bits_[n >> 7] >> ((n >> 1) & 63)) & 1u;
  }

  /// pi(x) for x <= limit.
  std::uint64_t prime_count(std::uint64_t x) const;

  /// Lambda(n): log p when n = p^m, else 0.
  double von_mangoldt(std::uint64_t n) const;

  /// Calls fn(n, log p) for every prime power n = p^m <= x in ascending order.
  template <class F>
  void for_each_prime_power(std::uint64_t x, F&& fn) const {
    std::size_t i = 0, j = 0;
    while (true) {
      const bool have_p = i < primes_.size() && primes_[i] <= x;
      const bool have_q = j < powers_.size() && powers_[j].value <= x;
      if (!have_p && !have_q) break;
      if (have_p && (!have_q || primes_[i] < powers_[j].value)) {
        fn(static_cast<std::uint64_t>(primes_[i]), logs_[i]);
        ++i;
      } else {
        fn(powers_[j].value, std::log(static_cast<double>(powers_[j].prime)));
        ++j;
      }
    }
  }

  /// log of the i-th prime.
  double log_prime(std::size_t i) const { return logs_[i]; }

 private:
  std::uint64_t limit_ = 0;
  std::uint32_t segment_size_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> primes_;
  std::vector<double> logs_;
  std::vector<PrimePower> powers_;
};

struct ChebyshevSnapshot {
  double psi;
  double theta;
  std::uint64_t pi;
};

/// psi(x), theta(x), pi(x) by exact accumulation. RangeError above the table.
ChebyshevSnapshot chebyshev_snapshot(std::uint64_t x, const PrimeTable& table);

/// Restricted Chebyshev sums for the progression b n = l (mod q), b n <= x.
/// theta counts primes 2 < p only. `main_term` = (x/b)/phi(q).
struct APErrorRecord {
  std::uint64_t x = 0;
  std::uint64_t q = 0;
  std::uint64_t l = 0;
  std::uint64_t b = 1;
  double psi_val = 0.0;
  double theta_val = 0.0;
  double main_term = 0.0;
  double e_psi = 0.0;
  double e_theta = 0.0;
};

APErrorRecord ap_error(std::uint64_t x, std::uint64_t q, std::uint64_t l, std::uint64_t b, const PrimeTable& table);

/// Per-residue restricted sums for one modulus: psi[r] = psi(y; q, r) and
/// theta[r] = theta(y; q, r) for every r in [0, q).
struct ResidueSums {
  std::vector<double> psi;
  std::vector<double> theta;
};

ResidueSums residue_sums(std::uint64_t y, std::uint64_t q, const PrimeTable& table);

/// psi(x, chi) = sum_{n <= x} Lambda(n) chi(n).
ComplexValue psi_chi(std::uint64_t x, const Character& chi, const PrimeTable& table);

enum class LPolicy { fixed_l, max_over_l };

struct ScanOptions {
  LPolicy policy = LPolicy::max_over_l;
  double a_exponent = 1.0;
  double b_exponent = 3.0;
  std::uint64_t b_cap = 1;  // 1: single modulus sum; > 1: also sum over scales b
  std::uint64_t chi_cap = 100;  // max_chi |psi(x, chi)| column only for q <= chi_cap
  unsigned workers = 1;
  double work_budget = 4e9;
};

struct ScanSummary {
  std::uint64_t x = 0;
  std::uint64_t d_cap = 0;
  LPolicy policy = LPolicy::max_over_l;
  double total = 0.0;       // sum of |E| over all rows
  double comparison = 0.0;  // x / log^A x
  double a_exponent = 0.0;
  double b_exponent = 0.0;
  double suggested_d_cap = 0.0;  // x / log^B x
  std::uint64_t b_cap = 1;
};

struct ScanRow {
  APErrorRecord record;
  /// max over non-principal chi mod q of |psi(x, chi)|; b = 1 rows with q <= chi_cap only.
  std::optional<double> max_abs_psi_chi;
};

struct ScanResult {
  ScanSummary summary;
  std::vector<ScanRow> rows;  // ordered by (q, b)
};

ScanResult error_scan(std::uint64_t x, std::uint64_t d_cap, const ScanOptions& options, const PrimeTable& table);

/// Compares |theta(x;q,l) - x/phi(q)| with |psi(x;q,l) - x/phi(q)| for all
/// units l mod q, 2 <= q <= q_max. Sample points are (x, q, l).
IdentityReport theta_psi_probe(std::uint64_t x, std::uint64_t q_max, const PrimeTable& table);

std::uint64_t euler_phi(std::uint64_t n);

struct SingularSeries {
  double value;
  double tail_bound;  // absolute bound on the truncation error of the infinite product
};

/// prod_{2<p<=cutoff} (1 - 1/(p-1)^2); cutoff <= table.limit().
SingularSeries twin_prime_product(std::uint64_t cutoff, const PrimeTable& table);

/// C(N) = prod_{2<p|N} (p-1)/(p-2) times the truncated infinite product.
/// Accepts any N >= 1.
SingularSeries singular_series(std::uint64_t n, const SingularSeries& infinite_part);

/// sum of 1/p over primes N^{1/3} <= p <= N^{1/2}.
double mertens_interval_sum(std::uint64_t n, const PrimeTable& table);

struct ArithmeticConstants {
  std::uint64_t phi;
  double c_of_n;
  double c_tail_bound;
  double mertens_sum;
};

/// phi(N), C(N) (N even) and the Mertens interval sum in one call.
ArithmeticConstants arithmetic_constants(std::uint64_t n, std::uint64_t cutoff, const PrimeTable& table);

}  // namespace h8
