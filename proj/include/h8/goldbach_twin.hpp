#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "h8/primes.hpp"

namespace h8 {

/// 4(2 log 2 - log 3)
double goldbach_constant();

struct GoldbachRecord {
  std::uint64_t n = 0;
  double weighted_sum = 0.0;  // sum of log p over 2 < p < N with N - p prime
  std::uint64_t pair_count_ordered = 0;
  std::uint64_t pair_count_unordered = 0;
  double c_of_n = 0.0;
  double bound_value = 0.0;
  double ratio = 0.0;
  double middle_term = 0.0;  // sum over N^(1/3) <= p <= N^(1/2) of S(A(p), N^(1/3)); NaN if not computed
  double s_lower = 0.0;      // S(A, N^(1/3)); NaN if not computed
};

struct TwinRecord {
  std::uint64_t n = 0;
  double weighted_sum = 0.0;  // sum of log p over primes p <= N with p - 2 prime
  std::uint64_t pair_count = 0;
  double c_of_n = 0.0;
  double bound_value = 0.0;
  double ratio = 0.0;
  double hl_ratio = 0.0;
};

struct GoldbachOptions {
  std::uint64_t constant_cutoff = 0;  // 0: min(table limit, 10^6)
  std::uint64_t sieve_columns_max_n = 20'000;  // s_lower/middle_term only for N up to this
  unsigned workers = 1;
  double work_budget = 4e9;
};

GoldbachRecord evaluate_even(std::uint64_t n, const PrimeTable& table, const GoldbachOptions& options = {});
TwinRecord evaluate_twin(std::uint64_t n, const PrimeTable& table, const GoldbachOptions& options = {});

/// 2 C(2) times the integral of 1/log^2 t over [2, N].
double hardy_littlewood_twin(std::uint64_t n, double c2);

enum class TargetKind { goldbach, twin };

struct RangeSummary {
  std::size_t records = 0;
  double min_ratio = 0.0;  // over N >= 10^4; NaN when no such N
  std::uint64_t min_ratio_n = 0;
  std::vector<std::uint64_t> violations;  // N with pair count 0
};

struct RangeScan {
  TargetKind kind = TargetKind::goldbach;
  std::vector<GoldbachRecord> goldbach;
  std::vector<TwinRecord> twin;
  RangeSummary summary;
};

/// Records for N = n_start, n_start + step, ... <= n_end. Goldbach needs
/// n_start and step even.
RangeScan scan_range(std::uint64_t n_start, std::uint64_t n_end, std::uint64_t step, TargetKind kind,
                     const PrimeTable& table, const GoldbachOptions& options = {});

struct Reconciliation {
  std::uint64_t n = 0;
  double z = 0.0;  // floor(sqrt N) + 1
  double s_exact = 0.0;
  double reconstructed = 0.0;  // weighted_sum - terms with N - p prime below z + [N - 1 prime] log(N - 1)
  double difference = 0.0;
};

Reconciliation reconcile_goldbach(std::uint64_t n, const PrimeTable& table);

}  // namespace h8
