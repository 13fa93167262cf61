#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "h8/primes.hpp"

namespace h8 {

enum class SieveKind { goldbach, twin };

const char* to_string(SieveKind k);

/// The shifted prime set A = {shift(p) : 2 < p <= N}: N - p for goldbach
/// (N even), p + 2 for twin.
struct SieveTarget {
  SieveKind kind = SieveKind::goldbach;
  std::uint64_t n = 0;

  static SieveTarget goldbach(std::uint64_t n);
  static SieveTarget twin(std::uint64_t n);

  std::uint64_t shift(std::uint64_t p) const { return kind == SieveKind::goldbach ? n - p : p + 2; }
  /// l in theta(N; d, l): N mod d for goldbach, 2 mod d for twin.
  std::uint64_t residue_l(std::uint64_t d) const { return kind == SieveKind::goldbach ? n % d : 2 % d; }
};

double rosser_f(double u);  // 2 <= u <= 4
double rosser_F(double u);  // 2 <= u <= 3

struct RosserValues {
  double f;
  std::optional<double> F;  // empty for 3 < u <= 4
};

/// Both boundary functions; DomainError outside [2, 4].
RosserValues rosser_fF(double u);

struct SieveOptions {
  bool inclusive_z = false;  // P(z) over p <= z instead of p < z
};

/// S(A, z): sum of log p over 2 < p <= N whose shift has no prime factor below z.
double s_exact(const SieveTarget& target, double z, const PrimeTable& table, const SieveOptions& options = {});

struct RemainderRow {
  std::uint64_t d;
  std::uint64_t l;
  double theta;
  double main_term;  // N/phi(d), or 0 when gcd(d, l) > 1
  double r_d;
  bool coprime;
};

struct RemainderResult {
  double total = 0.0;
  std::vector<RemainderRow> rows;  // ascending d
};

/// sum over 2 <= d <= d_cap of |theta(N; d, l) - N/phi(d)|.
RemainderResult remainder_sum(const SieveTarget& target, std::uint64_t d_cap, const PrimeTable& table,
                              double work_budget = 4e9);

struct SieveBoundReport {
  std::uint64_t n = 0;
  SieveKind kind = SieveKind::goldbach;
  double z = 0.0;
  double y = 0.0;
  double u = 0.0;
  std::uint64_t d_cap = 0;
  double c_of_n = 0.0;
  double s_exact = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;  // NaN when F(u) is undefined
  double remainder_sum = 0.0;
  double f_u = 0.0;
  double F_u = 0.0;  // NaN when undefined
  bool within_bounds = false;
  bool main_term_only = true;  // 1 + O(1/log z) factors set to 1
  bool inclusive_z = false;
};

struct BoundOptions {
  SieveOptions sieve;
  std::uint64_t constant_cutoff = 0;  // 0: min(table limit, 10^6)
  double work_budget = 4e9;
};

SieveBoundReport bound_report(const SieveTarget& target, double y, double z, std::uint64_t d_cap,
                              const PrimeTable& table, const BoundOptions& options = {});

}  // namespace h8
