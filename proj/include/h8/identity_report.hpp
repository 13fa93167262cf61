#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "h8/numeric.hpp"

namespace h8 {

enum class IdentityId {
  FE_ZETA,
  FE_L,
  LOGDERIV_ZETA,
  LOGDERIV_L,
  AFORM_CLOSED_VS_ORACLE,
  SYMMETRY_SERIES,
  THETA_PSI_EQUIV,
};

enum class Verdict { holds, fails, inconclusive };

std::string_view to_string(IdentityId id);
std::string_view to_string(Verdict v);

/// A probe location: a complex point, or a tuple of reals (e.g. (x, q, l)).
using SamplePoint = std::variant<ComplexValue, std::vector<double>>;

struct SkippedPoint {
  SamplePoint point;
  std::string reason;
};

/// Result of one identity probe. `residuals[i]` belongs to `sample_points[i]`;
/// `signed_deltas[i]`, when present, is lhs - rhs before taking the modulus.
/// Points that could not be evaluated go to `skipped`, never silently dropped.
struct IdentityReport {
  IdentityId identity_id = IdentityId::FE_ZETA;
  std::string context;
  std::vector<SamplePoint> sample_points;
  std::vector<double> residuals;
  std::vector<ComplexValue> signed_deltas;
  std::vector<SkippedPoint> skipped;
  double max_residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::inconclusive;

  void add(SamplePoint p, double residual, ComplexValue signed_delta);
  void skip(SamplePoint p, std::string reason);
  /// Recomputes max_residual and the verdict from the residual list.
  void finalize();
};

/// Concatenates b onto a (same identity) and re-derives the verdict.
/// Associative; commutative up to row order.
IdentityReport merge(IdentityReport a, const IdentityReport& b);

}  // namespace h8
