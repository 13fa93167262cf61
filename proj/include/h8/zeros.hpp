#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "h8/special_functions.hpp"

namespace h8 {

enum class ZeroSource { zeta_internal, external_file };

const char* to_string(ZeroSource s);

struct ZeroSet {
  ZeroSource source = ZeroSource::zeta_internal;
  std::string label = "zeta";
  std::vector<double> ordinates;  // strictly increasing, in (0, height_bound]
  double height_bound = 0.0;
  bool count_certified = false;
};

struct ThetaZ {
  double theta;
  double z_value;
};

/// Riemann-Siegel theta and Hardy's Z at height t >= 0.
ThetaZ rs_theta_and_Z(double t, const EvalConfig& cfg = {});

struct ZeroSearchOptions {
  double grid_step = 0.05;
  double bisection_tolerance = 1e-9;
  unsigned workers = 1;
};

/// All sign changes of Z on (0, T], each refined by bisection. 0 < T <= 500.
ZeroSet find_zeta_zeros(double T, const EvalConfig& cfg = {}, const ZeroSearchOptions& options = {});

struct ZeroCountCheck {
  double expected_count;
  std::size_t actual_count;
  bool certified;
};

/// Compares the number of ordinates with theta(T)/pi + 1.
ZeroCountCheck zero_count_check(const ZeroSet& zeros, const EvalConfig& cfg = {});

/// Reads one ordinate per line; '#' lines are comments, a "# label=..., T=..."
/// header supplies defaults for label and height bound.
ZeroSet load_zeros_csv(const std::filesystem::path& path, std::optional<std::string> label = std::nullopt,
                       std::optional<double> height_bound = std::nullopt);
ZeroSet parse_zeros_csv(std::istream& in, std::optional<std::string> label = std::nullopt,
                        std::optional<double> height_bound = std::nullopt);

void write_zeros_csv(const ZeroSet& zeros, std::ostream& out);

enum class ExplicitKind { zeta, character };

struct ExplicitFormulaRow {
  double x = 0.0;
  double truncation_T = 0.0;
  double exact_psi = 0.0;
  double formula_value = 0.0;
  double residual = 0.0;
  double bound_shape = 0.0;      // x log^2 x / T
  double signed_zero_sum = 0.0;  // sum over |gamma| <= T of x^rho/rho, both signs of gamma
  double abs_majorant = 0.0;     // sum over |gamma| <= T of x^{1/2}/(1+|gamma|)
  std::size_t zeros_used = 0;
};

/// Truncated explicit formula against an exact Chebyshev value. For zeta:
/// x - sum x^rho/rho - log 2pi - log(1 - x^-2)/2. For a real character: the
/// zero sum alone, compared with psi(x, chi).
ExplicitFormulaRow explicit_formula_check(double x, double truncation_T, const ZeroSet& zeros, double exact_psi,
                                          ExplicitKind kind = ExplicitKind::zeta);

}  // namespace h8
