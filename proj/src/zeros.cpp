#include "h8/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

#include "h8/error.hpp"
#include "h8/format.hpp"
#include "h8/parallel.hpp"

namespace h8 {

const char* to_string(ZeroSource s) {
  return s == ZeroSource::zeta_internal ? "zeta_internal" : "external_file";
}

ThetaZ rs_theta_and_Z(double t, const EvalConfig& cfg) {
  if (!(t >= 0.0)) throw DomainError("rs_theta_and_Z needs t >= 0");
  const double theta = log_gamma(ComplexValue{0.25, 0.5 * t}).imag() - 0.5 * t * std::log(kPi);
  const ComplexValue z = std::polar(1.0, theta) * riemann_zeta(ComplexValue{0.5, t}, cfg);
  return {theta, z.real()};
}

namespace {

double z_at(double t, const EvalConfig& cfg) { return rs_theta_and_Z(t, cfg).z_value; }

double bisect(double lo, double hi, double zlo, double tol, const EvalConfig& cfg) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double zm = z_at(mid, cfg);
    if (zm == 0.0) return mid;
    if ((zm < 0) == (zlo < 0)) {
      lo = mid;
      zlo = zm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// sign changes of Z on the points t[0..n), each bisected
std::vector<double> roots_on_grid(const std::vector<double>& t, const std::vector<double>& z, double tol,
                                  const EvalConfig& cfg, unsigned workers) {
  std::vector<std::size_t> cells;
  for (std::size_t k = 0; k + 1 < t.size(); ++k)
    if ((z[k] < 0) != (z[k + 1] < 0) && z[k] != 0.0) cells.push_back(k);
  std::vector<double> roots(cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const std::size_t k = cells[i];
      roots[i] = z[k + 1] == 0.0 ? t[k + 1] : bisect(t[k], t[k + 1], z[k], tol, cfg);
    }
  });
  return roots;
}

std::vector<double> eval_grid(const std::vector<double>& t, const EvalConfig& cfg, unsigned workers) {
  std::vector<double> z(t.size());
  parallel_for(t.size(), workers, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) z[i] = z_at(t[i], cfg);
  });
  return z;
}

}  // namespace

ZeroSet find_zeta_zeros(double T, const EvalConfig& cfg, const ZeroSearchOptions& options) {
  if (!(T > 0.0) || T > 500.0) throw DomainError("zero search height must be in (0, 500]");
  if (!(options.grid_step > 0.0) || options.grid_step > 0.05) throw DomainError("grid step must be in (0, 0.05]");
  if (!(options.bisection_tolerance > 0.0)) throw DomainError("bisection tolerance must be positive");

  const auto n = static_cast<std::size_t>(std::ceil(T / options.grid_step));
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = std::min(T, static_cast<double>(k) * options.grid_step);
  const std::vector<double> z = eval_grid(t, cfg, options.workers);
  std::vector<double> roots = roots_on_grid(t, z, options.bisection_tolerance, cfg, options.workers);

  ZeroSet out;
  out.source = ZeroSource::zeta_internal;
  out.label = "zeta";
  out.height_bound = T;
  out.ordinates = roots;
  auto check = zero_count_check(out, cfg);

  if (!check.certified && check.actual_count < check.expected_count) {
    // a pair of close zeros hides inside a cell where |Z| dips without a sign change
    std::vector<double> extra;
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
      if ((z[k - 1] < 0) != (z[k] < 0) || (z[k] < 0) != (z[k + 1] < 0)) continue;
      if (!(std::abs(z[k]) < std::abs(z[k - 1]) && std::abs(z[k]) < std::abs(z[k + 1]))) continue;
      std::vector<double> ft;
      for (int j = 0; j <= 32; ++j) ft.push_back(t[k - 1] + (t[k + 1] - t[k - 1]) * j / 32.0);
      const auto fz = eval_grid(ft, cfg, 1);
      const auto r = roots_on_grid(ft, fz, options.bisection_tolerance, cfg, 1);
      extra.insert(extra.end(), r.begin(), r.end());
    }
    roots.insert(roots.end(), extra.begin(), extra.end());
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return b - a <= options.bisection_tolerance; }),
                roots.end());
    out.ordinates = roots;
    check = zero_count_check(out, cfg);
  }
  for (std::size_t i = 1; i < out.ordinates.size(); ++i)
    if (out.ordinates[i] - out.ordinates[i - 1] <= 1e-6)
      throw GridTooCoarse("two zeros within " + format_real(out.ordinates[i] - out.ordinates[i - 1]) + " near t = " +
                          format_real(out.ordinates[i]));
  out.count_certified = check.certified;
  return out;
}

ZeroCountCheck zero_count_check(const ZeroSet& zeros, const EvalConfig& cfg) {
  if (zeros.source != ZeroSource::zeta_internal) throw DomainError("count check applies to internally found zeta zeros");
  const double expected = rs_theta_and_Z(zeros.height_bound, cfg).theta / kPi + 1.0;
  const auto actual = zeros.ordinates.size();
  const double a = static_cast<double>(actual);
  const bool certified = std::abs(a - std::round(expected)) <= 1.0 && a >= std::floor(expected);
  return {expected, actual, certified};
}

ZeroSet parse_zeros_csv(std::istream& in, std::optional<std::string> label, std::optional<double> height_bound) {
  ZeroSet out;
  out.source = ZeroSource::external_file;
  out.count_certified = false;
  std::optional<std::string> header_label;
  std::optional<double> header_T;
  std::vector<std::pair<std::size_t, std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::string body = line.substr(first + 1);
      std::replace(body.begin(), body.end(), ',', ' ');
      std::istringstream ss(body);
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "label") header_label = val;
        if (key == "T") {
          double v = 0;
          auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
          if (ec != std::errc{} || p != val.data() + val.size()) throw ParseError(lineno, line);
          header_T = v;
        }
      }
      continue;
    }
    rows.emplace_back(lineno, line);
  }
  out.label = label.value_or(header_label.value_or("external"));
  std::optional<double> bound = height_bound ? height_bound : header_T;

  for (const auto& [ln, text] : rows) {
    const auto b = text.find_first_not_of(" \t"), e = text.find_last_not_of(" \t");
    const std::string tok = text.substr(b, e - b + 1);
    double v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size() || !std::isfinite(v)) throw ParseError(ln, text);
    if (v <= 0.0) throw RangeError("line " + std::to_string(ln) + ": ordinate must be positive: " + text);
    if (bound && v > *bound)
      throw RangeError("line " + std::to_string(ln) + ": ordinate above height bound " + format_real(*bound) + ": " + text);
    if (!out.ordinates.empty() && v <= out.ordinates.back())
      throw ParseError(ln, text);
    out.ordinates.push_back(v);
  }
  out.height_bound = bound ? *bound : (out.ordinates.empty() ? 0.0 : out.ordinates.back());
  return out;
}

ZeroSet load_zeros_csv(const std::filesystem::path& path, std::optional<std::string> label,
                       std::optional<double> height_bound) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open zero file " + path.string());
  return parse_zeros_csv(in, std::move(label), height_bound);
}

void write_zeros_csv(const ZeroSet& zeros, std::ostream& out) {
  out << "# label=" << zeros.label << ", T=" << format_real(zeros.height_bound) << "\n";
  for (double g : zeros.ordinates) out << format_real(g) << "\n";
}

namespace {

bool is_integer_prime_power(double x) {
  if (x != std::floor(x) || x < 2 || x > 1e15) return false;
  auto n = static_cast<std::uint64_t>(x);
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    return n == 1;
  }
  return true;
}

}  // namespace

ExplicitFormulaRow explicit_formula_check(double x, double truncation_T, const ZeroSet& zeros, double exact_psi,
                                          ExplicitKind kind) {
  if (!(x >= 3.0)) throw DomainError("explicit formula needs x >= 3");
  if (is_integer_prime_power(x)) throw DomainError("explicit formula excludes prime powers x");
  if (!(truncation_T > 0.0)) throw DomainError("truncation height must be positive");
  if (truncation_T > zeros.height_bound)
    throw InsufficientZeros("truncation height " + format_real(truncation_T) + " above zero set bound " +
                            format_real(zeros.height_bound));
  ExplicitFormulaRow row;
  row.x = x;
  row.truncation_T = truncation_T;
  row.exact_psi = exact_psi;
  const double lx = std::log(x), sx = std::sqrt(x);
  CompensatedSum sum, majorant;
  for (double g : zeros.ordinates) {
    if (g > truncation_T) break;
    const ComplexValue rho{0.5, g};
    const ComplexValue term = sx * std::polar(1.0, g * lx) / rho;
    sum += 2.0 * term.real();
    majorant += 2.0 * sx / (1.0 + g);
    ++row.zeros_used;
  }
  row.signed_zero_sum = sum.value();
  row.abs_majorant = majorant.value();
  if (kind == ExplicitKind::zeta)
    row.formula_value = x - row.signed_zero_sum - std::log(2.0 * kPi) - 0.5 * std::log1p(-1.0 / (x * x));
  else
    row.formula_value = -row.signed_zero_sum;
  row.residual = std::abs(exact_psi - row.formula_value);
  row.bound_shape = x * lx * lx / truncation_T;
  return row;
}

}  // namespace h8
