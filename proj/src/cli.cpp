#include "h8/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <new>
#include <sstream>

#include "CLI11.hpp"
#include "h8/characters.hpp"
#include "h8/error.hpp"
#include "h8/goldbach_twin.hpp"
#include "h8/primes.hpp"
#include "h8/report.hpp"
#include "h8/sieve_lab.hpp"
#include "h8/special_functions.hpp"
#include "h8/zeros.hpp"

namespace h8 {

namespace {

using json = nlohmann::ordered_json;

struct Common {
  std::uint64_t table_limit = 0;
  std::uint64_t memory_budget = 1ull << 30;
  std::string out;
  std::string format = "csv";
  unsigned workers = 1;
  bool strict = false;
  std::vector<std::string> tolerance;
};

struct Result {
  ReportDocument doc;
  bool strict_failure = false;
  std::string raw_csv;  // replaces the generic CSV when set
};

// --- prime table --------------------------------------------------------------

std::uint64_t resolve_limit(const Common& c, std::uint64_t needed) {
  std::uint64_t limit = c.table_limit;
  if (limit == 0) {
    if (const char* env = std::getenv("H8_TABLE_LIMIT"); env && *env) {
      const std::string s = env;
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || p != s.data() + s.size()) throw DomainError("H8_TABLE_LIMIT is not an integer: " + s);
      limit = v;
    }
  }
  if (limit == 0) limit = std::max<std::uint64_t>(needed, 100);
  if (limit < needed)
    throw RangeError("table limit " + std::to_string(limit) + " below required " + std::to_string(needed));
  return limit;
}

PrimeTable make_table(const Common& c, std::uint64_t needed) {
  PrimeTableOptions o;
  o.memory_budget_bytes = c.memory_budget;
  o.workers = c.workers;
  return PrimeTable::build(resolve_limit(c, needed), o);
}

json common_config(const Common& c, std::uint64_t table_limit) {
  json j;
  j["table_limit"] = table_limit;
  j["workers"] = c.workers;
  j["strict"] = c.strict;
  return j;
}

std::string point_cell(const SamplePoint& p) {
  if (const auto* z = std::get_if<ComplexValue>(&p)) return format_real(z->real()) + ";" + format_real(z->imag());
  std::string s;
  for (double v : std::get<std::vector<double>>(p)) {
    if (!s.empty()) s += ';';
    s += format_real(v);
  }
  return s;
}

// --- identities -----------------------------------------------------------------

struct IdentityArgs {
  std::vector<std::string> which{"FE_ZETA",       "LOGDERIV_ZETA",   "AFORM_CLOSED_VS_ORACLE", "FE_L",
                                 "LOGDERIV_L",    "SYMMETRY_SERIES", "THETA_PSI_EQUIV"};
  int re_points = 10;
  int im_points = 12;
  double im_max = 30.0;
  std::uint32_t max_modulus = 12;
  double alpha = 0.25;
  double gamma_ord = 14.0;
  int delta = 0;
  long terms = 1'000'000;
  std::uint64_t psi_x = 100'000;
  std::uint64_t psi_q_max = 10;
};

std::vector<ComplexValue> zeta_grid(const IdentityArgs& a) {
  std::vector<ComplexValue> pts;
  for (int i = 0; i < a.re_points; ++i) {
    const double re = a.re_points == 1 ? 0.5 : -1.0 + 3.0 * i / (a.re_points - 1);
    for (int j = 0; j < a.im_points; ++j) pts.emplace_back(re, -a.im_max + 2.0 * a.im_max * (j + 0.5) / a.im_points);
  }
  return pts;
}

std::vector<ComplexValue> l_grid() {
  std::vector<ComplexValue> pts;
  for (double re : {-0.5, 0.25, 0.75, 1.5})
    for (double im : {-8.0, -3.0, 2.0, 5.0, 9.0}) pts.emplace_back(re, im);
  return pts;
}

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos) throw DomainError("tolerance override must be ID=value: " + it);
    const std::string key = it.substr(0, eq), val = it.substr(eq + 1);
    double v = 0;
    auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || p != val.data() + val.size() || !(v > 0)) throw DomainError("bad tolerance value: " + it);
    out[key] = v;
  }
  return out;
}

Result cmd_identities(const Common& c, const IdentityArgs& a) {
  const auto tol = parse_tolerances(c.tolerance);
  const EvalConfig cfg;
  std::vector<IdentityReport> reports;
  auto wants = [&](std::string_view id) { return std::find(a.which.begin(), a.which.end(), id) != a.which.end(); };
  for (const auto& w : a.which) {
    static const std::vector<std::string> known{"FE_ZETA", "LOGDERIV_ZETA", "AFORM_CLOSED_VS_ORACLE", "FE_L",
                                                "LOGDERIV_L", "SYMMETRY_SERIES", "THETA_PSI_EQUIV"};
    if (std::find(known.begin(), known.end(), w) == known.end()) throw DomainError("unknown identity: " + w);
  }
  const auto grid = zeta_grid(a);
  if (wants("FE_ZETA")) reports.push_back(identity_probe(IdentityId::FE_ZETA, grid, cfg));
  if (wants("LOGDERIV_ZETA")) reports.push_back(identity_probe(IdentityId::LOGDERIV_ZETA, grid, cfg));
  if (wants("AFORM_CLOSED_VS_ORACLE")) reports.push_back(identity_probe(IdentityId::AFORM_CLOSED_VS_ORACLE, grid, cfg));
  if (wants("FE_L") || wants("LOGDERIV_L") || wants("AFORM_CLOSED_VS_ORACLE")) {
    const auto lg = l_grid();
    for (std::uint32_t q = 3; q <= a.max_modulus; ++q) {
      for (const auto& chi : CharacterGroup(q).all()) {
        if (!chi.is_primitive) continue;
        if (wants("FE_L")) reports.push_back(l_fe_probe(chi, lg, cfg));
        if (wants("LOGDERIV_L") || wants("AFORM_CLOSED_VS_ORACLE")) {
          auto p = l_identity_probe(chi, lg, cfg);
          if (wants("LOGDERIV_L")) reports.push_back(std::move(p.logderiv));
          if (wants("AFORM_CLOSED_VS_ORACLE")) reports.push_back(std::move(p.closed_form));
        }
      }
    }
  }
  if (wants("SYMMETRY_SERIES")) {
    const SymmetryProbeResult s = symmetry_series_probe({a.alpha, a.gamma_ord, a.delta, a.terms});
    IdentityReport r;
    r.identity_id = IdentityId::SYMMETRY_SERIES;
    r.context = "series vs digamma";
    r.tolerance = default_tolerance(IdentityId::SYMMETRY_SERIES);
    r.add(std::vector<double>{a.alpha, a.gamma_ord, double(a.delta), double(a.terms)}, std::abs(s.difference),
          ComplexValue{s.difference, 0.0});
    r.finalize();
    reports.push_back(std::move(r));
  }
  std::uint64_t limit = 0;
  if (wants("THETA_PSI_EQUIV")) {
    const PrimeTable table = make_table(c, a.psi_x);
    limit = table.limit();
    reports.push_back(theta_psi_probe(a.psi_x, a.psi_q_max, table));
  }

  Result res;
  auto& doc = res.doc;
  doc.command = "identities";
  doc.config = common_config(c, limit);
  doc.config["which"] = a.which;
  doc.config["re_points"] = a.re_points;
  doc.config["im_points"] = a.im_points;
  doc.config["im_max"] = a.im_max;
  doc.config["max_modulus"] = a.max_modulus;
  doc.config["symmetry"] = {{"alpha", a.alpha}, {"gamma", a.gamma_ord}, {"delta", a.delta}, {"terms", a.terms}};
  doc.config["psi_x"] = a.psi_x;
  doc.config["psi_q_max"] = a.psi_q_max;
  json tol_cfg = json::object();
  for (const auto& [k, v] : tol) tol_cfg[k] = v;
  doc.config["tolerance_overrides"] = tol_cfg;

  doc.rows.columns = {"identity", "context", "point", "residual", "delta_re", "delta_im", "status"};
  auto summary = json::array();
  for (auto& r : reports) {
    const std::string id(to_string(r.identity_id));
    if (auto it = tol.find(id); it != tol.end()) {
      r.tolerance = it->second;
      r.finalize();
    }
    for (std::size_t i = 0; i < r.residuals.size(); ++i) {
      const ComplexValue d = i < r.signed_deltas.size() ? r.signed_deltas[i] : ComplexValue{};
      doc.rows.add({id, r.context, point_cell(r.sample_points[i]), cell(r.residuals[i]), cell(d.real()), cell(d.imag()),
                    "evaluated"});
    }
    for (const auto& s : r.skipped)
      doc.rows.add({id, r.context, point_cell(s.point), "nan", "nan", "nan", "skipped: " + s.reason});
    json j;
    j["identity"] = id;
    j["context"] = r.context;
    j["verdict"] = std::string(to_string(r.verdict));
    j["max_residual"] = format_real(r.max_residual);
    j["tolerance"] = format_real(r.tolerance);
    j["points"] = r.residuals.size();
    j["skipped"] = r.skipped.size();
    summary.push_back(j);
    if (r.verdict == Verdict::fails) res.strict_failure = true;
  }
  doc.summary["reports"] = summary;
  return res;
}

// --- zeros ----------------------------------------------------------------------

Result cmd_zeros(const Common& c, double max_height, double grid_step) {
  ZeroSearchOptions o;
  o.grid_step = grid_step;
  o.workers = c.workers;
  const ZeroSet z = find_zeta_zeros(max_height, {}, o);
  const ZeroCountCheck chk = zero_count_check(z);
  Result res;
  auto& doc = res.doc;
  doc.command = "zeros";
  doc.config = common_config(c, 0);
  doc.config["max_height"] = max_height;
  doc.config["grid_step"] = grid_step;
  doc.rows.columns = {"k", "gamma"};
  for (std::size_t i = 0; i < z.ordinates.size(); ++i) doc.rows.add({cell(std::uint64_t{i + 1}), cell(z.ordinates[i])});
  doc.summary["count"] = z.ordinates.size();
  doc.summary["expected_count"] = format_real(chk.expected_count);
  doc.summary["certified"] = chk.certified;
  res.strict_failure = !chk.certified;
  std::ostringstream csv;
  write_zeros_csv(z, csv);
  res.raw_csv = csv.str();
  return res;
}

// --- ap-errors ------------------------------------------------------------------

struct ApArgs {
  std::uint64_t x = 100'000;
  std::uint64_t d_cap = 0;
  std::string policy = "max_over_l";
  double a_exponent = 1.0;
  double b_exponent = 3.0;
  std::string mode = "single";
  std::uint64_t b_cap = 0;
  std::uint64_t chi_cap = 100;
};

Result cmd_ap_errors(const Common& c, const ApArgs& a) {
  if (a.x < 4) throw DomainError("x must be >= 4");
  ScanOptions o;
  if (a.policy == "fixed_l")
    o.policy = LPolicy::fixed_l;
  else if (a.policy == "max_over_l")
    o.policy = LPolicy::max_over_l;
  else
    throw DomainError("policy must be fixed_l or max_over_l");
  o.a_exponent = a.a_exponent;
  o.b_exponent = a.b_exponent;
  o.chi_cap = a.chi_cap;
  o.workers = c.workers;
  if (a.mode == "single")
    o.b_cap = 1;
  else if (a.mode == "scaled")
    o.b_cap = a.b_cap ? a.b_cap : std::min<std::uint64_t>(isqrt(a.x), 1000);
  else
    throw DomainError("mode must be single or scaled");
  const double lx = std::log(static_cast<double>(a.x));
  std::uint64_t d_cap = a.d_cap;
  if (d_cap == 0)
    d_cap = std::clamp<std::uint64_t>(
        static_cast<std::uint64_t>(std::floor(static_cast<double>(a.x) / std::pow(lx, a.b_exponent))), 2, a.x);
  const PrimeTable table = make_table(c, a.x);
  const ScanResult s = error_scan(a.x, d_cap, o, table);

  Result res;
  auto& doc = res.doc;
  doc.command = "ap-errors";
  doc.config = common_config(c, table.limit());
  doc.config["x"] = a.x;
  doc.config["d_cap"] = d_cap;
  doc.config["policy"] = a.policy;
  doc.config["a_exponent"] = a.a_exponent;
  doc.config["b_exponent"] = a.b_exponent;
  doc.config["mode"] = a.mode;
  doc.config["b_cap"] = s.summary.b_cap;
  doc.config["chi_cap"] = a.chi_cap;
  doc.rows.columns = {"x", "q", "l", "b", "psi", "theta", "main_term", "e_psi", "e_theta", "theta_psi_gap",
                      "max_abs_psi_chi"};
  for (const auto& row : s.rows) {
    const auto& r = row.record;
    doc.rows.add({cell(r.x), cell(r.q), cell(r.l), cell(r.b), cell(r.psi_val), cell(r.theta_val), cell(r.main_term),
                  cell(r.e_psi), cell(r.e_theta), cell(std::abs(r.e_theta) - std::abs(r.e_psi)),
                  row.max_abs_psi_chi ? cell(*row.max_abs_psi_chi) : std::string("nan")});
  }
  doc.summary["total"] = format_real(s.summary.total);
  doc.summary["comparison"] = format_real(s.summary.comparison);
  doc.summary["total_over_comparison"] = format_real(s.summary.total / s.summary.comparison);
  doc.summary["suggested_d_cap"] = format_real(s.summary.suggested_d_cap);
  doc.summary["rows"] = s.rows.size();
  return res;
}

// --- sieve-bounds ---------------------------------------------------------------

struct SieveArgs {
  std::string kind = "goldbach";
  std::vector<std::uint64_t> n{10'000};
  double u = 3.0;
  double z = 0.0;
  std::uint64_t d_cap = 0;
  bool inclusive_z = false;
};

Result cmd_sieve_bounds(const Common& c, const SieveArgs& a) {
  if (a.kind != "goldbach" && a.kind != "twin") throw DomainError("kind must be goldbach or twin");
  if (a.n.empty()) throw DomainError("need at least one N");
  const std::uint64_t n_max = *std::max_element(a.n.begin(), a.n.end());
  const PrimeTable table = make_table(c, n_max + 2);
  BoundOptions o;
  o.sieve.inclusive_z = a.inclusive_z;
  Result res;
  auto& doc = res.doc;
  doc.command = "sieve-bounds";
  doc.config = common_config(c, table.limit());
  doc.config["kind"] = a.kind;
  doc.config["n"] = a.n;
  doc.config["u"] = a.u;
  doc.config["z"] = a.z;
  doc.config["d_cap"] = a.d_cap;
  doc.config["sifting_primes"] = a.inclusive_z ? "p <= z" : "p < z";
  doc.rows.columns = {"N",       "kind",        "z",           "y",             "u",   "d_cap",
                      "C_N",     "s_exact",     "lower_bound", "upper_bound",   "remainder_sum",
                      "f_u",     "F_u",         "within_bounds", "main_term_only"};
  std::size_t within = 0;
  for (std::uint64_t n : a.n) {
    const SieveTarget t = a.kind == "goldbach" ? SieveTarget::goldbach(n) : SieveTarget::twin(n);
    const double y = static_cast<double>(n);
    const double z = a.z > 0 ? a.z : std::pow(y, 1.0 / a.u);
    const std::uint64_t d_cap = a.d_cap ? a.d_cap : isqrt(n);
    const SieveBoundReport r = bound_report(t, y, z, d_cap, table, o);
    within += r.within_bounds;
    doc.rows.add({cell(r.n), to_string(r.kind), cell(r.z), cell(r.y), cell(r.u), cell(r.d_cap), cell(r.c_of_n),
                  cell(r.s_exact), cell(r.lower_bound), cell(r.upper_bound), cell(r.remainder_sum), cell(r.f_u),
                  cell(r.F_u), cell(r.within_bounds), cell(r.main_term_only)});
  }
  doc.summary["reports"] = a.n.size();
  doc.summary["within_bounds"] = within;
  return res;
}

// --- goldbach / twins -----------------------------------------------------------

struct RangeArgs {
  std::uint64_t from = 6;
  std::uint64_t to = 10'000;
  std::uint64_t step = 0;
  std::uint64_t sieve_columns_max = 20'000;
};

Result cmd_range(const Common& c, const RangeArgs& a, TargetKind kind) {
  const PrimeTable table = make_table(c, a.to);
  GoldbachOptions o;
  o.workers = c.workers;
  o.sieve_columns_max_n = a.sieve_columns_max;
  const std::uint64_t step = a.step ? a.step : (kind == TargetKind::goldbach ? 2 : 1);
  const RangeScan s = scan_range(a.from, a.to, step, kind, table, o);
  Result res;
  auto& doc = res.doc;
  doc.command = kind == TargetKind::goldbach ? "goldbach" : "twins";
  doc.config = common_config(c, table.limit());
  doc.config["from"] = a.from;
  doc.config["to"] = a.to;
  doc.config["step"] = step;
  if (kind == TargetKind::goldbach) {
    doc.config["sieve_columns_max"] = a.sieve_columns_max;
    doc.rows.columns = {"N", "weighted_sum", "pairs_ordered", "pairs_unordered", "C_N", "bound", "ratio", "s_lower",
                        "middle_term"};
    for (const auto& r : s.goldbach)
      doc.rows.add({cell(r.n), cell(r.weighted_sum), cell(r.pair_count_ordered), cell(r.pair_count_unordered),
                    cell(r.c_of_n), cell(r.bound_value), cell(r.ratio), cell(r.s_lower), cell(r.middle_term)});
  } else {
    doc.rows.columns = {"N", "weighted_sum", "pairs", "C_N", "bound", "ratio", "hl_ratio"};
    for (const auto& r : s.twin)
      doc.rows.add({cell(r.n), cell(r.weighted_sum), cell(r.pair_count), cell(r.c_of_n), cell(r.bound_value),
                    cell(r.ratio), cell(r.hl_ratio)});
  }
  doc.summary["records"] = s.summary.records;
  doc.summary["violations"] = s.summary.violations;
  doc.summary["min_ratio"] = format_real(s.summary.min_ratio);
  doc.summary["min_ratio_n"] = s.summary.min_ratio_n;
  res.strict_failure = !s.summary.violations.empty();
  return res;
}

// --- explicit-formula -----------------------------------------------------------

struct ExplicitArgs {
  std::vector<double> x{100.0, 1000.0};
  std::vector<double> heights{50.0, 100.0, 200.0};
  std::string zeros_file;
  std::string kind = "zeta";
  std::string character;
};

Character parse_character(const std::string& label) {
  const auto dot = label.find('.');
  if (dot == std::string::npos) throw DomainError("character label must be q.k: " + label);
  std::uint32_t q = 0, k = 0;
  const std::string qs = label.substr(0, dot), ks = label.substr(dot + 1);
  auto [p1, e1] = std::from_chars(qs.data(), qs.data() + qs.size(), q);
  auto [p2, e2] = std::from_chars(ks.data(), ks.data() + ks.size(), k);
  if (e1 != std::errc{} || e2 != std::errc{} || p1 != qs.data() + qs.size() || p2 != ks.data() + ks.size())
    throw DomainError("character label must be q.k: " + label);
  CharacterGroup g(q);
  if (k < 1 || k > g.size()) throw DomainError("character index out of range: " + label);
  return g.character(k);
}

Result cmd_explicit(const Common& c, const ExplicitArgs& a) {
  if (a.x.empty() || a.heights.empty()) throw DomainError("need x values and truncation heights");
  const bool zeta = a.kind == "zeta";
  if (!zeta && a.kind != "character") throw DomainError("kind must be zeta or character");
  if (!zeta && (a.zeros_file.empty() || a.character.empty()))
    throw DomainError("character kind needs --zeros-file and --character");
  const double t_max = *std::max_element(a.heights.begin(), a.heights.end());
  ZeroSet zs;
  if (!a.zeros_file.empty()) {
    zs = load_zeros_csv(a.zeros_file);
  } else {
    ZeroSearchOptions o;
    o.workers = c.workers;
    zs = find_zeta_zeros(t_max, {}, o);
  }
  for (double x : a.x)
    if (!(x >= 3.0)) throw DomainError("x must be >= 3");
  const double x_max = *std::max_element(a.x.begin(), a.x.end());
  const PrimeTable table = make_table(c, static_cast<std::uint64_t>(std::floor(x_max)));
  std::optional<Character> chi;
  if (!zeta) chi = parse_character(a.character);

  Result res;
  auto& doc = res.doc;
  doc.command = "explicit-formula";
  doc.config = common_config(c, table.limit());
  doc.config["x"] = a.x;
  doc.config["heights"] = a.heights;
  doc.config["kind"] = a.kind;
  doc.config["zeros"] = a.zeros_file.empty() ? std::string("internal") : a.zeros_file;
  doc.config["zero_label"] = zs.label;
  doc.config["zero_height_bound"] = zs.height_bound;
  if (chi) doc.config["character"] = chi->label();
  doc.rows.columns = {"x", "T", "zeros_used", "exact_psi", "formula_value", "residual", "bound_shape",
                      "signed_zero_sum", "abs_majorant"};
  auto per_x = json::array();
  for (double x : a.x) {
    const auto xi = static_cast<std::uint64_t>(std::floor(x));
    const double exact = zeta ? chebyshev_snapshot(xi, table).psi : psi_chi(xi, *chi, table).real();
    std::vector<double> residuals;
    for (double T : a.heights) {
      const ExplicitFormulaRow r =
          explicit_formula_check(x, T, zs, exact, zeta ? ExplicitKind::zeta : ExplicitKind::character);
      residuals.push_back(r.residual);
      doc.rows.add({cell(r.x), cell(r.truncation_T), cell(std::uint64_t{r.zeros_used}), cell(r.exact_psi),
                    cell(r.formula_value), cell(r.residual), cell(r.bound_shape), cell(r.signed_zero_sum),
                    cell(r.abs_majorant)});
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < residuals.size(); ++i) decreasing = decreasing && residuals[i] < residuals[i - 1];
    json j;
    j["x"] = format_real(x);
    j["residual_strictly_decreasing_in_T"] = decreasing;
    per_x.push_back(j);
  }
  doc.summary["trend"] = per_x;
  return res;
}

// --- report ---------------------------------------------------------------------

void flatten(const json& j, const std::string& prefix, const std::string& section, RowTable& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), section, rows);
  } else if (j.is_array()) {
    if (j.empty()) rows.add({section, prefix, "[]"});
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", section, rows);
  } else if (j.is_string()) {
    rows.add({section, prefix, j.get<std::string>()});
  } else if (j.is_boolean()) {
    rows.add({section, prefix, cell(j.get<bool>())});
  } else if (j.is_number_unsigned() || j.is_number_integer()) {
    rows.add({section, prefix, j.dump()});
  } else if (j.is_number_float()) {
    rows.add({section, prefix, format_real(j.get<double>())});
  } else {
    rows.add({section, prefix, "null"});
  }
}

Result cmd_report(const Common& c) {
  Result res;
  auto& doc = res.doc;
  doc.command = "report";
  doc.config = common_config(c, 0);
  doc.rows.columns = {"section", "metric", "value"};
  std::vector<Result> parts;
  IdentityArgs ia;
  ia.psi_x = 10'000;
  parts.push_back(cmd_identities(c, ia));
  parts.push_back(cmd_zeros(c, 100.0, 0.05));
  ApArgs aa;
  aa.x = 10'000;
  parts.push_back(cmd_ap_errors(c, aa));
  SieveArgs sa;
  sa.n = {10'000};
  parts.push_back(cmd_sieve_bounds(c, sa));
  RangeArgs ra;
  parts.push_back(cmd_range(c, ra, TargetKind::goldbach));
  parts.push_back(cmd_range(c, ra, TargetKind::twin));
  ExplicitArgs ea;
  parts.push_back(cmd_explicit(c, ea));
  for (auto& p : parts) {
    flatten(p.doc.summary, "", p.doc.command, doc.rows);
    doc.rows.add({p.doc.command, "determinism_hash", determinism_hash(p.doc.rows)});
    res.strict_failure = res.strict_failure || p.strict_failure;
  }
  doc.summary["sections"] = parts.size();
  return res;
}

int exit_for(const std::exception& e, std::ostream& err) {
  err << "h8: error: " << e.what() << "\n";
  if (dynamic_cast<const ResourceError*>(&e) || dynamic_cast<const IoError*>(&e) ||
      dynamic_cast<const GridTooCoarse*>(&e) || dynamic_cast<const std::bad_alloc*>(&e))
    return kExitResource;
  if (dynamic_cast<const Error*>(&e)) return kExitUsage;
  return kExitResource;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"h8: numerical verification lab for zeta, L-functions, and prime sums", "h8"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--table-limit", common.table_limit, "prime table limit (default: env H8_TABLE_LIMIT or as needed)");
    sub->add_option("--memory-budget", common.memory_budget, "prime table memory budget in bytes");
    sub->add_option("--out", common.out, "output file (default: stdout)");
    sub->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", common.workers, "worker threads (scheduling only)")->check(CLI::Range(1u, 256u));
    sub->add_flag("--strict", common.strict, "exit 1 when a probe fails");
  };

  IdentityArgs ia;
  auto* id = app.add_subcommand("identities", "functional-equation and log-derivative identity probes");
  add_common(id);
  id->add_option("--which", ia.which, "identity ids")->delimiter(',');
  id->add_option("--re-points", ia.re_points)->check(CLI::Range(1, 1000));
  id->add_option("--im-points", ia.im_points)->check(CLI::Range(1, 1000));
  id->add_option("--im-max", ia.im_max);
  id->add_option("--max-modulus", ia.max_modulus)->check(CLI::Range(3u, 10000u));
  id->add_option("--alpha", ia.alpha);
  id->add_option("--gamma", ia.gamma_ord);
  id->add_option("--delta", ia.delta);
  id->add_option("--terms", ia.terms)->check(CLI::Range(1L, 100'000'000L));
  id->add_option("--psi-x", ia.psi_x);
  id->add_option("--psi-q-max", ia.psi_q_max);
  id->add_option("--tolerance", common.tolerance, "override, ID=value")->take_all();

  double max_height = 100.0, grid_step = 0.05;
  auto* zs = app.add_subcommand("zeros", "zeros of zeta on the critical line");
  add_common(zs);
  zs->add_option("--max-height", max_height);
  zs->add_option("--grid-step", grid_step);

  ApArgs aa;
  auto* ap = app.add_subcommand("ap-errors", "prime sums in progressions and averaged errors");
  add_common(ap);
  ap->add_option("--x", aa.x);
  ap->add_option("--d-cap", aa.d_cap, "largest modulus (default x / log^B x)");
  ap->add_option("--policy", aa.policy)->check(CLI::IsMember({"fixed_l", "max_over_l"}));
  ap->add_option("--a-exponent", aa.a_exponent);
  ap->add_option("--b-exponent", aa.b_exponent);
  ap->add_option("--mode", aa.mode)->check(CLI::IsMember({"single", "scaled"}));
  ap->add_option("--b-cap", aa.b_cap, "largest scale b in scaled mode (default min(sqrt x, 1000))");
  ap->add_option("--chi-cap", aa.chi_cap, "character maximum column for q up to this");

  SieveArgs sa;
  auto* sb = app.add_subcommand("sieve-bounds", "exact sieve values against the Rosser bounds");
  add_common(sb);
  sb->add_option("--kind", sa.kind)->check(CLI::IsMember({"goldbach", "twin"}));
  sb->add_option("--n", sa.n)->delimiter(',');
  sb->add_option("--u", sa.u, "z = N^(1/u)");
  sb->add_option("--z", sa.z, "explicit sieve level (overrides --u)");
  sb->add_option("--d-cap", sa.d_cap, "remainder sum range (default sqrt N)");
  sb->add_flag("--inclusive-z", sa.inclusive_z, "sift by p <= z");

  RangeArgs ga, ta;
  ta.from = 6;
  ta.to = 100'000;
  auto* gb = app.add_subcommand("goldbach", "Goldbach weighted counts over a range of even N");
  add_common(gb);
  gb->add_option("--from", ga.from);
  gb->add_option("--to", ga.to);
  gb->add_option("--step", ga.step);
  gb->add_option("--sieve-columns-max", ga.sieve_columns_max);
  auto* tw = app.add_subcommand("twins", "twin prime counts over a range of N");
  add_common(tw);
  tw->add_option("--from", ta.from);
  tw->add_option("--to", ta.to);
  tw->add_option("--step", ta.step);

  ExplicitArgs ea;
  auto* ef = app.add_subcommand("explicit-formula", "truncated explicit formula against exact psi");
  add_common(ef);
  ef->add_option("--x", ea.x)->delimiter(',');
  ef->add_option("--heights", ea.heights)->delimiter(',');
  ef->add_option("--zeros-file", ea.zeros_file);
  ef->add_option("--kind", ea.kind)->check(CLI::IsMember({"zeta", "character"}));
  ef->add_option("--character", ea.character, "label q.k");

  auto* rp = app.add_subcommand("report", "summary of every module at default sizes");
  add_common(rp);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "h8: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    Result res;
    if (id->parsed())
      res = cmd_identities(common, ia);
    else if (zs->parsed())
      res = cmd_zeros(common, max_height, grid_step);
    else if (ap->parsed())
      res = cmd_ap_errors(common, aa);
    else if (sb->parsed())
      res = cmd_sieve_bounds(common, sa);
    else if (gb->parsed())
      res = cmd_range(common, ga, TargetKind::goldbach);
    else if (tw->parsed())
      res = cmd_range(common, ta, TargetKind::twin);
    else if (ef->parsed())
      res = cmd_explicit(common, ea);
    else
      res = cmd_report(common);
    res.doc.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const Format fmt = common.format == "json" ? Format::json : Format::csv;
    if (fmt == Format::csv && !res.raw_csv.empty())
      write_text(res.raw_csv, common.out, out);
    else
      emit(res.doc, fmt, common.out, out);
    const std::string summary = res.doc.summary.dump();
    err << "h8 " << res.doc.command << ": rows=" << res.doc.rows.rows.size() << " hash=" << determinism_hash(res.doc.rows);
    if (summary.size() <= 400) err << " summary=" << summary;
    if (res.strict_failure) err << " (a probe or check failed)";
    err << "\n";
    return common.strict && res.strict_failure ? kExitStrictFail : kExitOk;
  } catch (const std::exception& e) {
    return exit_for(e, err);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace h8
