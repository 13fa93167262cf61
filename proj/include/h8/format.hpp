#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace h8 {

/// Shortest-form rendering with 12 significant digits; "nan", "inf", "-inf"
/// for non-finite values. Locale independent.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

}  // namespace h8
