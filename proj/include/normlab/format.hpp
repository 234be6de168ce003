#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace normlab {

/// Shortest round-trip decimal form, '.' decimal point, locale-free.
inline std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, res.ptr);
}

}  // namespace normlab
