#pragma once

#include <string>

namespace ctmdp {

/// Locale-independent rendering with `digits` significant digits (%g style).
std::string format_number(double value, int digits = 12);

/// Shortest representation that parses back to the same double.
std::string format_exact(double value);

}  // namespace ctmdp
