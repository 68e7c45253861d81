#pragma once

#include <string>

namespace stablewalk {

/// 17 significant digits, "%.17g"; round-trips every double.
std::string format_real(double x);

/// "%.12g", for human-facing scalar output.
std::string format_short(double x);

}  // namespace stablewalk
