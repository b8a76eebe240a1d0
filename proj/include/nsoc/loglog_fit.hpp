#pragma once

#include <span>

namespace nsoc {

// Least-squares slope of log(y) against log(x). Throws ConfigError for fewer
// than two points, mismatched lengths or non-positive entries.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace nsoc
