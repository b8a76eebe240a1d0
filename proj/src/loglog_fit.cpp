#include "nsoc/loglog_fit.hpp"

#include "nsoc/errors.hpp"

#include <cmath>

namespace nsoc {

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("loglog_slope: length mismatch");
  if (x.size() < 2) throw ConfigError("loglog_slope: need at least two points");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ConfigError("loglog_slope: entries must be positive");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) throw ConfigError("loglog_slope: abscissae are all equal");
  return sxy / sxx;
}

}  // namespace nsoc
