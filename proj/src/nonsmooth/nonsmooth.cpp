#include "nsoc/nonsmooth.hpp"

#include "nsoc/errors.hpp"
#include "nsoc/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsoc::nonsmooth {

bool subdiff_max_contains(double x, double g) noexcept {
  if (x < 0.0) return g == 0.0;
  if (x > 0.0) return g == 1.0;
  return g >= 0.0 && g <= 1.0;
}

double prox(double gamma, double x) {
  if (!(gamma > 0.0)) throw ConfigError("prox: gamma must be positive");
  if (x < 0.0) return x;
  if (x <= gamma) return 0.0;
  return x - gamma;
}

bool prox_active(double gamma, double x) {
  if (!(gamma > 0.0)) throw ConfigError("prox_active: gamma must be positive");
  return x < 0.0 || x > gamma;
}

void max0(std::span<const double> x, std::span<double> out) { simd::max0(x, out); }

void prox(double gamma, std::span<const double> x, std::span<double> out) {
  if (!(gamma > 0.0)) throw ConfigError("prox: gamma must be positive");
  simd::prox(gamma, x, out);
}

SmoothedMax::SmoothedMax(double eps) : eps_(eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("SmoothedMax: eps must be positive and finite");
}

double SmoothedMax::value(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  if (x < eps_) return x * x / (2.0 * eps_);
  return x - 0.5 * eps_;
}

double SmoothedMax::prime(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  if (x < eps_) return x / eps_;
  return 1.0;
}

double SmoothedMax::second(double x) const noexcept { return (x > 0.0 && x < eps_) ? 1.0 / eps_ : 0.0; }

SmoothingFamily spline_family(double eps) {
  const SmoothedMax s(eps);
  return {eps, [s](double x) { return s.value(x); }, [s](double x) { return s.prime(x); }};
}

bool SmoothingReport::flagged(const std::string& check) const {
  return std::any_of(violations.begin(), violations.end(), [&](const auto& v) { return v.check == check; });
}

SmoothingReport verify_smoothing_assumptions(const SmoothingFamily& family, std::span<const double> grid,
                                             double delta) {
  if (grid.empty()) throw ConfigError("verify_smoothing_assumptions: empty grid");
  constexpr double kTol = 1e-12;
  SmoothingReport report;
  report.uniform_limit_checked = family.eps < delta;

  for (double x : grid) {
    const double gap = std::abs(family.value(x) - max0(x));
    if (gap > 0.5 * family.eps + kTol) report.violations.push_back({"uniform_bound", x, gap});

    const double d = family.prime(x);
    if (d < 0.0 || d > 1.0) report.violations.push_back({"derivative_range", x, d < 0.0 ? -d : d - 1.0});

    if (report.uniform_limit_checked) {
      if (x >= delta && std::abs(d - 1.0) > kTol) report.violations.push_back({"limit_one", x, std::abs(d - 1.0)});
      if (x <= -delta && std::abs(d) > kTol) report.violations.push_back({"limit_zero", x, std::abs(d)});
    }
  }

  for (double kink : {0.0, family.eps}) {
    const double left = family.prime(std::nextafter(kink, -std::numeric_limits<double>::infinity()));
    const double right = family.prime(std::nextafter(kink, std::numeric_limits<double>::infinity()));
    if (std::abs(right - left) > kTol) report.violations.push_back({"derivative_continuity", kink, std::abs(right - left)});
  }
  return report;
}

}  // namespace nsoc::nonsmooth
