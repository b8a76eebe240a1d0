#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nsoc::nonsmooth {

inline double max0(double x) noexcept { return x > 0.0 ? x : 0.0; }

// g in the convex subdifferential of max(0, .) at x.
bool subdiff_max_contains(double x, double g) noexcept;

// Proximal map of max(0, .) with step gamma:
//   x for x < 0,  0 for x in [0, gamma],  x - gamma for x > gamma.
// Throws ConfigError for gamma <= 0.
double prox(double gamma, double x);

// True where prox has slope 1, i.e. x outside the closed interval [0, gamma].
bool prox_active(double gamma, double x);

// Componentwise versions (SIMD-dispatched).
void max0(std::span<const double> x, std::span<double> out);
void prox(double gamma, std::span<const double> x, std::span<double> out);

// C^1 quadratic spline approximation of max(0, x):
//   0 for x <= 0,  x^2 / (2 eps) on (0, eps),  x - eps/2 for x >= eps.
// Uniform error eps/2; derivative in [0, 1].
class SmoothedMax {
 public:
  explicit SmoothedMax(double eps);

  double eps() const noexcept { return eps_; }
  double value(double x) const noexcept;
  double prime(double x) const noexcept;
  // 1/eps on (0, eps), 0 elsewhere.
  double second(double x) const noexcept;

 private:
  double eps_;
};

// A smoothing family under test: explicit callables so that corrupted
// variants can be checked as well.
struct SmoothingFamily {
  double eps;
  std::function<double(double)> value;
  std::function<double(double)> prime;
};

SmoothingFamily spline_family(double eps);

struct SmoothingViolation {
  std::string check;
  double x;
  double amount;
};

struct SmoothingReport {
  bool uniform_limit_checked = false;  // only asserted when eps < delta
  std::vector<SmoothingViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool flagged(const std::string& check) const;
};

// Grid checks: |value - max| <= eps/2; 0 <= prime <= 1; prime == 1 on
// [delta, inf) and 0 on (-inf, -delta] when eps < delta; continuity of prime
// across 0 and eps. Throws ConfigError on an empty grid.
SmoothingReport verify_smoothing_assumptions(const SmoothingFamily& family, std::span<const double> grid,
                                             double delta);

}  // namespace nsoc::nonsmooth
