#include "nsoc/harness/examples.hpp"

#include "nsoc/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nsoc::harness {

namespace {

using std::numbers::pi;

// Profile of the second example in t = x1 - 1/2 and its second derivative.
double profile(double t) { return t < 0.0 ? t * t * t * (t + 0.5) : 0.0; }
double profile_dd(double t) { return t < 0.0 ? t * (12.0 * t + 3.0) : 0.0; }

ManufacturedExample assemble(int id, std::shared_ptr<const fe::FeOperators> ops, const kkt::KktConfig& config,
                             ScalarField y, ScalarField p, ScalarField u, ScalarField chi, const ScalarField& f,
                             const ScalarField& y_d) {
  const auto& space = ops->space;
  kkt::ProblemData data(ops, fe::interpolate(space, f), fe::interpolate(space, y_d), config);
  return ManufacturedExample{id,
                             std::move(data),
                             y,
                             p,
                             u,
                             chi,
                             fe::interpolate(space, y),
                             fe::interpolate(space, p),
                             fe::interpolate(space, u),
                             fe::interpolate(space, chi)};
}

}  // namespace

ManufacturedExample build_example1(std::shared_ptr<const fe::FeOperators> ops, const kkt::KktConfig& config) {
  const int m = ops->space->mesh().subdivisions();
  if (m % 2 == 0)
    throw ConfigError("example 1 needs an odd number of subdivisions (nodes on x2 = 1/2 hit y = 0), got m = " +
                      std::to_string(m));
  ScalarField y = [](double x1, double x2) { return std::sin(pi * x1) * std::sin(2.0 * pi * x2); };
  ScalarField zero = [](double, double) { return 0.0; };
  ScalarField chi = [y](double x1, double x2) { return y(x1, x2) > 0.0 ? 1.0 : 0.0; };
  ScalarField f = [y](double x1, double x2) {
    const double v = y(x1, x2);
    return 5.0 * pi * pi * v + (v > 0.0 ? v : 0.0);
  };
  return assemble(1, std::move(ops), config, y, zero, zero, chi, f, y);
}

ManufacturedExample build_example2(std::shared_ptr<const fe::FeOperators> ops, const kkt::KktConfig& config) {
  const double alpha = config.alpha;
  ScalarField y = [](double x1, double x2) { return profile(x1 - 0.5) * std::sin(pi * x2); };
  ScalarField laplace_y = [](double x1, double x2) {
    const double t = x1 - 0.5;
    return (profile_dd(t) - pi * pi * profile(t)) * std::sin(pi * x2);
  };
  ScalarField u = [y, alpha](double x1, double x2) { return -y(x1, x2) / alpha; };
  ScalarField zero = [](double, double) { return 0.0; };
  ScalarField f = [y, laplace_y, alpha](double x1, double x2) { return -laplace_y(x1, x2) + y(x1, x2) / alpha; };
  ScalarField y_d = [y, laplace_y](double x1, double x2) { return y(x1, x2) + laplace_y(x1, x2); };
  return assemble(2, std::move(ops), config, y, y, u, zero, f, y_d);
}

ManufacturedExample build_example(int id, std::shared_ptr<const fe::FeOperators> ops, const kkt::KktConfig& config) {
  switch (id) {
    case 1:
      return build_example1(std::move(ops), config);
    case 2:
      return build_example2(std::move(ops), config);
    default:
      throw ConfigError("unknown example " + std::to_string(id) + " (expected 1 or 2)");
  }
}

std::shared_ptr<const fe::FeOperators> make_operators(int m) {
  auto space = std::make_shared<const fe::FeSpace>(fe::build_mesh(m));
  return std::make_shared<const fe::FeOperators>(fe::assemble_operators(space));
}

}  // namespace nsoc::harness
