#pragma once

#include "nsoc/fe/operators.hpp"
#include "nsoc/kkt/kkt_solver.hpp"

#include <memory>

namespace nsoc::harness {

using fe::FeFunction;
using fe::ScalarField;
using fe::Index;
using fe::Vector;

// Problem data constructed so that a known (y, p, chi, u) solves the
// continuous limit optimality system, plus the closed-form solution and its
// nodal interpolants.
struct ManufacturedExample {
  int id;
  kkt::ProblemData data;
  ScalarField y_exact;
  ScalarField p_exact;
  ScalarField u_exact;
  ScalarField chi_exact;
  FeFunction y_star;
  FeFunction p_star;
  FeFunction u_star;
  FeFunction chi_star;
};

// y = sin(pi x1) sin(2 pi x2), p = 0, u = 0, chi = 1_{y>0};
// f = 5 pi^2 y + max(0, y), y_d = y. Requires odd m so that no interior node
// lies on the zero line x2 = 1/2 (ConfigError otherwise).
ManufacturedExample build_example1(std::shared_ptr<const fe::FeOperators> ops, const kkt::KktConfig& config);

// y = p = g(x1 - 1/2) sin(pi x2) with g(t) = t^4 + t^3/2 for t < 0 and 0
// otherwise, so y <= 0 vanishes on the right half; u = -p/alpha,
// f = -lap y + y/alpha, y_d = y + lap y, chi = 0.
ManufacturedExample build_example2(std::shared_ptr<const fe::FeOperators> ops, const kkt::KktConfig& config);

// Dispatch on example id 1 or 2.
ManufacturedExample build_example(int id, std::shared_ptr<const fe::FeOperators> ops, const kkt::KktConfig& config);

// Convenience: mesh, space and operators for m subdivisions.
std::shared_ptr<const fe::FeOperators> make_operators(int m);

}  // namespace nsoc::harness
