#pragma once

#include "nsoc/fe/functions.hpp"
#include "nsoc/sparse/csr_matrix.hpp"

#include <memory>

namespace nsoc::fe {

using sparse::CsrMatrix;

// P1 matrices on the interior degrees of freedom.
struct FeOperators {
  std::shared_ptr<const FeSpace> space;
  CsrMatrix stiffness;    // (grad phi_i, grad phi_j)
  CsrMatrix mass;         // (phi_i, phi_j)
  CsrMatrix lumped_mass;  // diag(|supp phi_i| / 3)
  Vector lumped;          // diagonal of lumped_mass

  Index size() const noexcept { return space->size(); }

  // M * g.coeffs()
  Vector mass_times(const FeFunction& g) const;
  // sqrt(c^T M c): L2 norm of the P1 function
  double l2_norm(const FeFunction& g) const;
  double l2_norm(std::span<const double> c) const;
  // sqrt(c^T A c): L2 norm of the gradient
  double h1_seminorm(std::span<const double> c) const;
};

FeOperators assemble_operators(std::shared_ptr<const FeSpace> space);

}  // namespace nsoc::fe
