#pragma once

#include "nsoc/fe/mesh.hpp"

#include <functional>
#include <memory>
#include <span>

namespace nsoc::fe {

using Vector = sparse::Vector;
using ScalarField = std::function<double(double x1, double x2)>;

// Nodal coefficient vector of a P1 function with zero boundary values.
class FeFunction {
 public:
  FeFunction(std::shared_ptr<const FeSpace> space, Vector coeffs);

  static FeFunction zeros(std::shared_ptr<const FeSpace> space);

  const FeSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const noexcept { return space_; }
  bool same_space(const FeFunction& other) const noexcept { return space_ == other.space_; }

  Index size() const noexcept { return static_cast<Index>(coeffs_.size()); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }
  const Vector& vector() const noexcept { return coeffs_; }

  double operator[](Index i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  double& operator[](Index i) { return coeffs_[static_cast<std::size_t>(i)]; }

 private:
  std::shared_ptr<const FeSpace> space_;
  Vector coeffs_;
};

// Lagrange interpolation at the interior nodes. Throws std::domain_error if
// g is not finite at some node.
FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& g);

// Continuous L2 distance between the P1 function and a closed-form field,
// integrated with the 6-point degree-4 rule on every triangle.
double l2_error(const FeFunction& fe, const ScalarField& exact);

// max_i |a_i - b_i| over interior nodes. Throws DimensionError for
// different spaces.
double linf_nodal_error(const FeFunction& a, const FeFunction& b);

}  // namespace nsoc::fe
