#include "nsoc/fe/functions.hpp"

#include "nsoc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nsoc::fe {

namespace {

// Dunavant degree-4 rule: barycentric points and weights (weights sum to 1).
struct QuadPoint {
  double l0, l1, l2, w;
};
constexpr double kA1 = 0.445948490915965, kB1 = 1.0 - 2.0 * kA1, kW1 = 0.223381589678011;
constexpr double kA2 = 0.091576213509771, kB2 = 1.0 - 2.0 * kA2, kW2 = 1.0 / 3.0 - kW1;
constexpr QuadPoint kRule[6] = {
    {kB1, kA1, kA1, kW1}, {kA1, kB1, kA1, kW1}, {kA1, kA1, kB1, kW1},
    {kB2, kA2, kA2, kW2}, {kA2, kB2, kA2, kW2}, {kA2, kA2, kB2, kW2},
};

}  // namespace

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space, Vector coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (!space_) throw DimensionError("FeFunction: null space");
  if (static_cast<Index>(coeffs_.size()) != space_->size())
    throw DimensionError("FeFunction: " + std::to_string(coeffs_.size()) + " coefficients for space of size " +
                         std::to_string(space_->size()));
}

FeFunction FeFunction::zeros(std::shared_ptr<const FeSpace> space) {
  const auto n = static_cast<std::size_t>(space->size());
  return FeFunction(std::move(space), Vector(n, 0.0));
}

FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& g) {
  Vector c(static_cast<std::size_t>(space->size()));
  for (Index k = 0; k < space->size(); ++k) {
    const Point p = space->node(k);
    c[k] = g(p.x1, p.x2);
    if (!std::isfinite(c[k]))
      throw std::domain_error("interpolate: non-finite value at (" + std::to_string(p.x1) + ", " +
                              std::to_string(p.x2) + ")");
  }
  return FeFunction(std::move(space), std::move(c));
}

double l2_error(const FeFunction& fe, const ScalarField& exact) {
  const FeSpace& space = fe.space();
  const TriMesh& mesh = space.mesh();
  const auto verts = mesh.vertices();
  const auto tris = mesh.triangles();
  double sum = 0.0;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    double nodal[3];
    for (int a = 0; a < 3; ++a) {
      const Index dof = space.dof_of_vertex(tri[a]);
      nodal[a] = dof < 0 ? 0.0 : fe[dof];
    }
    const Point p0 = verts[tri[0]], p1 = verts[tri[1]], p2 = verts[tri[2]];
    double local = 0.0;
    for (const QuadPoint& q : kRule) {
      const double x1 = q.l0 * p0.x1 + q.l1 * p1.x1 + q.l2 * p2.x1;
      const double x2 = q.l0 * p0.x2 + q.l1 * p1.x2 + q.l2 * p2.x2;
      const double diff = q.l0 * nodal[0] + q.l1 * nodal[1] + q.l2 * nodal[2] - exact(x1, x2);
      local += q.w * diff * diff;
    }
    sum += mesh.triangle_area(t) * local;
  }
  return std::sqrt(sum);
}

double linf_nodal_error(const FeFunction& a, const FeFunction& b) {
  if (!a.same_space(b)) throw DimensionError("linf_nodal_error: functions live on different spaces");
  double m = 0.0;
  for (Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace nsoc::fe
