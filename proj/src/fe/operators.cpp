#include "nsoc/fe/operators.hpp"

#include "nsoc/errors.hpp"
#include "nsoc/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace nsoc::fe {

FeOperators assemble_operators(std::shared_ptr<const FeSpace> space) {
  const TriMesh& mesh = space->mesh();
  const auto verts = mesh.vertices();
  const auto tris = mesh.triangles();
  const Index n = space->size();

  std::vector<sparse::Triplet> a_entries, m_entries;
  a_entries.reserve(tris.size() * 9);
  m_entries.reserve(tris.size() * 9);
  Vector lumped(static_cast<std::size_t>(n), 0.0);

  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    const double area = mesh.triangle_area(t);
    // grad phi_a = (x2_b - x2_c, x1_c - x1_b) / (2 area) for (a, b, c) cyclic
    double gx[3], gy[3];
    for (int a = 0; a < 3; ++a) {
      const Point pb = verts[tri[(a + 1) % 3]], pc = verts[tri[(a + 2) % 3]];
      gx[a] = (pb.x2 - pc.x2) / (2.0 * area);
      gy[a] = (pc.x1 - pb.x1) / (2.0 * area);
    }
    for (int a = 0; a < 3; ++a) {
      const Index ra = space->dof_of_vertex(tri[a]);
      if (ra < 0) continue;
      lumped[ra] += area / 3.0;
      for (int b = 0; b < 3; ++b) {
        const Index rb = space->dof_of_vertex(tri[b]);
        if (rb < 0) continue;
        a_entries.push_back({ra, rb, area * (gx[a] * gx[b] + gy[a] * gy[b])});
        m_entries.push_back({ra, rb, area / 12.0 * (a == b ? 2.0 : 1.0)});
      }
    }
  }

  FeOperators ops{space,
                  CsrMatrix::from_triplets(n, n, a_entries),
                  CsrMatrix::from_triplets(n, n, m_entries),
                  CsrMatrix::diagonal(lumped),
                  lumped};
  return ops;
}

Vector FeOperators::mass_times(const FeFunction& g) const {
  if (g.size() != size()) throw DimensionError("mass_times: size mismatch");
  return mass.spmv(g.coeffs());
}

double FeOperators::l2_norm(const FeFunction& g) const { return l2_norm(g.coeffs()); }

double FeOperators::l2_norm(std::span<const double> c) const {
  const Vector mc = mass.spmv(c);
  return std::sqrt(std::max(0.0, simd::dot(c, mc)));
}

double FeOperators::h1_seminorm(std::span<const double> c) const {
  const Vector ac = stiffness.spmv(c);
  return std::sqrt(std::max(0.0, simd::dot(c, ac)));
}

}  // namespace nsoc::fe
