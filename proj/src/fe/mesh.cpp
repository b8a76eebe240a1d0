#include "nsoc/fe/mesh.hpp"

#include "nsoc/errors.hpp"

#include <cmath>
#include <string>

namespace nsoc::fe {

TriMesh::TriMesh(int m) : m_(m) {
  if (m < 2) throw ConfigError("mesh needs at least 2 subdivisions per side, got " + std::to_string(m));
  vertices_.reserve(static_cast<std::size_t>(m + 1) * (m + 1));
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i)
      vertices_.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});

  triangles_.reserve(2 * static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const Index v00 = vertex_index(i, j);
      const Index v10 = vertex_index(i + 1, j);
      const Index v01 = vertex_index(i, j + 1);
      const Index v11 = vertex_index(i + 1, j + 1);
      triangles_.push_back({v00, v10, v11});
      triangles_.push_back({v00, v11, v01});
    }
}

bool TriMesh::on_boundary(Index v) const noexcept {
  const int i = v % (m_ + 1);
  const int j = v / (m_ + 1);
  return i == 0 || j == 0 || i == m_ || j == m_;
}

double TriMesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles_.at(t);
  const Point a = vertices_[tri[0]], b = vertices_[tri[1]], c = vertices_[tri[2]];
  return 0.5 * ((b.x1 - a.x1) * (c.x2 - a.x2) - (c.x1 - a.x1) * (b.x2 - a.x2));
}

TriMesh build_mesh(int m) { return TriMesh(m); }

FeSpace::FeSpace(TriMesh mesh) : mesh_(std::move(mesh)) {
  const int m = mesh_.subdivisions();
  dof_.assign(mesh_.vertices().size(), -1);
  interior_.reserve(static_cast<std::size_t>(m - 1) * (m - 1));
  for (int j = 1; j < m; ++j)
    for (int i = 1; i < m; ++i) {
      const Index v = mesh_.vertex_index(i, j);
      dof_[v] = static_cast<Index>(interior_.size());
      interior_.push_back(v);
    }
}

}  // namespace nsoc::fe
