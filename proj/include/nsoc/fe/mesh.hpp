#pragma once

#include "nsoc/sparse/csr_matrix.hpp"

#include <array>
#include <span>
#include <vector>

namespace nsoc::fe {

using sparse::Index;

struct Point {
  double x1;
  double x2;
};

// Friedrichs-Keller triangulation of [0,1]^2 with m cells per side. Vertex
// (i, j) sits at (i/m, j/m) with index j*(m+1) + i. Every cell is split along
// its bottom-left to top-right diagonal into two positively oriented
// triangles of area h^2/2.
class TriMesh {
 public:
  explicit TriMesh(int m);

  int subdivisions() const noexcept { return m_; }
  double h() const noexcept { return 1.0 / m_; }

  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::span<const std::array<Index, 3>> triangles() const noexcept { return triangles_; }

  Index vertex_index(int i, int j) const noexcept { return j * (m_ + 1) + i; }
  bool on_boundary(Index v) const noexcept;
  double triangle_area(std::size_t t) const;

 private:
  int m_;
  std::vector<Point> vertices_;
  std::vector<std::array<Index, 3>> triangles_;
};

// Throws ConfigError for m < 2.
TriMesh build_mesh(int m);

// Homogeneous Dirichlet P1 space: one degree of freedom per interior vertex,
// ordered lexicographically in (j, i), i.e. row by row from the bottom.
class FeSpace {
 public:
  explicit FeSpace(TriMesh mesh);

  const TriMesh& mesh() const noexcept { return mesh_; }
  Index size() const noexcept { return static_cast<Index>(interior_.size()); }
  std::span<const Index> interior_nodes() const noexcept { return interior_; }

  // -1 for boundary vertices.
  Index dof_of_vertex(Index v) const { return dof_.at(static_cast<std::size_t>(v)); }
  Point node(Index dof) const { return mesh_.vertices()[interior_.at(static_cast<std::size_t>(dof))]; }

 private:
  TriMesh mesh_;
  std::vector<Index> interior_;
  std::vector<Index> dof_;
};

}  // namespace nsoc::fe
