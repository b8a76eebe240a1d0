#include "nsoc/errors.hpp"
#include "nsoc/fe/functions.hpp"
#include "nsoc/fe/mesh.hpp"
#include "nsoc/fe/operators.hpp"
#include "nsoc/fe/vtk.hpp"
#include "nsoc/simd/kernels.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <filesystem>
#include <map>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace nsoc;
using namespace nsoc::fe;
using std::numbers::pi;

namespace {

std::shared_ptr<const FeSpace> space_of(int m) { return std::make_shared<const FeSpace>(build_mesh(m)); }

std::shared_ptr<const FeOperators> ops_of(int m) {
  return std::make_shared<const FeOperators>(assemble_operators(space_of(m)));
}

double signed_area(const TriMesh& mesh, const std::array<Index, 3>& t) {
  const auto v = mesh.vertices();
  const Point a = v[t[0]], b = v[t[1]], c = v[t[2]];
  return 0.5 * ((b.x1 - a.x1) * (c.x2 - a.x2) - (c.x1 - a.x1) * (b.x2 - a.x2));
}

// Integral of (fe - g)^2 by uniform refinement of every triangle into k^2
// pieces with the edge-midpoint rule on each piece.
double refined_l2_error(const FeFunction& fe, const ScalarField& g, int k) {
  const auto& mesh = fe.space().mesh();
  const auto v = mesh.vertices();
  double sum = 0.0;
  for (const auto& t : mesh.triangles()) {
    const Point p0 = v[t[0]], p1 = v[t[1]], p2 = v[t[2]];
    double c[3];
    for (int q = 0; q < 3; ++q) {
      const Index dof = fe.space().dof_of_vertex(t[q]);
      c[q] = dof < 0 ? 0.0 : fe[dof];
    }
    const double area = std::abs(signed_area(mesh, t)) / (k * k);
    // Barycentric lattice points (i, j) / k.
    auto eval = [&](double l1, double l2) {
      const double l0 = 1.0 - l1 - l2;
      const double x = l0 * p0.x1 + l1 * p1.x1 + l2 * p2.x1;
      const double y = l0 * p0.x2 + l1 * p1.x2 + l2 * p2.x2;
      const double d = l0 * c[0] + l1 * c[1] + l2 * c[2] - g(x, y);
      return d * d;
    };
    auto piece = [&](double a1, double a2, double b1, double b2, double c1, double c2) {
      return area / 3.0 *
             (eval(0.5 * (a1 + b1), 0.5 * (a2 + b2)) + eval(0.5 * (b1 + c1), 0.5 * (b2 + c2)) +
              eval(0.5 * (a1 + c1), 0.5 * (a2 + c2)));
    };
    for (int i = 0; i < k; ++i)
      for (int j = 0; i + j < k; ++j) {
        const double s = 1.0 / k;
        sum += piece(i * s, j * s, (i + 1) * s, j * s, i * s, (j + 1) * s);
        if (i + j + 1 < k) sum += piece((i + 1) * s, j * s, (i + 1) * s, (j + 1) * s, i * s, (j + 1) * s);
      }
  }
  return std::sqrt(sum);
}

}  // namespace

TEST_CASE("mesh counts and geometry") {
  const auto mesh = build_mesh(2);
  CHECK(mesh.vertices().size() == 9);
  CHECK(mesh.triangles().size() == 8);
  const FeSpace space(mesh);
  REQUIRE(space.size() == 1);
  CHECK(space.node(0).x1 == 0.5);
  CHECK(space.node(0).x2 == 0.5);
  CHECK(build_mesh(33).h() == doctest::Approx(0.030303030303030304).epsilon(1e-15));
  CHECK(build_mesh(257).h() == doctest::Approx(0.003891050583658).epsilon(1e-12));
  CHECK_THROWS_AS(build_mesh(1), ConfigError);
}

TEST_CASE("triangles are positively oriented and tile the square") {
  for (int m : {2, 5, 16}) {
    const auto mesh = build_mesh(m);
    CHECK(mesh.triangles().size() == static_cast<std::size_t>(2 * m * m));
    CHECK(mesh.vertices().size() == static_cast<std::size_t>((m + 1) * (m + 1)));
    const double h = 1.0 / m;
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
      const double a = signed_area(mesh, mesh.triangles()[t]);
      CHECK(a == doctest::Approx(h * h / 2));
      CHECK(mesh.triangle_area(t) == doctest::Approx(h * h / 2));
      total += a;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    // Every interior edge is shared by exactly two triangles, boundary edges by one.
    std::map<std::pair<Index, Index>, int> edges;
    for (const auto& t : mesh.triangles())
      for (int e = 0; e < 3; ++e) {
        Index a = t[e], b = t[(e + 1) % 3];
        edges[{std::min(a, b), std::max(a, b)}]++;
      }
    for (const auto& [edge, count] : edges) {
      const Point p = mesh.vertices()[edge.first], q = mesh.vertices()[edge.second];
      const bool boundary = (p.x1 == 0.0 && q.x1 == 0.0) || (p.x1 == 1.0 && q.x1 == 1.0) ||
                            (p.x2 == 0.0 && q.x2 == 0.0) || (p.x2 == 1.0 && q.x2 == 1.0);
      CHECK(count == (boundary ? 1 : 2));
    }
  }
}

TEST_CASE("interior numbering is lexicographic") {
  const FeSpace space(build_mesh(4));
  REQUIRE(space.size() == 9);
  for (Index d = 0; d < 9; ++d) {
    const int i = d % 3 + 1, j = d / 3 + 1;
    CHECK(space.node(d).x1 == doctest::Approx(i / 4.0));
    CHECK(space.node(d).x2 == doctest::Approx(j / 4.0));
    CHECK(space.dof_of_vertex(space.mesh().vertex_index(i, j)) == d);
  }
  CHECK(space.dof_of_vertex(0) == -1);
}

TEST_CASE("single interior node values") {
  const auto ops = ops_of(2);
  CHECK(ops->stiffness.coeff(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(ops->lumped[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ops->mass.coeff(0, 0) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("stiffness is the five-point stencil") {
  const int m = 7;
  const auto ops = ops_of(m);
  const auto& s = *ops->space;
  const int k = m - 1;
  for (Index r = 0; r < s.size(); ++r) {
    const int i = r % k, j = r / k;
    CHECK(ops->stiffness.coeff(r, r) == doctest::Approx(4.0));
    for (Index c = 0; c < s.size(); ++c) {
      if (c == r) continue;
      const int ci = c % k, cj = c / k;
      const bool neighbour = std::abs(ci - i) + std::abs(cj - j) == 1;
      CHECK(ops->stiffness.coeff(r, c) == doctest::Approx(neighbour ? -1.0 : 0.0));
    }
  }
}

TEST_CASE("operator structure") {
  const int m = 9;
  const auto ops = ops_of(m);
  const auto& s = *ops->space;
  CHECK(ops->stiffness.is_symmetric(1e-15));
  CHECK(ops->mass.is_symmetric(1e-15));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto x = testutil::random_vector(static_cast<std::size_t>(s.size()), rng);
    CHECK(simd::dot(x, ops->stiffness.spmv(x)) > 0.0);
    CHECK(simd::dot(x, ops->mass.spmv(x)) > 0.0);
  }
  for (double d : ops->lumped) CHECK(d > 0.0);
  // Mass row sums equal the lumped entries away from the boundary.
  const auto rs = ops->mass.row_sums();
  const double h = 1.0 / m;
  for (Index r = 0; r < s.size(); ++r) {
    const auto p = s.node(r);
    if (p.x1 > 1.5 * h && p.x1 < 1 - 1.5 * h && p.x2 > 1.5 * h && p.x2 < 1 - 1.5 * h)
      CHECK(rs[r] == doctest::Approx(ops->lumped[r]).epsilon(1e-14));
  }
  // Sum of D equals the triangle areas weighted by interior vertex counts / 3.
  double expected = 0.0;
  const auto& mesh = s.mesh();
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    int interior = 0;
    for (Index v : mesh.triangles()[t]) interior += mesh.on_boundary(v) ? 0 : 1;
    expected += mesh.triangle_area(t) * interior / 3.0;
  }
  double sum = 0.0;
  for (double d : ops->lumped) sum += d;
  CHECK(sum == doctest::Approx(expected).epsilon(1e-14));
  CHECK(sum <= 1.0);
}

TEST_CASE("affine functions are discretely harmonic") {
  const int m = 8;
  const auto ops = ops_of(m);
  const auto g = interpolate(ops->space, [](double x, double y) { return 2.0 * x - 3.0 * y + 0.5; });
  const auto ag = ops->stiffness.spmv(g.coeffs());
  const double h = 1.0 / m;
  for (Index r = 0; r < ops->size(); ++r) {
    const auto p = ops->space->node(r);
    if (p.x1 > 1.5 * h && p.x1 < 1 - 1.5 * h && p.x2 > 1.5 * h && p.x2 < 1 - 1.5 * h)
      CHECK(std::abs(ag[r]) <= 1e-12);
  }
}

TEST_CASE("interpolate") {
  const auto s = space_of(2);
  CHECK(interpolate(s, [](double, double) { return 0.0; })[0] == 0.0);
  CHECK(interpolate(s, [](double x, double) { return x; })[0] == 0.5);
  CHECK(std::abs(interpolate(s, [](double x, double y) { return std::sin(pi * x) * std::sin(2 * pi * y); })[0]) <=
        1e-15);
  CHECK_THROWS_AS(interpolate(s, [](double, double) { return std::nan(""); }), std::domain_error);
}

TEST_CASE("l2_error") {
  const auto s = space_of(16);
  SUBCASE("interpolated constant has zero error") {
    // Only the zero constant is representable with homogeneous boundary values.
    const auto c = interpolate(s, [](double, double) { return 0.0; });
    CHECK(l2_error(c, [](double, double) { return 0.0; }) <= 1e-14);
  }
  SUBCASE("norm of sin sin") {
    const double v = l2_error(FeFunction::zeros(s), [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    CHECK(v == doctest::Approx(0.5).epsilon(1e-4));
  }
  SUBCASE("agrees with a refined-quadrature oracle") {
    const auto s33 = space_of(33);
    const ScalarField y = [](double x, double z) { return std::sin(pi * x) * std::sin(2 * pi * z); };
    const auto yi = interpolate(s33, y);
    const double rule = l2_error(yi, y);
    const double oracle = refined_l2_error(yi, y, 6);
    CHECK(rule == doctest::Approx(oracle).epsilon(2e-3));
    const double norm = l2_error(FeFunction::zeros(s33), y);
    CHECK(norm == doctest::Approx(refined_l2_error(FeFunction::zeros(s33), y, 6)).epsilon(1e-6));
    CHECK(norm == doctest::Approx(0.5).epsilon(1e-4));
  }
}

TEST_CASE("linf_nodal_error") {
  const auto s = space_of(3);
  auto a = FeFunction::zeros(s);
  const auto b = FeFunction::zeros(s);
  CHECK(linf_nodal_error(a, a) == 0.0);
  a[0] = 1.0;
  CHECK(linf_nodal_error(a, b) == 1.0);
  CHECK_THROWS_AS(linf_nodal_error(a, FeFunction::zeros(space_of(3))), DimensionError);
}

TEST_CASE("operators apply to functions") {
  const auto ops = ops_of(5);
  const auto one = interpolate(ops->space, [](double, double) { return 1.0; });
  const auto mo = ops->mass_times(one);
  double s = 0.0;
  for (double v : mo) s += v;
  CHECK(ops->l2_norm(one) == doctest::Approx(std::sqrt(s)));
  CHECK(ops->h1_seminorm(one.coeffs()) > 0.0);
}

namespace {

struct ParsedVtk {
  std::size_t n_points = 0, n_cells = 0;
  std::vector<std::array<double, 3>> points;
  std::map<std::string, std::vector<double>> fields;
};

ParsedVtk parse_vtk(const std::filesystem::path& path) {
  std::ifstream in(path);
  ParsedVtk out;
  std::string tok;
  while (in >> tok) {
    if (tok == "POINTS") {
      std::string type;
      in >> out.n_points >> type;
      out.points.resize(out.n_points);
      for (auto& p : out.points) in >> p[0] >> p[1] >> p[2];
    } else if (tok == "CELLS") {
      std::size_t total;
      in >> out.n_cells >> total;
      for (std::size_t k = 0; k < total; ++k) in >> tok;
    } else if (tok == "CELL_TYPES") {
      std::size_t n;
      in >> n;
      for (std::size_t k = 0; k < n; ++k) {
        int type;
        in >> type;
        REQUIRE(type == 5);
      }
    } else if (tok == "SCALARS") {
      std::string name, type, lookup, table;
      int components;
      in >> name >> type >> components >> lookup >> table;
      REQUIRE(components == 1);
      REQUIRE(lookup == "LOOKUP_TABLE");
      std::vector<double> v(out.n_points);
      for (auto& x : v) in >> x;
      out.fields[name] = v;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("VTK export parses back exactly") {
  const auto dir = std::filesystem::temp_directory_path() / "nsoc_test_vtk";
  std::filesystem::create_directories(dir);
  SUBCASE("zero field on the coarsest mesh") {
    const auto s = space_of(2);
    const auto z = FeFunction::zeros(s);
    export_vtk({{"y", &z}}, dir / "zero.vtk");
    const auto p = parse_vtk(dir / "zero.vtk");
    CHECK(p.n_points == 9);
    CHECK(p.n_cells == 8);
    CHECK(p.fields.size() == 1);
  }
  SUBCASE("two fields") {
    const auto s = space_of(6);
    const auto y = interpolate(s, [](double x, double z) { return std::exp(x) * std::sin(pi * z) / 3.0; });
    const auto q = interpolate(s, [](double x, double z) { return -x * z * (1 - x) / 7.0; });
    export_vtk({{"y", &y}, {"p", &q}}, dir / "two.vtk");
    const auto p = parse_vtk(dir / "two.vtk");
    REQUIRE(p.fields.size() == 2);
    const auto& mesh = s->mesh();
    for (std::size_t v = 0; v < p.n_points; ++v) {
      CHECK(p.points[v][0] == mesh.vertices()[v].x1);
      CHECK(p.points[v][1] == mesh.vertices()[v].x2);
      const Index dof = s->dof_of_vertex(static_cast<Index>(v));
      CHECK(p.fields.at("y")[v] == (dof < 0 ? 0.0 : y[dof]));
      CHECK(p.fields.at("p")[v] == (dof < 0 ? 0.0 : q[dof]));
    }
  }
  SUBCASE("invalid input") {
    const auto a = FeFunction::zeros(space_of(2));
    const auto b = FeFunction::zeros(space_of(2));
    CHECK_THROWS(export_vtk({}, dir / "x.vtk"));
    CHECK_THROWS(export_vtk({{"a", &a}, {"b", &b}}, dir / "x.vtk"));
    CHECK_THROWS(export_vtk({{"a b", &a}}, dir / "x.vtk"));
    CHECK_THROWS(export_vtk({{"a", &a}}, dir / "missing_dir" / "x.vtk"));
  }
}
