#include "nsoc/fe/vtk.hpp"

#include "nsoc/errors.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace nsoc::fe {

void export_vtk(const std::vector<NamedField>& fields, const std::filesystem::path& path) {
  if (fields.empty()) throw ConfigError("export_vtk: no fields");
  for (const auto& f : fields) {
    if (!f.field) throw ConfigError("export_vtk: null field " + f.name);
    if (!f.field->same_space(*fields.front().field)) throw DimensionError("export_vtk: fields on different spaces");
    if (f.name.empty() || f.name.find_first_of(" \t\n") != std::string::npos)
      throw ConfigError("export_vtk: invalid array name '" + f.name + "'");
  }

  const FeSpace& space = fields.front().field->space();
  const TriMesh& mesh = space.mesh();
  const auto verts = mesh.vertices();
  const auto tris = mesh.triangles();

  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_vtk: cannot open " + path.string());
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n"
      << "P1 fields on " << mesh.subdivisions() << "x" << mesh.subdivisions() << " Friedrichs-Keller mesh\n"
      << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << verts.size() << " double\n";
  for (const Point& p : verts) out << p.x1 << ' ' << p.x2 << " 0\n";
  out << "CELLS " << tris.size() << ' ' << tris.size() * 4 << '\n';
  for (const auto& t : tris) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << tris.size() << '\n';
  for (std::size_t t = 0; t < tris.size(); ++t) out << "5\n";
  out << "POINT_DATA " << verts.size() << '\n';
  for (const auto& f : fields) {
    out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t v = 0; v < verts.size(); ++v) {
      const Index dof = space.dof_of_vertex(static_cast<Index>(v));
      out << (dof < 0 ? 0.0 : (*f.field)[dof]) << '\n';
    }
  }
  if (!out) throw std::runtime_error("export_vtk: write to " + path.string() + " failed");
}

}  // namespace nsoc::fe
