#pragma once

#include "nsoc/fe/functions.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace nsoc::fe {

struct NamedField {
  std::string name;
  const FeFunction* field;
};

// Legacy ASCII VTK unstructured grid with one POINT_DATA scalar array per
// field; boundary vertices carry 0. All fields must share one space.
void export_vtk(const std::vector<NamedField>& fields, const std::filesystem::path& path);

}  // namespace nsoc::fe
