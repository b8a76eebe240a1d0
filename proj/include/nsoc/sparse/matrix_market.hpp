#pragma once

#include "nsoc/sparse/csr_matrix.hpp"

#include <filesystem>
#include <iosfwd>

namespace nsoc::sparse {

// MatrixMarket "coordinate real general" text, 1-based indices, 17 significant
// digits so values survive a round trip.
void write_matrix_market(const CsrMatrix& m, std::ostream& out);
void write_matrix_market(const CsrMatrix& m, const std::filesystem::path& path);

CsrMatrix read_matrix_market(std::istream& in);

}  // namespace nsoc::sparse
