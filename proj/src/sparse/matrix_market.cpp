#include "nsoc/sparse/matrix_market.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nsoc::sparse {

void write_matrix_market(const CsrMatrix& m, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  out << std::setprecision(17);
  for (const Triplet& t : m.to_triplets()) out << t.row + 1 << ' ' << t.col + 1 << ' ' << t.value << '\n';
}

void write_matrix_market(const CsrMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrix_market(m, out);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix coordinate real general", 0) != 0)
    throw std::runtime_error("read_matrix_market: unsupported header");
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream dims(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(dims >> rows >> cols >> nnz)) throw std::runtime_error("read_matrix_market: bad size line");
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (long k = 0; k < nnz; ++k) {
    long r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) throw std::runtime_error("read_matrix_market: truncated entries");
    entries.push_back({static_cast<Index>(r - 1), static_cast<Index>(c - 1), v});
  }
  return CsrMatrix::from_triplets(static_cast<Index>(rows), static_cast<Index>(cols), entries);
}

}  // namespace nsoc::sparse
