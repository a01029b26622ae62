#include "clb/sparse.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace clb {

std::int64_t row_sparsity(const SparseMatrix& m) {
  std::int64_t best = 0;
  for (std::int64_t r = 0; r < m.outerSize(); ++r) {
    std::int64_t count = 0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      if (it.value() != 0.0) ++count;
    best = std::max(best, count);
  }
  return best;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  out << std::setprecision(17);
  for (std::int64_t r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace clb
