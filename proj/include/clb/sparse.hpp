#ifndef CLB_SPARSE_HPP_
#define CLB_SPARSE_HPP_

#include <cstdint>
#include <iosfwd>

#include <Eigen/SparseCore>

namespace clb {

// Row-compressed real matrix; column indices are strictly increasing per row
// once compressed.
using Index = std::int64_t;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;
using Triplet = Eigen::Triplet<double, std::int64_t>;

// Largest number of stored non-zeros in any row.
std::int64_t row_sparsity(const SparseMatrix& m);

// MatrixMarket `coordinate real general`, 1-based indices.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);

}  // namespace clb

#endif  // CLB_SPARSE_HPP_
