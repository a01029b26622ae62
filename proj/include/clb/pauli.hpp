#ifndef CLB_PAULI_HPP_
#define CLB_PAULI_HPP_

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clb/sparse.hpp"

namespace clb {

// sigma = P_{w[0]} (x) ... (x) P_{w[n-1]}; w[0] acts on the most significant
// bit of the row/column index.
struct PauliTerm {
  std::string word;
  std::complex<double> coefficient;
  double magnitude = 0;
};

struct PauliExpansion {
  int qubits = 0;
  Index original_dimension = 0;
  std::vector<PauliTerm> terms;  // descending magnitude, ties by word (I<X<Y<Z)
  double dropped_weight = 0;     // sum |s|^2 over coefficients below the threshold
  double frobenius_sq = 0;       // |M_padded|_F^2
};

struct ExpansionReport {
  PauliExpansion expansion;
  // distances[n] = |M - sum_{i<n} s_i sigma_i|_F / |M|_F, n = 0..terms.size()
  std::vector<double> distances;
};

constexpr int kMaxPauliQubits = 12;
constexpr double kPauliDropThreshold = 1e-14;

// Exact expansion of a real square matrix zero-padded to 2^n.
PauliExpansion pauli_expand(const Eigen::MatrixXd& m, double drop = kPauliDropThreshold);
PauliExpansion pauli_expand(const SparseMatrix& m, double drop = kPauliDropThreshold);

ExpansionReport truncation_curve(const Eigen::MatrixXd& m);
ExpansionReport truncation_curve(const SparseMatrix& m);

// sum_{i<count} s_i sigma_i as a dense 2^n x 2^n matrix.
Eigen::MatrixXcd reconstruct(const PauliExpansion& e, std::size_t count);
Eigen::MatrixXcd pauli_matrix(const std::string& word);

// `rank,word,re,im,magnitude,distance_after_rank`
void write_expansion_csv(std::ostream& out, const ExpansionReport& report);

}  // namespace clb

#endif  // CLB_PAULI_HPP_
