#include "clb/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "clb/error.hpp"

namespace clb {

namespace {

int qubits_for(Index dim) {
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  return n;
}

int letter_rank(char c) {
  switch (c) {
    case 'I': return 0;
    case 'X': return 1;
    case 'Y': return 2;
    default: return 3;
  }
}

void fwht(std::vector<std::complex<double>>& v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        const auto a = v[j];
        const auto b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

std::string word_of(std::uint64_t x, std::uint64_t z, int n) {
  std::string w(n, 'I');
  for (int k = 0; k < n; ++k) {
    const int bit = n - 1 - k;
    const bool xb = (x >> bit) & 1, zb = (z >> bit) & 1;
    w[k] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return w;
}

}  // namespace

PauliExpansion pauli_expand(const Eigen::MatrixXd& m, double drop) {
  require(m.rows() == m.cols() && m.rows() > 0, "pauli_expand: matrix must be square");
  require(m.allFinite(), "pauli_expand: non-finite entries");
  const int n = qubits_for(m.rows());
  if (n > kMaxPauliQubits)
    throw ResourceLimit("pauli_expand: " + std::to_string(n) + " qubits exceeds the cap of " +
                        std::to_string(kMaxPauliQubits) + " (4^n coefficients)");
  const std::uint64_t dim = std::uint64_t{1} << n;
  const Index rows = m.rows();
  PauliExpansion e;
  e.qubits = n;
  e.original_dimension = rows;
  e.frobenius_sq = m.squaredNorm();
  const double scale = 1.0 / static_cast<double>(dim);
  const std::complex<double> minus_i(0, -1);
  std::vector<std::complex<double>> v(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t c = 0; c < dim; ++c) {
      const std::uint64_t r = c ^ x;
      v[c] = (static_cast<Index>(r) < rows && static_cast<Index>(c) < rows)
                 ? m(static_cast<Index>(r), static_cast<Index>(c))
                 : 0.0;
    }
    fwht(v);
    for (std::uint64_t z = 0; z < dim; ++z) {
      std::complex<double> phase = 1;
      for (int k = std::popcount(x & z) % 4; k > 0; --k) phase *= minus_i;
      const std::complex<double> s = scale * phase * v[z];
      const double mag = std::abs(s);
      if (mag < drop) {
        e.dropped_weight += mag * mag;
        continue;
      }
      e.terms.push_back({word_of(x, z, n), s, mag});
    }
  }
  std::sort(e.terms.begin(), e.terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return std::lexicographical_compare(
        a.word.begin(), a.word.end(), b.word.begin(), b.word.end(),
        [](char p, char q) { return letter_rank(p) < letter_rank(q); });
  });
  return e;
}

PauliExpansion pauli_expand(const SparseMatrix& m, double drop) {
  return pauli_expand(Eigen::MatrixXd(m), drop);
}

ExpansionReport truncation_curve(const Eigen::MatrixXd& m) {
  ExpansionReport r;
  r.expansion = pauli_expand(m);
  const auto& e = r.expansion;
  require(e.frobenius_sq > 0, "truncation_curve: zero matrix has no relative distance");
  const double dim = std::ldexp(1.0, e.qubits);
  const std::size_t t = e.terms.size();
  // Tail sums keep every residual a sum of non-negative parts.
  std::vector<double> tail(t + 1);
  tail[t] = e.dropped_weight;
  for (std::size_t i = t; i-- > 0;) tail[i] = tail[i + 1] + e.terms[i].magnitude * e.terms[i].magnitude;
  const double norm = std::sqrt(e.frobenius_sq);
  r.distances.resize(t + 1);
  for (std::size_t i = 0; i <= t; ++i) r.distances[i] = std::sqrt(dim * tail[i]) / norm;
  return r;
}

ExpansionReport truncation_curve(const SparseMatrix& m) {
  return truncation_curve(Eigen::MatrixXd(m));
}

Eigen::MatrixXcd pauli_matrix(const std::string& word) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : word) {
    Eigen::Matrix2cd p;
    const std::complex<double> i(0, 1);
    switch (c) {
      case 'I': p << 1, 0, 0, 1; break;
      case 'X': p << 0, 1, 1, 0; break;
      case 'Y': p << 0, -i, i, 0; break;
      case 'Z': p << 1, 0, 0, -1; break;
      default: throw InvalidInput(std::string("pauli_matrix: bad letter '") + c + "'");
    }
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Index r = 0; r < out.rows(); ++r)
      for (Index k = 0; k < out.cols(); ++k) next.block(2 * r, 2 * k, 2, 2) = out(r, k) * p;
    out = std::move(next);
  }
  return out;
}

Eigen::MatrixXcd reconstruct(const PauliExpansion& e, std::size_t count) {
  const Index dim = Index{1} << e.qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  count = std::min(count, e.terms.size());
  for (std::size_t t = 0; t < count; ++t) {
    // Each word is a signed permutation: one entry per column.
    const auto& term = e.terms[t];
    for (Index c = 0; c < dim; ++c) {
      Index r = 0;
      std::complex<double> v = 1;
      for (int k = 0; k < e.qubits; ++k) {
        const int bit = e.qubits - 1 - k;
        const int cb = (c >> bit) & 1;
        int rb = cb;
        switch (term.word[k]) {
          case 'X': rb = 1 - cb; break;
          case 'Y': rb = 1 - cb; v *= std::complex<double>(0, cb ? -1 : 1); break;
          case 'Z': if (cb) v = -v; break;
          default: break;
        }
        r |= Index(rb) << bit;
      }
      m(r, c) += term.coefficient * v;
    }
  }
  return m;
}

void write_expansion_csv(std::ostream& out, const ExpansionReport& report) {
  out << "rank,word,re,im,magnitude,distance_after_rank\n" << std::setprecision(17);
  const auto& t = report.expansion.terms;
  for (std::size_t i = 0; i < t.size(); ++i)
    out << i + 1 << ',' << t[i].word << ',' << t[i].coefficient.real() << ','
        << t[i].coefficient.imag() << ',' << t[i].magnitude << ',' << report.distances[i + 1]
        << '\n';
}

}  // namespace clb
