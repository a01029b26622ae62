#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "clb/carleman.hpp"
#include "clb/pauli.hpp"

using namespace clb;
using Catch::Approx;

namespace {

Eigen::MatrixXd random_matrix(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = n01(rng);
  return m;
}

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(a.rows(), a.cols());
  padded.topLeftCorner(b.rows(), b.cols()) = b.cast<std::complex<double>>();
  return (a - padded).cwiseAbs().maxCoeff();
}

int count_y(const std::string& w) { return static_cast<int>(std::count(w.begin(), w.end(), 'Y')); }

}  // namespace

TEST_CASE("identity expands to a single identity word") {
  for (int n = 1; n <= 4; ++n) {
    const PauliExpansion e = pauli_expand(Eigen::MatrixXd::Identity(1 << n, 1 << n));
    REQUIRE(e.terms.size() == 1);
    CHECK(e.terms[0].word == std::string(n, 'I'));
    CHECK(std::abs(e.terms[0].coefficient - 1.0) < 1e-15);
  }
}

TEST_CASE("single Pauli matrices") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  const PauliExpansion ex = pauli_expand(x);
  REQUIRE(ex.terms.size() == 1);
  CHECK(ex.terms[0].word == "X");
  CHECK(std::abs(ex.terms[0].coefficient - 1.0) < 1e-15);

  // i Y = [[0, 1], [-1, 0]] is real.
  Eigen::MatrixXd iy(2, 2);
  iy << 0, 1, -1, 0;
  const PauliExpansion ey = pauli_expand(iy);
  REQUIRE(ey.terms.size() == 1);
  CHECK(ey.terms[0].word == "Y");
  CHECK(std::abs(ey.terms[0].coefficient - std::complex<double>(0, 1)) < 1e-15);
}

TEST_CASE("first letter acts on the most significant bit") {
  Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(4, 4);
  // X (x) I swaps index 0 <-> 2 and 1 <-> 3.
  xi(2, 0) = xi(0, 2) = xi(3, 1) = xi(1, 3) = 1;
  const PauliExpansion e = pauli_expand(xi);
  REQUIRE(e.terms.size() == 1);
  CHECK(e.terms[0].word == "XI");
  CHECK(pauli_matrix("XI").real().isApprox(xi));
}

TEST_CASE("coefficients equal normalised traces") {
  const Eigen::MatrixXd m = random_matrix(4, 3);
  const PauliExpansion e = pauli_expand(m);
  CHECK(e.terms.size() == 16);
  for (const auto& t : e.terms) {
    const std::complex<double> tr =
        (pauli_matrix(t.word).adjoint() * m.cast<std::complex<double>>()).trace() / 4.0;
    CHECK(std::abs(tr - t.coefficient) < 1e-14);
  }
}

TEST_CASE("random matrices reconstruct exactly and satisfy Parseval") {
  for (Index dim : {3, 8, 13}) {
    const Eigen::MatrixXd m = random_matrix(dim, 100 + dim);
    const PauliExpansion e = pauli_expand(m);
    CHECK(max_diff(reconstruct(e, e.terms.size()), m) < 1e-12);
    double s = e.dropped_weight;
    for (const auto& t : e.terms) s += t.magnitude * t.magnitude;
    CHECK(std::ldexp(s, e.qubits) == Approx(m.squaredNorm()).epsilon(1e-12));
    for (const auto& t : e.terms) {
      if (count_y(t.word) % 2 == 0)
        CHECK(std::abs(t.coefficient.imag()) < 1e-12);
      else
        CHECK(std::abs(t.coefficient.real()) < 1e-12);
    }
  }
}

TEST_CASE("D2Q9 single-site relaxation expansion") {
  const Eigen::MatrixXd r(single_site_relaxation(make_model("D2Q9"), 1.0));
  const ExpansionReport rep = truncation_curve(r);
  const auto& e = rep.expansion;
  CHECK(e.qubits == 7);
  CHECK(e.original_dimension == 90);
  CHECK(max_diff(reconstruct(e, e.terms.size()), r) < 1e-12);
  CHECK(rep.distances.front() == Approx(1.0).epsilon(1e-14));
  CHECK(rep.distances.back() <= 1e-12);
  for (std::size_t i = 1; i < rep.distances.size(); ++i)
    CHECK(rep.distances[i] <= rep.distances[i - 1]);
  for (std::size_t i = 1; i < e.terms.size(); ++i)
    CHECK(e.terms[i].magnitude <= e.terms[i - 1].magnitude);
  double s = e.dropped_weight;
  for (const auto& t : e.terms) s += t.magnitude * t.magnitude;
  CHECK(std::ldexp(s, 7) == Approx(r.squaredNorm()).epsilon(1e-12));

  // A truncated sum sits at the reported distance.
  const std::size_t k = e.terms.size() / 3;
  Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(128, 128);
  padded.topLeftCorner(90, 90) = r.cast<std::complex<double>>();
  const double direct = (padded - reconstruct(e, k)).norm() / r.norm();
  CHECK(direct == Approx(rep.distances[k]).epsilon(1e-10));

  const ExpansionReport again = truncation_curve(r);
  CHECK(again.distances == rep.distances);
  for (std::size_t i = 0; i < e.terms.size(); ++i) CHECK(again.expansion.terms[i].word == e.terms[i].word);
}

TEST_CASE("ties are broken by word order") {
  // Z (x) I + I (x) Z + X (x) X: three equal magnitudes.
  const Eigen::MatrixXd m =
      (pauli_matrix("ZI") + pauli_matrix("IZ") + pauli_matrix("XX")).real();
  const PauliExpansion e = pauli_expand(m);
  REQUIRE(e.terms.size() == 3);
  CHECK(e.terms[0].word == "IZ");
  CHECK(e.terms[1].word == "XX");
  CHECK(e.terms[2].word == "ZI");
}

TEST_CASE("expansion input validation") {
  CHECK_THROWS_AS(truncation_curve(Eigen::MatrixXd::Zero(4, 4)), InvalidInput);
  CHECK_THROWS_AS(pauli_expand(Eigen::MatrixXd::Zero(4, 3)), InvalidInput);
  CHECK_THROWS_AS(pauli_expand(Eigen::MatrixXd::Zero(4097, 4097)), ResourceLimit);
}

TEST_CASE("expansion CSV") {
  const ExpansionReport rep = truncation_curve(Eigen::MatrixXd::Identity(4, 4));
  std::ostringstream out;
  write_expansion_csv(out, rep);
  CHECK(out.str() == "rank,word,re,im,magnitude,distance_after_rank\n1,II,1,0,1,0\n");
}
