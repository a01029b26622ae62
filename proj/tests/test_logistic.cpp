#include <cmath>

#include <catch_amalgamated.hpp>

#include "clb/carleman.hpp"

using namespace clb;
using Catch::Approx;

namespace {
// Closed-form solution of u' = -u (1 - R u): 1/u satisfies v' = v - R.
double exact(double u0, double r, double t) { return 1.0 / (r + (1.0 / u0 - r) * std::exp(t)); }
}  // namespace

TEST_CASE("ladder initial conditions and sampling") {
  const LogisticLadder l = logistic_carleman(0.5, 0.2, 3, 1.0);
  CHECK(l.u1.front() == 0.5);
  CHECK(l.times.size() == 1001);
  CHECK(l.times.back() == Approx(1.0));
  CHECK(l.order == 3);
}

TEST_CASE("R = 0 reduces to Euler decay") {
  for (int k : {1, 2, 5}) {
    const LogisticLadder l = logistic_carleman(0.7, 0.0, k, 1.0, 1e-3);
    CHECK(l.u1.back() == Approx(0.7 * std::pow(1 - 1e-3, 1000)).epsilon(1e-13));
  }
}

TEST_CASE("u0 = 0 stays zero") {
  const LogisticLadder l = logistic_carleman(0.0, 0.2, 4, 1.0);
  for (double v : l.u1) CHECK(v == 0.0);
}

TEST_CASE("fine reference integration matches the closed form") {
  const std::vector<double> t{0.0, 0.25, 0.5, 1.0};
  const auto ref = logistic_reference(0.5, 0.2, t);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(ref[i] == Approx(exact(0.5, 0.2, t[i])).epsilon(1e-6));
}

TEST_CASE("truncation error decreases with the ladder order") {
  const std::vector<double> t{1.0};
  const double ref = logistic_reference(0.5, 0.2, t)[0];
  double previous = INFINITY;
  for (int k = 1; k <= 5; ++k) {
    const double err = std::abs(logistic_carleman(0.5, 0.2, k, 1.0).u1.back() - ref);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("ladder rejects invalid arguments") {
  CHECK_THROWS_AS(logistic_carleman(0.5, 0.2, 0, 1.0), InvalidInput);
  CHECK_THROWS_AS(logistic_carleman(0.5, 0.2, 2, 1.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(logistic_reference(0.5, 0.2, {1.0, 0.5}), InvalidInput);
}
