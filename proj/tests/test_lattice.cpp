#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "clb/lattice.hpp"

using namespace clb;
using Catch::Approx;

namespace {

const ModelId kModels[] = {ModelId::D1Q3, ModelId::D2Q9, ModelId::D3Q27};

DistributionField random_field(const LatticeModel& m, const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.3);
  DistributionField f{m, g, PopulationMatrix(g.sites(), m.velocity_count())};
  for (Index x = 0; x < g.sites(); ++x)
    for (int p = 0; p < m.velocity_count(); ++p) f.values(x, p) = u(rng);
  return f;
}

}  // namespace

TEST_CASE("lattice models satisfy the moment conditions") {
  for (ModelId id : kModels) {
    const LatticeModel m = make_model(id);
    const int b = m.velocity_count();
    REQUIRE(b == static_cast<int>(std::pow(3, m.dimension)));
    CHECK(m.weights.sum() == Approx(1.0).epsilon(1e-15));
    CHECK((m.weights.array() > 0).all());
    const Eigen::MatrixXd c = m.velocities.cast<double>();
    const Eigen::VectorXd first = c.transpose() * m.weights;
    CHECK(first.cwiseAbs().maxCoeff() < 1e-15);
    const Eigen::MatrixXd second = c.transpose() * m.weights.asDiagonal() * c;
    const Eigen::MatrixXd want = Eigen::MatrixXd::Identity(m.dimension, m.dimension) / 3.0;
    CHECK((second - want).cwiseAbs().maxCoeff() < 1e-15);
    // All 3^d vectors over {-1, 0, 1}, each once, rest velocity first.
    CHECK(m.velocities.row(0).cwiseAbs().sum() == 0);
    std::set<std::vector<int>> seen;
    for (int p = 0; p < b; ++p) {
      std::vector<int> row;
      for (int a = 0; a < m.dimension; ++a) row.push_back(m.velocities(p, a));
      CHECK(std::all_of(row.begin(), row.end(), [](int k) { return k >= -1 && k <= 1; }));
      seen.insert(row);
    }
    CHECK(static_cast<int>(seen.size()) == b);
  }
}

TEST_CASE("velocity ordering groups rest, axis and diagonal velocities") {
  for (ModelId id : kModels) {
    const LatticeModel m = make_model(id);
    int last = 0;
    for (int p = 0; p < m.velocity_count(); ++p) {
      const int nz = (m.velocities.row(p).array() != 0).count();
      CHECK(nz >= last);
      last = nz;
    }
  }
  const LatticeModel d1 = make_model("D1Q3");
  CHECK(d1.velocities(1, 0) == 1);
  CHECK(d1.velocities(2, 0) == -1);
}

TEST_CASE("D3Q27 weights follow from the isotropy conditions") {
  // Unknowns: weights of the rest, face (6), edge (12) and corner (8) shells.
  // Rows: normalisation, second moment, fourth mixed moment, sixth mixed moment.
  Eigen::Matrix4d a;
  a << 1, 6, 12, 8,
       0, 2, 8, 8,
       0, 0, 4, 8,
       0, 0, 0, 8;
  Eigen::Vector4d rhs(1.0, 1.0 / 3, 1.0 / 9, 1.0 / 27);
  const Eigen::Vector4d shell = a.fullPivLu().solve(rhs);
  const LatticeModel m = make_model("D3Q27");
  for (int p = 0; p < 27; ++p) {
    const int nz = (m.velocities.row(p).array() != 0).count();
    CHECK(m.weights(p) == Approx(shell(nz)).epsilon(1e-14));
  }
}

TEST_CASE("unknown model names are rejected") {
  CHECK_THROWS_AS(make_model("D2Q7"), InvalidInput);
  CHECK_THROWS_AS(make_model(""), InvalidInput);
}

TEST_CASE("equilibrium examples") {
  const LatticeModel m = make_model("D1Q3");
  const Eigen::VectorXd zero = equilibrium(Eigen::VectorXd::Zero(1), m);
  CHECK((zero - m.weights).cwiseAbs().maxCoeff() < 1e-16);

  // Direct substitution with u = 0.1, u_p = 3 c_p u:
  //   rest: 2/3 (1 - 3/2 u^2); +1: 1/6 (1 + 3u + 3u^2); -1: 1/6 (1 - 3u + 3u^2)
  const double u = 0.1;
  const Eigen::VectorXd f = equilibrium(Eigen::VectorXd::Constant(1, u), m);
  CHECK(f(0) == Approx(2.0 / 3.0 * (1 - 1.5 * u * u)).epsilon(1e-14));
  CHECK(f(1) == Approx((1 + 3 * u + 3 * u * u) / 6.0).epsilon(1e-14));
  CHECK(f(2) == Approx((1 - 3 * u + 3 * u * u) / 6.0).epsilon(1e-14));
  CHECK(f(0) == Approx(0.6566666666666667).epsilon(1e-14));
  CHECK(f(1) == Approx(0.2216666666666667).epsilon(1e-14));
  CHECK(f(2) == Approx(0.1216666666666667).epsilon(1e-14));
}

TEST_CASE("equilibrium preserves density and momentum for random velocities") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dir(-1, 1), mag(0, 0.2);
  for (ModelId id : kModels) {
    const LatticeModel m = make_model(id);
    const Eigen::MatrixXd c = m.velocities.cast<double>();
    for (int i = 0; i < 1000; ++i) {
      Eigen::VectorXd u(m.dimension);
      for (int a = 0; a < m.dimension; ++a) u(a) = dir(rng);
      u *= mag(rng) / std::max(u.norm(), 1e-12);
      const Eigen::VectorXd f = equilibrium(1.0, u, m);
      CHECK(std::abs(f.sum() - 1.0) < 1e-14);
      CHECK((c.transpose() * f - u).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("equilibrium rejects bad velocities and warns at high Mach") {
  const LatticeModel m = make_model("D2Q9");
  CHECK_THROWS_AS(equilibrium(Eigen::VectorXd::Constant(1, 0.1), m), InvalidInput);
  Eigen::VectorXd bad(2);
  bad << std::nan(""), 0.0;
  CHECK_THROWS_AS(equilibrium(bad, m), InvalidInput);

  std::ostringstream sink;
  auto* old = std::clog.rdbuf(sink.rdbuf());
  equilibrium(Eigen::Vector2d(0.1, 0.0), m);
  const bool quiet = sink.str().empty();
  equilibrium(Eigen::Vector2d(0.25, 0.0), m);
  std::clog.rdbuf(old);
  CHECK(quiet);
  CHECK(sink.str().find("warning") != std::string::npos);
}

TEST_CASE("grid indexing wraps periodically") {
  const Grid g({4, 3});
  CHECK(g.sites() == 12);
  for (Index s = 0; s < g.sites(); ++s) CHECK(g.site_index(g.coordinates(s)) == s);
  CHECK(g.coordinates(5) == std::vector<int>{1, 1});
  CHECK(g.shifted(g.site_index({3, 2}), Eigen::Vector2i(1, 1)) == g.site_index({0, 0}));
  CHECK(g.shifted(g.site_index({0, 0}), Eigen::Vector2i(-1, -1)) == g.site_index({3, 2}));
  CHECK_THROWS_AS(Grid({4, 0}), InvalidInput);
}

TEST_CASE("lbm_step keeps the global equilibrium fixed") {
  for (ModelId id : kModels) {
    const LatticeModel m = make_model(id);
    const Grid g(std::vector<int>(m.dimension, 3));
    const DistributionField f = equilibrium_field(m, g);
    for (double w : {0.0, 0.5, 1.0, 1.9}) {
      const DistributionField n = lbm_step(f, w);
      CHECK((n.values - f.values).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("lbm_step conserves mass and collision conserves momentum") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> om(0.01, 1.99);
  for (ModelId id : kModels) {
    const LatticeModel m = make_model(id);
    const Grid g(std::vector<int>(m.dimension, 4));
    const Eigen::MatrixXd c = m.velocities.cast<double>();
    for (int i = 0; i < 20; ++i) {
      const DistributionField f = random_field(m, g, rng);
      const double w = om(rng);
      const DistributionField n = lbm_step(f, w);
      CHECK(std::abs(n.total_mass() - f.total_mass()) / f.total_mass() < 1e-12);
      const DistributionField k = collide(f, w);
      const Eigen::MatrixXd j0 = f.values * c, j1 = k.values * c;
      CHECK((j0 - j1).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("omega = 0 reduces lbm_step to streaming") {
  const LatticeModel m = make_model("D1Q3");
  const Grid g({6});
  DistributionField f{m, g, PopulationMatrix::Zero(6, 3)};
  f.values(2, 0) = 1.0;
  f.values(2, 1) = 2.0;
  f.values(2, 2) = 3.0;
  DistributionField n = f;
  for (int t = 1; t <= 4; ++t) {
    n = lbm_step(n, 0.0);
    CHECK(n.values(2, 0) == 1.0);
    CHECK(n.values((2 + t) % 6, 1) == 2.0);
    CHECK(n.values(((2 - t) % 6 + 6) % 6, 2) == 3.0);
    CHECK(n.values.sum() == 6.0);
  }

  std::mt19937_64 rng(3);
  const LatticeModel m2 = make_model("D2Q9");
  const DistributionField r = random_field(m2, Grid({5, 4}), rng);
  const DistributionField s = lbm_step(r, 0.0);
  std::vector<double> a(r.values.data(), r.values.data() + r.values.size());
  std::vector<double> b(s.values.data(), s.values.data() + s.values.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("lbm_step rejects omega outside [0, 2)") {
  const LatticeModel m = make_model("D1Q3");
  const DistributionField f = equilibrium_field(m, Grid({4}));
  CHECK_THROWS_AS(lbm_step(f, 2.0), InvalidInput);
  CHECK_THROWS_AS(lbm_step(f, -0.1), InvalidInput);
}

TEST_CASE("Kolmogorov initial condition") {
  const LatticeModel m = make_model("D2Q9");
  const Grid g({48, 48});
  for (auto profile : {KolmogorovProfile::shear, KolmogorovProfile::crossed}) {
    const DistributionField f = kolmogorov_init(g, 0.1, 1, m, profile);
    const MacroFields mf = macro_fields(f);
    CHECK((mf.density.array() - 1.0).abs().maxCoeff() < 1e-14);
    const double peak = mf.velocity.rowwise().norm().maxCoeff();
    CHECK(peak == Approx(0.1).epsilon(0.01));
  }
  const DistributionField still = kolmogorov_init(g, 0.0, 1, m);
  CHECK((still.values - equilibrium_field(m, g).values).cwiseAbs().maxCoeff() < 1e-16);
  CHECK_THROWS_AS(kolmogorov_init(Grid({8}), 0.1, 1, make_model("D1Q3")), InvalidInput);
  CHECK_THROWS_AS(kolmogorov_init(g, 0.3, 1, m), InvalidInput);
}

TEST_CASE("Reynolds mapping") {
  const ReynoldsReport a = reynolds_report(1.0, 0.1, 48);
  CHECK(a.viscosity == Approx(1.0 / 6.0));
  CHECK(a.reynolds == Approx(28.8));
  const ReynoldsReport b = reynolds_report(1.5, 0.1, 48);
  CHECK(b.viscosity == Approx(1.0 / 18.0));
  CHECK(b.reynolds == Approx(86.4));
  CHECK(reynolds_report(1.9, 0.1, 48).reynolds == Approx(547.2).margin(0.1));
  CHECK(a.kolmogorov_scale == Approx(48.0 / std::pow(28.8, 0.75)));
  CHECK_THROWS_AS(reynolds_report(2.0, 0.1, 48), InvalidInput);
  CHECK_THROWS_AS(reynolds_report(0.0, 0.1, 48), InvalidInput);
}

TEST_CASE("field CSV export") {
  const LatticeModel m = make_model("D2Q9");
  const DistributionField f = equilibrium_field(m, Grid({2, 2}));
  std::ostringstream out;
  write_field_csv(out, f);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,p,f");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4 * 9);
  CHECK(out.str().find("0.44444444444444442") != std::string::npos);
}
