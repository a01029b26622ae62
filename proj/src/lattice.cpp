#include "clb/lattice.hpp"

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <ostream>

namespace clb {

namespace detail {
void warn_low_mach(double speed) {
  std::clog << "warning: |u| = " << speed
            << " exceeds 0.3 c_s; low-Mach expansion is inaccurate\n";
}
}  // namespace detail

std::string_view to_string(ModelId id) {
  switch (id) {
    case ModelId::D1Q3:
      return "D1Q3";
    case ModelId::D2Q9:
      return "D2Q9";
    case ModelId::D3Q27:
      return "D3Q27";
  }
  return "?";
}

ModelId parse_model_id(std::string_view name) {
  if (name == "D1Q3") return ModelId::D1Q3;
  if (name == "D2Q9") return ModelId::D2Q9;
  if (name == "D3Q27") return ModelId::D3Q27;
  throw InvalidInput("unknown lattice model '" + std::string(name) +
                     "' (expected D1Q3, D2Q9 or D3Q27)");
}

namespace {

double d1q3_weight(int c) { return c == 0 ? 2.0 / 3.0 : 1.0 / 6.0; }

LatticeModel build(ModelId id, int d, const std::vector<std::vector<int>>& vel) {
  LatticeModel m;
  m.id = id;
  m.dimension = d;
  const int b = static_cast<int>(vel.size());
  m.velocities.resize(b, d);
  m.weights.resize(b);
  for (int p = 0; p < b; ++p) {
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      m.velocities(p, a) = vel[p][a];
      w *= d1q3_weight(vel[p][a]);
    }
    m.weights(p) = w;
  }
  return m;
}

// Rank used to order the 3D set: rest, faces, edges, corners.
std::vector<std::vector<int>> d3q27_velocities() {
  std::vector<std::vector<int>> out;
  out.push_back({0, 0, 0});
  for (int s : {1, -1})
    for (int a = 0; a < 3; ++a) {
      std::vector<int> c(3, 0);
      c[a] = s;
      out.push_back(c);
    }
  std::vector<std::vector<int>> edges, corners;
  for (int z : {1, 0, -1})
    for (int y : {1, 0, -1})
      for (int x : {1, 0, -1}) {
        const int nz = (x != 0) + (y != 0) + (z != 0);
        if (nz == 2) edges.push_back({x, y, z});
        if (nz == 3) corners.push_back({x, y, z});
      }
  out.insert(out.end(), edges.begin(), edges.end());
  out.insert(out.end(), corners.begin(), corners.end());
  return out;
}

}  // namespace

LatticeModel make_model(ModelId id) {
  switch (id) {
    case ModelId::D1Q3:
      return build(id, 1, {{0}, {1}, {-1}});
    case ModelId::D2Q9:
      return build(id, 2,
                   {{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1},
                    {1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
    case ModelId::D3Q27:
      return build(id, 3, d3q27_velocities());
  }
  throw InvalidInput("unknown lattice model");
}

LatticeModel make_model(std::string_view name) { return make_model(parse_model_id(name)); }

Grid::Grid(std::vector<int> dims) : dims_(std::move(dims)) {
  require(!dims_.empty(), "grid: at least one axis required");
  sites_ = 1;
  for (int n : dims_) {
    require(n >= 1, "grid: axis lengths must be positive");
    sites_ *= n;
  }
}

std::vector<int> Grid::coordinates(Index site) const {
  std::vector<int> c(dims_.size());
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    c[a] = static_cast<int>(site % dims_[a]);
    site /= dims_[a];
  }
  return c;
}

Index Grid::site_index(const std::vector<int>& coords) const {
  Index s = 0;
  for (int a = dimension() - 1; a >= 0; --a) s = s * dims_[a] + coords[a];
  return s;
}

Index Grid::shifted(Index site, const Eigen::Ref<const Eigen::VectorXi>& shift) const {
  Index s = 0;
  Index stride = 1;
  for (int a = 0; a < dimension(); ++a) {
    const int n = dims_[a];
    const int c = static_cast<int>(site % n);
    site /= n;
    const int moved = ((c + shift(a)) % n + n) % n;
    s += moved * stride;
    stride *= n;
  }
  return s;
}

DistributionField uniform_field(const LatticeModel& model, const Grid& grid,
                                const Eigen::VectorXd& populations) {
  require(populations.size() == model.velocity_count(),
          "uniform_field: population count mismatch");
  require(grid.dimension() == model.dimension, "uniform_field: grid/model dimension mismatch");
  DistributionField f{model, grid, PopulationMatrix(grid.sites(), model.velocity_count())};
  f.values.rowwise() = populations.transpose();
  return f;
}

DistributionField equilibrium_field(const LatticeModel& model, const Grid& grid) {
  return uniform_field(model, grid, model.weights);
}

MacroFields macro_fields(const DistributionField& field) {
  MacroFields m;
  m.density = field.values.rowwise().sum();
  m.velocity = field.values * field.model.velocities.cast<double>();
  return m;
}

DistributionField collide(const DistributionField& field, double omega) {
  const LatticeModel& model = field.model;
  DistributionField out = field;
  const Eigen::MatrixXd cvel = model.velocities.cast<double>();
  for (Index x = 0; x < field.grid.sites(); ++x) {
    const Eigen::VectorXd f = field.values.row(x).transpose();
    const double rho = f.sum();
    const Eigen::VectorXd j = cvel.transpose() * f;
    const Eigen::VectorXd feq = equilibrium(rho, j, model);
    out.values.row(x) = (f - omega * (f - feq)).transpose();
  }
  return out;
}

DistributionField stream(const DistributionField& field) {
  DistributionField out = field;
  const int b = field.model.velocity_count();
  for (Index x = 0; x < field.grid.sites(); ++x)
    for (int p = 0; p < b; ++p) {
      const Index dest = field.grid.shifted(x, field.model.velocities.row(p).transpose());
      out.values(dest, p) = field.values(x, p);
    }
  return out;
}

DistributionField lbm_step(const DistributionField& field, double omega) {
  require(omega >= 0.0 && omega < 2.0, "lbm_step: omega must lie in [0, 2)");
  require(field.values.allFinite(), "lbm_step: non-finite populations");
  return stream(collide(field, omega));
}

DistributionField kolmogorov_init(const Grid& grid, double speed, int wavenumber,
                                  const LatticeModel& model, KolmogorovProfile profile) {
  if (model.dimension != 2 || grid.dimension() != 2)
    throw InvalidInput("kolmogorov_init: a two-dimensional model and grid are required");
  require(std::abs(speed) <= 0.2, "kolmogorov_init: |U| must not exceed 0.2");
  const double two_pi = 2.0 * std::numbers::pi;
  const int lx = grid.dims()[0];
  const int ly = grid.dims()[1];
  DistributionField f{model, grid, PopulationMatrix(grid.sites(), model.velocity_count())};
  for (Index s = 0; s < grid.sites(); ++s) {
    const auto c = grid.coordinates(s);
    Eigen::Vector2d u;
    if (profile == KolmogorovProfile::shear) {
      u << speed * std::sin(two_pi * wavenumber * c[1] / ly), 0.0;
    } else {
      const double a = speed / std::sqrt(2.0);
      u << a * std::sin(two_pi * wavenumber * c[1] / ly),
          a * std::sin(two_pi * wavenumber * c[0] / lx);
    }
    f.values.row(s) = equilibrium(1.0, u, model).transpose();
  }
  return f;
}

ReynoldsReport reynolds_report(double omega, double speed, double macroscale) {
  require(omega > 0.0 && omega < 2.0,
          "reynolds_report: omega must lie in (0, 2) for a positive viscosity");
  ReynoldsReport r;
  r.omega = omega;
  r.speed = speed;
  r.macroscale = macroscale;
  r.viscosity = (1.0 / 3.0) * (1.0 / omega - 0.5);
  r.reynolds = speed * macroscale / r.viscosity;
  r.kolmogorov_scale = macroscale / std::pow(r.reynolds, 0.75);
  return r;
}

void write_field_csv(std::ostream& out, const DistributionField& field) {
  const int d = field.grid.dimension();
  out << (d == 3 ? "x,y,z,p,f\n" : "x,y,p,f\n");
  out << std::setprecision(17);
  for (Index s = 0; s < field.grid.sites(); ++s) {
    const auto c = field.grid.coordinates(s);
    for (int p = 0; p < field.model.velocity_count(); ++p) {
      out << c[0] << ',' << (d >= 2 ? c[1] : 0) << ',';
      if (d == 3) out << c[2] << ',';
      out << p << ',' << field.values(s, p) << '\n';
    }
  }
}

}  // namespace clb
