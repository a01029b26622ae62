#ifndef CLB_LATTICE_HPP_
#define CLB_LATTICE_HPP_

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "clb/error.hpp"

namespace clb {

using Index = std::int64_t;

enum class ModelId { D1Q3, D2Q9, D3Q27 };

std::string_view to_string(ModelId id);
ModelId parse_model_id(std::string_view name);

// DdQb velocity set built as the d-fold tensor product of D1Q3 = {0, +1, -1}.
//
// Velocity ordering: index 0 is the rest velocity, then the axis-aligned
// velocities, then the diagonals (grouped by number of non-zero components).
// Inside a group the order is +x, +y, (+z), -x, -y, (-z) for the axis set
// and, for D2Q9, counter-clockwise from (+1,+1). Every matrix layout in the
// library inherits this ordering.
struct LatticeModel {
  ModelId id = ModelId::D1Q3;
  int dimension = 1;
  Eigen::MatrixXi velocities;  // b x d
  Eigen::VectorXd weights;     // b
  double sound_speed_sq = 1.0 / 3.0;

  int velocity_count() const { return static_cast<int>(velocities.rows()); }
  Eigen::VectorXd velocity(int p) const {
    return velocities.row(p).transpose().cast<double>();
  }
};

LatticeModel make_model(ModelId id);
LatticeModel make_model(std::string_view name);

// Periodic Cartesian grid. Site index runs fastest along axis 0.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int dimension() const { return static_cast<int>(dims_.size()); }
  Index sites() const { return sites_; }

  std::vector<int> coordinates(Index site) const;
  Index site_index(const std::vector<int>& coords) const;
  // Site reached from `site` after moving by `shift` with periodic wrap.
  Index shifted(Index site, const Eigen::Ref<const Eigen::VectorXi>& shift) const;

 private:
  std::vector<int> dims_;
  Index sites_ = 0;
};

// Populations stored site-major, population-minor.
using PopulationMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct DistributionField {
  LatticeModel model;
  Grid grid;
  PopulationMatrix values;  // sites x b

  double total_mass() const { return values.sum(); }
};

// Density and momentum per site. Under the unit-density normalisation the
// momentum doubles as the velocity, which keeps the equilibrium an exact
// quadratic polynomial in the populations.
struct MacroFields {
  Eigen::VectorXd density;   // sites
  Eigen::MatrixXd velocity;  // sites x d
};

struct ReynoldsReport {
  double omega = 0;
  double viscosity = 0;
  double macroscale = 0;
  double speed = 0;
  double reynolds = 0;
  double kolmogorov_scale = 0;
};

enum class KolmogorovProfile {
  // u = (U sin(2 pi k y / Ly), 0)
  shear,
  // u = U/sqrt(2) (sin(2 pi k y / Ly), sin(2 pi k x / Lx))
  crossed,
};

namespace detail {
void warn_low_mach(double speed);
}

/// Second-order equilibrium for density `rho` and momentum `j`:
///   f_p = w_p (rho + c_p.j/cs2 + (c_p.j)^2/(2 cs2^2) - |j|^2/(2 cs2)).
/// With rho = 1 this is the textbook low-Mach equilibrium.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> equilibrium(
    typename Derived::Scalar rho, const Eigen::MatrixBase<Derived>& j,
    const LatticeModel& model) {
  using Scalar = typename Derived::Scalar;
  const Scalar cs2 = static_cast<Scalar>(model.sound_speed_sq);
  const Scalar jj = j.squaredNorm();
  const int b = model.velocity_count();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> feq(b);
  for (int p = 0; p < b; ++p) {
    Scalar cj = 0;
    for (int a = 0; a < model.dimension; ++a) cj += Scalar(model.velocities(p, a)) * j(a);
    feq(p) = Scalar(model.weights(p)) *
             (rho + cj / cs2 + cj * cj / (2 * cs2 * cs2) - jj / (2 * cs2));
  }
  return feq;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> equilibrium(
    const Eigen::MatrixBase<Derived>& u, const LatticeModel& model) {
  using Scalar = typename Derived::Scalar;
  require(u.size() == model.dimension, "equilibrium: velocity dimension mismatch");
  require(u.allFinite(), "equilibrium: non-finite velocity");
  const double speed = std::sqrt(static_cast<double>(u.squaredNorm()));
  if (speed > 0.3 * std::sqrt(model.sound_speed_sq)) detail::warn_low_mach(speed);
  return equilibrium(Scalar(1), u, model);
}

DistributionField uniform_field(const LatticeModel& model, const Grid& grid,
                                const Eigen::VectorXd& populations);
DistributionField equilibrium_field(const LatticeModel& model, const Grid& grid);

MacroFields macro_fields(const DistributionField& field);

// BGK relaxation towards the local equilibrium (no streaming).
DistributionField collide(const DistributionField& field, double omega);
// Periodic streaming f_p(x) -> f_p(x + c_p).
DistributionField stream(const DistributionField& field);
// One lattice Boltzmann step, lattice units dx = dt = 1. Requires 0 <= omega < 2.
DistributionField lbm_step(const DistributionField& field, double omega);

DistributionField kolmogorov_init(const Grid& grid, double speed, int wavenumber,
                                  const LatticeModel& model,
                                  KolmogorovProfile profile = KolmogorovProfile::crossed);

ReynoldsReport reynolds_report(double omega, double speed, double macroscale);

// CSV `x,y,p,f` (`x,y,z,p,f` in 3D), 17 significant digits.
void write_field_csv(std::ostream& out, const DistributionField& field);

}  // namespace clb

#endif  // CLB_LATTICE_HPP_
