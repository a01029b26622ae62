#ifndef CLB_CARLEMAN_HPP_
#define CLB_CARLEMAN_HPP_

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "clb/lattice.hpp"
#include "clb/sparse.hpp"

namespace clb {

// Second-order Carleman collision operator of a single site:
//   f'_p = sum_q linear(p,q) f_q + sum_{q<=r} quadratic(p, q*b+r) f_q f_r.
//
// `quadratic` keeps the combined coefficient of the monomial f_q f_r in the
// column with q <= r; columns with q > r are identically zero. Acting on a
// product state f (x) f it is equivalent to the symmetrised operator.
struct CollisionMatrices {
  Eigen::MatrixXd linear;     // b x b
  Eigen::MatrixXd quadratic;  // b x b^2
};

CollisionMatrices collision_matrices(const LatticeModel& model, double omega);

// [[linear, quadratic], [0, linear (x) linear]] for one site, (b+b^2)^2.
SparseMatrix single_site_relaxation(const LatticeModel& model, double omega);

// Index map of the truncated Carleman vector.
//   first order:  p*N + x
//   second order: b*N + ((p*b + q)*N + x)*N + y
struct CarlemanLayout {
  int velocities = 0;
  Index sites = 0;

  Index first_order_size() const { return velocities * sites; }
  Index second_order_size() const {
    return Index(velocities) * velocities * sites * sites;
  }
  Index size() const { return first_order_size() + second_order_size(); }
  Index first(int p, Index x) const { return p * sites + x; }
  Index second(int p, int q, Index x, Index y) const {
    return first_order_size() + ((Index(p) * velocities + q) * sites + x) * sites + y;
  }
};

struct CarlemanOptions {
  // Refuse to materialise a second-order block with more entries than this.
  Index max_second_order = Index{1} << 19;
};

struct CarlemanSystem {
  LatticeModel model;
  Grid grid;
  double omega = 0;
  CollisionMatrices collision;
  SparseMatrix coupling;    // N x N^2, one entry per site pairing x with (x, x)
  SparseMatrix relaxation;  // R
  SparseMatrix streaming;   // S (empty unless built)
  SparseMatrix step;        // S * R (empty unless built)
  double gamma = 1;         // max |entry| of R

  CarlemanLayout layout() const { return {model.velocity_count(), grid.sites()}; }
};

// R, coupling and gamma. Throws ResourceLimit above the configured cap.
CarlemanSystem build_relaxation(const LatticeModel& model, double omega, const Grid& grid,
                                const CarlemanOptions& options = {});
// Permutation matrix streaming both Carleman blocks.
SparseMatrix build_streaming(const LatticeModel& model, const Grid& grid,
                             const CarlemanOptions& options = {});
// Relaxation plus streaming and the full step matrix.
CarlemanSystem build_system(const LatticeModel& model, double omega, const Grid& grid,
                            const CarlemanOptions& options = {});

// max |entry| of R computed from the single-site blocks (valid for any N).
double relaxation_gamma(const CollisionMatrices& collision);

struct CarlemanState {
  Eigen::VectorXd first_order;
  Eigen::VectorXd second_order;
  int truncation_order = 2;

  Eigen::VectorXd stacked() const;
};

CarlemanState lift(const DistributionField& field,
                   const CarlemanOptions& options = {});
// F <- S (R F).
CarlemanState carleman_step(const CarlemanState& state, const CarlemanSystem& system);

// First-order block <-> site-major population matrix.
Eigen::VectorXd pack_first_order(const PopulationMatrix& values);
PopulationMatrix unpack_first_order(const Eigen::VectorXd& first, int velocities);

// Evolves the truncated system without materialising the second-order block.
//
// The second-order block obeys h(t+1) = (L (x) L) h(t) with L = S_1 (1 (x) A),
// and starts as g(0) (x) g(0), so h(t) = z(t) (x) z(t) with z(t+1) = L z(t).
// Only the local products z_q(x) z_r(x) enter the first-order update.
class FastCarlemanEvolution {
 public:
  FastCarlemanEvolution(const DistributionField& initial, double omega);

  void step();
  int time() const { return time_; }
  // Site-major first-order populations.
  const PopulationMatrix& populations() const { return first_; }
  Eigen::VectorXd first_order() const { return pack_first_order(first_); }

 private:
  DistributionField shape_;
  CollisionMatrices collision_;
  std::vector<std::vector<Index>> destination_;  // [p][x] -> x + c_p
  PopulationMatrix first_;
  PopulationMatrix linear_;
  int time_ = 0;
};

// First-order vectors for t = 0..steps.
std::vector<Eigen::VectorXd> fast_second_order_path(const DistributionField& initial,
                                                    double omega, int steps);

enum class ErrorMetric {
  population,  // |f_clb(x) - f_lbm(x)|_2 / |f_lbm(x)|_2 over the b populations
  velocity,    // |j_clb(x) - j_lbm(x)|_2 / |j_lbm(x)|_2
};

enum class Evolution { fast, explicit_matrix };

struct ErrorStats {
  int timestep = 0;
  Eigen::VectorXd per_site_error;  // excluded sites hold NaN
  double max = 0;
  double median = 0;
  double min = 0;
  double mean = 0;
};

struct MonitorSites {
  Index max_site = 0;
  Index median_site = 0;
  Index min_site = 0;
};

struct LbmComparison {
  std::vector<ErrorStats> series;  // t = 0..steps
  MonitorSites monitors;           // chosen from the final-time errors
  // monitor_series[t] = {eps(max_site), eps(median_site), eps(min_site)}
  std::vector<std::array<double, 3>> monitor_series;
  std::vector<Index> excluded_sites;
};

struct CompareOptions {
  ErrorMetric metric = ErrorMetric::population;
  Evolution evolution = Evolution::fast;
  CarlemanOptions carleman;
};

LbmComparison compare_to_lbm(const DistributionField& initial, double omega, int steps,
                             const CompareOptions& options = {});

ErrorStats error_stats(const Eigen::VectorXd& per_site, int timestep);

struct LogisticLadder {
  double u0 = 0;
  double nonlinearity = 0;
  int order = 1;
  double dt = 1e-3;
  std::vector<double> times;
  std::vector<double> u1;
};

// Explicit Euler on u_k' = -k (u_k - R u_{k+1}), u_K' = -K u_K, u_k(0) = u0^k.
LogisticLadder logistic_carleman(double u0, double nonlinearity, int order, double final_time,
                                 double dt = 1e-3);

// Explicit Euler on u' = -u (1 - R u) sampled at the requested times.
std::vector<double> logistic_reference(double u0, double nonlinearity,
                                       const std::vector<double>& times, double dt = 1e-6);

}  // namespace clb

#endif  // CLB_CARLEMAN_HPP_
