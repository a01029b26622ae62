#include "clb/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace clb {

CollisionMatrices collision_matrices(const LatticeModel& model, double omega) {
  const int b = model.velocity_count();
  const double cs2 = model.sound_speed_sq;
  const Eigen::MatrixXd c = model.velocities.cast<double>();
  CollisionMatrices m;
  m.linear.resize(b, b);
  m.quadratic = Eigen::MatrixXd::Zero(b, b * b);
  for (int p = 0; p < b; ++p)
    for (int q = 0; q < b; ++q)
      m.linear(p, q) = (p == q ? 1.0 - omega : 0.0) +
                       omega * model.weights(p) * (1.0 + c.row(p).dot(c.row(q)) / cs2);
  for (int p = 0; p < b; ++p)
    for (int q = 0; q < b; ++q)
      for (int r = q; r < b; ++r) {
        // Bracket kept integral so structural zeros stay exact.
        const double k = c.row(p).dot(c.row(q)) * c.row(p).dot(c.row(r)) / cs2 -
                         c.row(q).dot(c.row(r));
        const double s = omega * model.weights(p) * k / (2 * cs2);
        m.quadratic(p, q * b + r) = q == r ? s : 2 * s;
      }
  return m;
}

SparseMatrix single_site_relaxation(const LatticeModel& model, double omega) {
  const int b = model.velocity_count();
  const CollisionMatrices m = collision_matrices(model, omega);
  std::vector<Triplet> t;
  for (int p = 0; p < b; ++p) {
    for (int q = 0; q < b; ++q)
      if (m.linear(p, q) != 0) t.emplace_back(p, q, m.linear(p, q));
    for (int k = 0; k < b * b; ++k)
      if (m.quadratic(p, k) != 0) t.emplace_back(p, b + k, m.quadratic(p, k));
  }
  for (int p = 0; p < b; ++p)
    for (int q = 0; q < b; ++q)
      for (int pp = 0; pp < b; ++pp)
        for (int qq = 0; qq < b; ++qq) {
          const double v = m.linear(p, pp) * m.linear(q, qq);
          if (v != 0) t.emplace_back(b + p * b + q, b + pp * b + qq, v);
        }
  SparseMatrix r(b + b * b, b + b * b);
  r.setFromTriplets(t.begin(), t.end());
  return r;
}

double relaxation_gamma(const CollisionMatrices& collision) {
  const double a = collision.linear.cwiseAbs().maxCoeff();
  const double q = collision.quadratic.cwiseAbs().maxCoeff();
  return std::max({a, q, a * a});
}

namespace {

void check_cap(const CarlemanLayout& layout, const CarlemanOptions& options) {
  if (layout.second_order_size() > options.max_second_order)
    throw ResourceLimit("second-order Carleman block has " +
                        std::to_string(layout.second_order_size()) +
                        " entries, above the cap max_second_order = " +
                        std::to_string(options.max_second_order));
}

void check_model_grid(const LatticeModel& model, const Grid& grid) {
  require(grid.dimension() == model.dimension, "carleman: grid/model dimension mismatch");
  require(grid.sites() >= 1, "carleman: empty grid");
}

std::vector<std::vector<Index>> destinations(const LatticeModel& model, const Grid& grid) {
  const int b = model.velocity_count();
  std::vector<std::vector<Index>> d(b, std::vector<Index>(grid.sites()));
  for (int p = 0; p < b; ++p) {
    const Eigen::VectorXi c = model.velocities.row(p).transpose();
    for (Index x = 0; x < grid.sites(); ++x) d[p][x] = grid.shifted(x, c);
  }
  return d;
}

}  // namespace

CarlemanSystem build_relaxation(const LatticeModel& model, double omega, const Grid& grid,
                                const CarlemanOptions& options) {
  check_model_grid(model, grid);
  require(std::isfinite(omega), "carleman: omega must be finite");
  CarlemanSystem sys{model, grid, omega, collision_matrices(model, omega), {}, {}, {}, {}, 1.0};
  const CarlemanLayout L = sys.layout();
  check_cap(L, options);
  const int b = L.velocities;
  const Index n = L.sites;
  const auto& A = sys.collision.linear;
  const auto& B = sys.collision.quadratic;

  std::vector<Triplet> c;
  c.reserve(n);
  for (Index y = 0; y < n; ++y) c.emplace_back(y, y * (n + 1), 1.0);
  sys.coupling.resize(n, n * n);
  sys.coupling.setFromTriplets(c.begin(), c.end());

  const Index nnz_a = (A.array() != 0).count();
  const Index nnz_b = (B.array() != 0).count();
  std::vector<Triplet> t;
  t.reserve(n * (nnz_a + nnz_b) + n * n * nnz_a * nnz_a);
  for (int p = 0; p < b; ++p)
    for (Index x = 0; x < n; ++x) {
      for (int q = 0; q < b; ++q)
        if (A(p, q) != 0) t.emplace_back(L.first(p, x), L.first(q, x), A(p, q));
      for (int q = 0; q < b; ++q)
        for (int r = 0; r < b; ++r)
          if (B(p, q * b + r) != 0)
            t.emplace_back(L.first(p, x), L.second(q, r, x, x), B(p, q * b + r));
    }
  for (int p = 0; p < b; ++p)
    for (int q = 0; q < b; ++q)
      for (int pp = 0; pp < b; ++pp) {
        if (A(p, pp) == 0) continue;
        for (int qq = 0; qq < b; ++qq) {
          const double v = A(p, pp) * A(q, qq);
          if (v == 0) continue;
          for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
              t.emplace_back(L.second(p, q, x, y), L.second(pp, qq, x, y), v);
        }
      }
  sys.relaxation.resize(L.size(), L.size());
  sys.relaxation.setFromTriplets(t.begin(), t.end());
  sys.gamma = relaxation_gamma(sys.collision);
  return sys;
}

SparseMatrix build_streaming(const LatticeModel& model, const Grid& grid,
                             const CarlemanOptions& options) {
  check_model_grid(model, grid);
  const CarlemanLayout L{model.velocity_count(), grid.sites()};
  check_cap(L, options);
  const auto dest = destinations(model, grid);
  const int b = L.velocities;
  const Index n = L.sites;
  std::vector<Triplet> t;
  t.reserve(L.size());
  for (int p = 0; p < b; ++p)
    for (Index x = 0; x < n; ++x) t.emplace_back(L.first(p, dest[p][x]), L.first(p, x), 1.0);
  for (int p = 0; p < b; ++p)
    for (int q = 0; q < b; ++q)
      for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
          t.emplace_back(L.second(p, q, dest[p][x], dest[q][y]), L.second(p, q, x, y), 1.0);
  SparseMatrix s(L.size(), L.size());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

CarlemanSystem build_system(const LatticeModel& model, double omega, const Grid& grid,
                            const CarlemanOptions& options) {
  CarlemanSystem sys = build_relaxation(model, omega, grid, options);
  sys.streaming = build_streaming(model, grid, options);
  sys.step = (sys.streaming * sys.relaxation).pruned();
  return sys;
}

Eigen::VectorXd CarlemanState::stacked() const {
  Eigen::VectorXd v(first_order.size() + second_order.size());
  v << first_order, second_order;
  return v;
}

Eigen::VectorXd pack_first_order(const PopulationMatrix& values) {
  const Index n = values.rows();
  const int b = static_cast<int>(values.cols());
  Eigen::VectorXd v(b * n);
  for (int p = 0; p < b; ++p) v.segment(p * n, n) = values.col(p);
  return v;
}

PopulationMatrix unpack_first_order(const Eigen::VectorXd& first, int velocities) {
  require(velocities > 0 && first.size() % velocities == 0,
          "unpack_first_order: size is not a multiple of the velocity count");
  const Index n = first.size() / velocities;
  PopulationMatrix m(n, velocities);
  for (int p = 0; p < velocities; ++p) m.col(p) = first.segment(p * n, n);
  return m;
}

CarlemanState lift(const DistributionField& field, const CarlemanOptions& options) {
  check_model_grid(field.model, field.grid);
  require(field.values.allFinite(), "lift: non-finite populations");
  const CarlemanLayout L{field.model.velocity_count(), field.grid.sites()};
  check_cap(L, options);
  CarlemanState s;
  s.first_order = pack_first_order(field.values);
  s.second_order.resize(L.second_order_size());
  const int b = L.velocities;
  const Index n = L.sites;
  for (int p = 0; p < b; ++p)
    for (int q = 0; q < b; ++q)
      for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
          s.second_order(L.second(p, q, x, y) - L.first_order_size()) =
              field.values(x, p) * field.values(y, q);
  return s;
}

CarlemanState carleman_step(const CarlemanState& state, const CarlemanSystem& system) {
  const CarlemanLayout L = system.layout();
  require(state.first_order.size() == L.first_order_size() &&
              state.second_order.size() == L.second_order_size(),
          "carleman_step: state does not match the system layout");
  const Eigen::VectorXd v = state.stacked();
  Eigen::VectorXd out;
  if (system.step.size() > 0 && system.step.nonZeros() > 0)
    out = system.step * v;
  else if (system.streaming.nonZeros() > 0)
    out = system.streaming * (system.relaxation * v);
  else
    throw InvalidInput("carleman_step: system has no streaming operator");
  CarlemanState next;
  next.truncation_order = state.truncation_order;
  next.first_order = out.head(L.first_order_size());
  next.second_order = out.tail(L.second_order_size());
  return next;
}

FastCarlemanEvolution::FastCarlemanEvolution(const DistributionField& initial, double omega)
    : shape_(initial),
      collision_(collision_matrices(initial.model, omega)),
      destination_(destinations(initial.model, initial.grid)),
      first_(initial.values),
      linear_(initial.values) {
  check_model_grid(initial.model, initial.grid);
  require(initial.values.allFinite(), "carleman: non-finite populations");
}

void FastCarlemanEvolution::step() {
  const int b = shape_.model.velocity_count();
  const Index n = shape_.grid.sites();
  const Eigen::MatrixXd& A = collision_.linear;
  const Eigen::MatrixXd& B = collision_.quadratic;
  // Relaxation, row-vector form: f'^T = f^T A^T.
  PopulationMatrix g = first_ * A.transpose();
  PopulationMatrix z = linear_ * A.transpose();
  for (Index x = 0; x < n; ++x) {
    Eigen::VectorXd zz(b * b);
    for (int q = 0; q < b; ++q)
      for (int r = 0; r < b; ++r) zz(q * b + r) = linear_(x, q) * linear_(x, r);
    g.row(x) += (B * zz).transpose();
  }
  for (int p = 0; p < b; ++p)
    for (Index x = 0; x < n; ++x) {
      first_(destination_[p][x], p) = g(x, p);
      linear_(destination_[p][x], p) = z(x, p);
    }
  ++time_;
}

std::vector<Eigen::VectorXd> fast_second_order_path(const DistributionField& initial,
                                                    double omega, int steps) {
  require(steps >= 0, "fast_second_order_path: steps must be non-negative");
  FastCarlemanEvolution ev(initial, omega);
  std::vector<Eigen::VectorXd> path;
  path.reserve(steps + 1);
  path.push_back(ev.first_order());
  for (int t = 0; t < steps; ++t) {
    ev.step();
    path.push_back(ev.first_order());
  }
  return path;
}

ErrorStats error_stats(const Eigen::VectorXd& per_site, int timestep) {
  ErrorStats s;
  s.timestep = timestep;
  s.per_site_error = per_site;
  std::vector<double> v;
  for (Index i = 0; i < per_site.size(); ++i)
    if (!std::isnan(per_site(i))) v.push_back(per_site(i));
  if (v.empty()) {
    s.max = s.median = s.min = s.mean = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  const std::size_t m = v.size() / 2;
  s.median = v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  return s;
}

namespace {

constexpr double kExcludeNorm = 1e-12;

Eigen::VectorXd site_errors(const PopulationMatrix& clb, const PopulationMatrix& lbm,
                            const LatticeModel& model, ErrorMetric metric) {
  const Index n = lbm.rows();
  Eigen::VectorXd e(n);
  const Eigen::MatrixXd c = model.velocities.cast<double>();
  for (Index x = 0; x < n; ++x) {
    Eigen::VectorXd a = clb.row(x).transpose();
    Eigen::VectorXd r = lbm.row(x).transpose();
    if (metric == ErrorMetric::velocity) {
      a = c.transpose() * a;
      r = c.transpose() * r;
    }
    const double den = r.norm();
    e(x) = den < kExcludeNorm ? std::numeric_limits<double>::quiet_NaN() : (a - r).norm() / den;
  }
  return e;
}

}  // namespace

LbmComparison compare_to_lbm(const DistributionField& initial, double omega, int steps,
                             const CompareOptions& options) {
  require(steps >= 0, "compare_to_lbm: steps must be non-negative");
  require(omega >= 0.0 && omega < 2.0, "compare_to_lbm: omega must lie in [0, 2)");
  check_model_grid(initial.model, initial.grid);
  const int b = initial.model.velocity_count();

  std::vector<PopulationMatrix> clb;
  clb.reserve(steps + 1);
  if (options.evolution == Evolution::fast) {
    FastCarlemanEvolution ev(initial, omega);
    clb.push_back(ev.populations());
    for (int t = 0; t < steps; ++t) {
      ev.step();
      clb.push_back(ev.populations());
    }
  } else {
    const CarlemanSystem sys = build_system(initial.model, omega, initial.grid, options.carleman);
    CarlemanState s = lift(initial, options.carleman);
    clb.push_back(unpack_first_order(s.first_order, b));
    for (int t = 0; t < steps; ++t) {
      s = carleman_step(s, sys);
      clb.push_back(unpack_first_order(s.first_order, b));
    }
  }

  LbmComparison out;
  DistributionField lbm = initial;
  std::vector<bool> excluded(initial.grid.sites(), false);
  for (int t = 0; t <= steps; ++t) {
    if (t > 0) lbm = lbm_step(lbm, omega);
    const Eigen::VectorXd e = site_errors(clb[t], lbm.values, initial.model, options.metric);
    for (Index x = 0; x < e.size(); ++x)
      if (std::isnan(e(x))) excluded[x] = true;
    out.series.push_back(error_stats(e, t));
  }
  for (Index x = 0; x < static_cast<Index>(excluded.size()); ++x)
    if (excluded[x]) out.excluded_sites.push_back(x);

  const Eigen::VectorXd& last = out.series.back().per_site_error;
  std::vector<Index> order;
  for (Index x = 0; x < last.size(); ++x)
    if (!excluded[x]) order.push_back(x);
  if (!order.empty()) {
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index c) { return last(a) < last(c); });
    out.monitors.min_site = order.front();
    out.monitors.max_site = order.back();
    out.monitors.median_site = order[order.size() / 2];
  }
  for (const auto& s : out.series)
    out.monitor_series.push_back({s.per_site_error(out.monitors.max_site),
                                  s.per_site_error(out.monitors.median_site),
                                  s.per_site_error(out.monitors.min_site)});
  return out;
}

}  // namespace clb
