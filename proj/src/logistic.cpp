#include <cmath>
#include <vector>

#include "clb/carleman.hpp"

namespace clb {

LogisticLadder logistic_carleman(double u0, double nonlinearity, int order, double final_time,
                                 double dt) {
  require(order >= 1, "logistic_carleman: truncation order must be at least 1");
  require(dt > 0 && final_time >= 0, "logistic_carleman: need dt > 0 and T >= 0");
  require(std::isfinite(u0) && std::isfinite(nonlinearity), "logistic_carleman: non-finite input");
  LogisticLadder out;
  out.u0 = u0;
  out.nonlinearity = nonlinearity;
  out.order = order;
  out.dt = dt;
  std::vector<double> u(order);
  for (int k = 0; k < order; ++k) u[k] = std::pow(u0, k + 1);
  const long steps = std::lround(final_time / dt);
  out.times.push_back(0.0);
  out.u1.push_back(u[0]);
  std::vector<double> du(order);
  for (long s = 1; s <= steps; ++s) {
    for (int k = 0; k < order; ++k) {
      const double next = k + 1 < order ? u[k + 1] : 0.0;
      du[k] = -(k + 1) * (u[k] - nonlinearity * next);
    }
    for (int k = 0; k < order; ++k) u[k] += dt * du[k];
    out.times.push_back(s * dt);
    out.u1.push_back(u[0]);
  }
  return out;
}

std::vector<double> logistic_reference(double u0, double nonlinearity,
                                       const std::vector<double>& times, double dt) {
  require(dt > 0, "logistic_reference: dt must be positive");
  std::vector<double> out;
  out.reserve(times.size());
  double u = u0;
  long done = 0;
  for (double t : times) {
    const long target = std::lround(t / dt);
    require(target >= done, "logistic_reference: times must be non-decreasing");
    for (; done < target; ++done) u += dt * (-u * (1.0 - nonlinearity * u));
    out.push_back(u);
  }
  return out;
}

}  // namespace clb
