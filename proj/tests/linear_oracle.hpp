#pragma once

// Closed-form solution of the model with E = 0 and zero controls, which is the
// affine system X' = A X + a. The exponential of the augmented 4x4 matrix
// [[A, a], [0, 0]] maps (X0, 1) to (X(t), 1).

#include "greenlie/model.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

inline greenlie::State linear_solution(const greenlie::Params& p, const greenlie::State& init, double t)
{
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = p.beta11.get_d();
  m(1, 1) = p.beta22.get_d();
  m(1, 2) = p.beta13.get_d();
  m(2, 1) = p.beta32.get_d();
  m(2, 2) = p.beta33.get_d();
  for (int i = 0; i < 3; ++i) m(i, 3) = p.alpha[static_cast<std::size_t>(i)].get_d();
  Eigen::Matrix4d flow = (m * t).exp();
  Eigen::Vector4d v(init[0], init[1], init[2], 1.0);
  Eigen::Vector4d out = flow * v;
  return {out(0), out(1), out(2)};
}

inline double max_abs_diff(const greenlie::State& a, const greenlie::State& b)
{
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)]));
  return d;
}

/// Least-squares slope of log2(error) against log2(1/dt).
inline double convergence_slope(const greenlie::Params& p, const greenlie::State& init,
                                const std::vector<double>& dts)
{
  greenlie::State exact = linear_solution(p, init, 1.0);
  std::vector<double> xs, ys;
  for (double dt : dts) {
    int steps = static_cast<int>(std::lround(1.0 / dt));
    auto traj = greenlie::simulate(p, greenlie::Expr(0), greenlie::ControlSchedule::zero(), init, dt, steps);
    xs.push_back(-std::log2(dt));
    ys.push_back(std::log2(max_abs_diff(traj.states.back(), exact)));
  }
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return -sxy / sxx;
}

}  // namespace oracle
