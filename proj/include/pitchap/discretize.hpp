#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace pitchap {

/// Exact zero-order-hold discretisation of x' = A x + B u over one step.
template <int N>
struct ZohModel {
  Eigen::Matrix<double, N, N> Ad;
  Eigen::Matrix<double, N, 1> Bd;
};

template <int N>
ZohModel<N> zoh_discretize(const Eigen::Matrix<double, N, N>& a,
                           const Eigen::Matrix<double, N, 1>& b, double dt) {
  Eigen::Matrix<double, N + 1, N + 1> m = Eigen::Matrix<double, N + 1, N + 1>::Zero();
  m.template topLeftCorner<N, N>() = a * dt;
  m.template topRightCorner<N, 1>() = b * dt;
  const Eigen::Matrix<double, N + 1, N + 1> e = m.exp();
  return {e.template topLeftCorner<N, N>(), e.template topRightCorner<N, 1>()};
}

}  // namespace pitchap
