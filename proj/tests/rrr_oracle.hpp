#pragma once

// Test-only maximizer of the reduced-rank likelihood over the factored
// parametrization pi = A B (A: N x r, B: r x M), using BFGS with Armijo
// backtracking from random starts. Independent of the truncated-SVD route.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>

#include "sbic/rrr.hpp"

namespace sbic::testing {

inline double rrr_gradient_oracle(const rrr::RrrData& data, int rank, int restarts, std::uint64_t seed) {
  const Eigen::Index N = data.y1.rows(), M = data.y2.rows();
  const Eigen::Index dim = N * rank + rank * M;
  const Eigen::MatrixXd gram = data.y2 * data.y2.transpose();
  const Eigen::MatrixXd cross = data.y1 * data.y2.transpose();
  const double y1_sq = data.y1.squaredNorm();

  // f = 0.5 ||Y1 - A B Y2||^2 expanded through the Gram matrices.
  const auto objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
    const Eigen::Map<const Eigen::MatrixXd> a(theta.data(), N, rank);
    const Eigen::Map<const Eigen::MatrixXd> b(theta.data() + N * rank, rank, M);
    const Eigen::MatrixXd pi = a * b;
    const double f = 0.5 * y1_sq - (pi.cwiseProduct(cross)).sum() + 0.5 * (pi * gram).cwiseProduct(pi).sum();
    if (grad) {
      const Eigen::MatrixXd g = pi * gram - cross;  // d f / d pi
      grad->resize(dim);
      Eigen::Map<Eigen::MatrixXd>(grad->data(), N, rank) = g * b.transpose();
      Eigen::Map<Eigen::MatrixXd>(grad->data() + N * rank, rank, M) = a.transpose() * g;
    }
    return f;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double best = std::numeric_limits<double>::infinity();
  for (int start = 0; start < restarts; ++start) {
    Eigen::VectorXd x(dim);
    for (Eigen::Index k = 0; k < dim; ++k) x(k) = normal(rng);
    Eigen::VectorXd g;
    double f = objective(x, &g);
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(dim, dim);
    for (int it = 0; it < 5000 && g.norm() > 1e-10; ++it) {
      Eigen::VectorXd dir = -h * g;
      if (dir.dot(g) >= 0.0) {
        h.setIdentity();
        dir = -g;
      }
      double step = 1.0;
      Eigen::VectorXd x_new, g_new;
      double f_new = 0.0;
      for (int ls = 0; ls < 60; ++ls) {
        x_new = x + step * dir;
        f_new = objective(x_new, &g_new);
        if (f_new <= f + 1e-4 * step * g.dot(dir)) break;
        step *= 0.5;
      }
      const Eigen::VectorXd s = x_new - x, y = g_new - g;
      const double sy = s.dot(y);
      if (sy > 1e-14) {
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);
        h = (eye - rho * s * y.transpose()) * h * (eye - rho * y * s.transpose()) + rho * s * s.transpose();
      }
      x = x_new;
      g = g_new;
      f = f_new;
    }
    best = std::min(best, f);
  }
  const double n = static_cast<double>(data.n());
  return -best - 0.5 * data.y2.squaredNorm() -
         0.5 * n * static_cast<double>(N + M) * std::log(2.0 * 3.14159265358979323846);
}

}  // namespace sbic::testing
