#pragma once

#include <Eigen/Dense>

#include <functional>

namespace fracbubble {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GmresResult {
  Eigen::VectorXd x;
  double rel_residual = 0.0;  // ‖b - A x‖ / ‖b‖, recomputed at the end
  int iterations = 0;
  bool converged = false;
};

// Restarted GMRES(m) with modified Gram–Schmidt and Givens rotations.
GmresResult gmres(const LinearMap& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x0, double rel_tol,
                  int restart = 60, int max_iter = 1200);

// Eigenvalues of a symmetric map from a Lanczos run with full reorthogonalization,
// started from a deterministic pseudo-random vector. Returned ascending.
Eigen::VectorXd lanczos_eigenvalues(const LinearMap& A, Eigen::Index dim, int steps, unsigned seed);

}  // namespace fracbubble
