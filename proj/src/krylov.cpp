#include "fracbubble/krylov.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace fracbubble {

GmresResult gmres(const LinearMap& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x0, double rel_tol,
                  int restart, int max_iter) {
  GmresResult res;
  res.x = x0;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.x.setZero();
    res.converged = true;
    return res;
  }
  const Eigen::Index n = b.size();
  int total = 0;
  while (total < max_iter) {
    Eigen::VectorXd r = b - A(res.x);
    double beta = r.norm();
    res.rel_residual = beta / bnorm;
    if (res.rel_residual <= rel_tol) {
      res.converged = true;
      break;
    }
    const int m = restart;
    std::vector<Eigen::VectorXd> V;
    V.reserve(m + 1);
    V.push_back(r / beta);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd cs = Eigen::VectorXd::Zero(m), sn = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    g(0) = beta;
    int k = 0;
    for (; k < m && total < max_iter; ++k, ++total) {
      Eigen::VectorXd w = A(V[k]);
      for (int i = 0; i <= k; ++i) {
        H(i, k) = V[i].dot(w);
        w -= H(i, k) * V[i];
      }
      H(k + 1, k) = w.norm();
      for (int i = 0; i < k; ++i) {
        const double t = cs(i) * H(i, k) + sn(i) * H(i + 1, k);
        H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
        H(i, k) = t;
      }
      const double den = std::hypot(H(k, k), H(k + 1, k));
      cs(k) = den == 0.0 ? 1.0 : H(k, k) / den;
      sn(k) = den == 0.0 ? 0.0 : H(k + 1, k) / den;
      H(k, k) = den;
      const double hk1 = H(k + 1, k);
      H(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = cs(k) * g(k);
      if (std::abs(g(k + 1)) <= rel_tol * bnorm || hk1 == 0.0) {
        ++k;
        ++total;
        break;
      }
      V.push_back(w / hk1);
    }
    // Back substitution for the k-dimensional least-squares problem.
    Eigen::VectorXd y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    for (int i = 0; i < k; ++i) res.x += y(i) * V[i];
    (void)n;
  }
  res.iterations = total;
  const double final_res = (b - A(res.x)).norm() / bnorm;
  res.rel_residual = final_res;
  res.converged = final_res <= rel_tol * 10.0;
  return res;
}

Eigen::VectorXd lanczos_eigenvalues(const LinearMap& A, Eigen::Index dim, int steps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = nd(rng);
  v.normalize();
  steps = static_cast<int>(std::min<Eigen::Index>(steps, dim));
  std::vector<Eigen::VectorXd> Q{v};
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
  int k = 0;
  for (; k < steps; ++k) {
    Eigen::VectorXd w = A(Q[k]);
    // Two passes of full reorthogonalization.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= k; ++i) {
        const double c = Q[i].dot(w);
        if (pass == 0 && (i == k || i == k - 1)) T(i, k) += c;
        else if (i == k || i == k - 1) T(i, k) += c;
        w -= c * Q[i];
      }
    }
    if (k + 1 == steps) {
      ++k;
      break;
    }
    const double beta = w.norm();
    if (beta < 1e-300) {
      ++k;
      break;
    }
    T(k + 1, k) = beta;
    Q.push_back(w / beta);
  }
  Eigen::MatrixXd Ts = T.topLeftCorner(k, k);
  Ts = 0.5 * (Ts + Ts.transpose()).eval();
  for (int i = 0; i + 1 < k; ++i) Ts(i, i + 1) = Ts(i + 1, i) = T(i + 1, i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ts, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace fracbubble
