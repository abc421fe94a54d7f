#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

#include "fracbubble/bubble.hpp"
#include "fracbubble/field.hpp"
#include "fracbubble/landscape.hpp"
#include "fracbubble/model.hpp"
#include "fracbubble/riesz.hpp"

namespace fracbubble {

// The map v ↦ v - J(m·v) for a multiplier field m, bordered by the tangent fields of
// a bubble: (v, β) ↦ (v - J(m v) - Σ β_i q_i, ⟨v, q_1⟩, …, ⟨v, q_{n+1}⟩). The pairing
// ⟨v, q_i⟩ is ∫ v · p z^{p-1} q_i, the Ḣ^s product written through the linearized
// equation satisfied by q_i.
class BorderedOp {
 public:
  BorderedOp(const ProblemParams& params, const BubblePoint& b, const Grid& g);

  const Grid& grid() const { return grid_; }
  const BubblePoint& base() const { return base_; }
  int border() const { return static_cast<int>(q_.size()); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(grid_.size()) + border(); }

  const Field& z() const { return z_; }
  const Field& q(int i) const { return q_[i]; }
  const RieszFree& riesz() const { return J_; }
  // Rows of the pairing: row_i[k] = p z^{p-1} q_i · cell volume.
  const Field& pairing_row(int i) const { return rows_[i]; }
  double pair(const Field& v, int i) const;
  // ⟨q_i, q_i⟩ by the same grid pairing.
  double lambda(int i) const { return pair(q_[i], i); }

  // Replaces the multiplier (default p z^{p-1}, i.e. the operator T).
  void set_multiplier(Field m) { m_ = std::move(m); }
  const Field& multiplier() const { return m_; }

  Field apply_T(const Field& v) const;
  Field apply_T_transpose(const Field& v) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& x) const;

  // Internally the border columns and rows are scaled to unit Euclidean length; pack
  // and unpack convert between that and the (v, β) / (f, ⟨·,q_i⟩) conventions.
  Eigen::VectorXd pack_unknown(const Field& v, std::span<const double> beta) const;
  void unpack_unknown(const Eigen::VectorXd& x, Field& v, std::vector<double>& beta) const;
  Eigen::VectorXd pack_image(const Field& f, std::span<const double> pairs) const;
  void unpack_image(const Eigen::VectorXd& y, Field& f, std::vector<double>& pairs) const;

 private:
  ProblemParams params_;
  BubblePoint base_;
  Grid grid_;
  RieszFree J_;
  Field z_;
  std::vector<Field> q_;
  std::vector<Field> rows_;
  std::vector<double> col_scale_, row_scale_;
  Field m_;
};

struct BorderedSolution {
  Field v;
  std::vector<double> beta;
  double rel_residual = 0.0;
  int iterations = 0;
};

// GMRES on the bordered system; BorderedSolveStalled unless ‖rhs - 𝒯x‖ ≤ rel_tol‖rhs‖.
BorderedSolution solve_bordered(const BorderedOp& op, const Field& rhs_v, std::span<const double> rhs_beta,
                                double rel_tol = 1e-10);

struct ConditionEstimate {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double cond = 0.0;
};
// Extreme singular values of 𝒯 (internal row/column scaling) from Lanczos on 𝒯ᵀ𝒯.
ConditionEstimate bordered_condition(const BorderedOp& op, int steps = 80);

struct KernelCertificate {
  std::vector<double> sigma;  // smallest n+3 singular values of T, ascending
  double gap = 0.0;           // σ_{n+2} / σ_{n+1}
};
// Lanczos on TᵀT with full reorthogonalization.
KernelCertificate kernel_certificate(const BorderedOp& op, int steps = 120);

struct NewtonStep {
  int iter = 0;
  double residual = 0.0;
  double sup_w = 0.0;
  std::vector<double> alpha;
};

struct ReductionState {
  Field w;
  std::vector<double> alpha;
  double residual_norm = 0.0;
  int newton_iters = 0;
  std::vector<NewtonStep> trace;
  // max over iterates of |⟨w, q_i⟩| / (‖w‖·‖q_i‖) in the pairing norms
  double max_orth_ratio = 0.0;
  double max_orth_abs = 0.0;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double gmres_tol = 1e-12;
};

// Newton on H(w, α) = 0 with
//   H₁ = w - J[(z+w)₊^p - z^p + εh (z+w)₊^q] - Σ α_i q_i,   H₂ = (⟨w, q_i⟩)_i.
// PositivityLost when q < 1 and z + w ≤ a/2 somewhere on ω (a = min_ω z);
// NewtonDiverged after max_iter steps.
ReductionState solve_auxiliary(const BubblePoint& b, const ProblemParams& params, const CompactWeight& h,
                               const Grid& g, const NewtonOptions& opts = {});

// X^s stand-in: periodic Ḣ^s seminorm plus sup norm.
double xs_norm(const Field& w, double s);

struct MultiplierMatrix {
  std::vector<double> lambda;
  Eigen::MatrixXd B;  // b_ij = ⟨q_i, ∂w/∂ζ_j⟩, ζ = (ξ_1, …, ξ_n, μ)
  double det = 0.0;
  double det_lambda = 0.0;
  double norm_B = 0.0;  // Frobenius
};
MultiplierMatrix multiplier_matrix(const BubblePoint& b, const ProblemParams& params, const CompactWeight& h,
                                   const Grid& g);

// Largest ε in (0, eps_hi] with det(λ + B^ε) ≥ ½ det(λ), by bisection. A failed
// Newton solve counts as a violation.
double epsilon_one(const BubblePoint& b, const ProblemParams& params, const CompactWeight& h, const Grid& g,
                   double eps_hi = 1.0, int steps = 12);

struct SolutionReport {
  CriticalPoint point;
  double eps = 0.0;
  Field u;
  ReductionState state;
  double residual_sup = 0.0;   // sup_trusted |u - J A_ε(u)| / sup z
  double residual_dual = 0.0;  // L^β norm over the trusted region of the periodic (-Δ)^s of the same
  double min_trusted = 0.0;
  double energy_error = 0.0;   // |f_ε(z+w) - f₀(z₀) + εΓ(μ*,ξ*)|
  double w_norm = 0.0;         // xs_norm(w)
};

// Picks the best critical point of the requested kind; NotRequestedKind if absent.
const CriticalPoint& pick_critical(const std::vector<CriticalPoint>& cps, CriticalKind kind);

SolutionReport construct_solution(const CriticalPoint& cp, const ProblemParams& params, const CompactWeight& h,
                                  const Grid& g, const NewtonOptions& opts = {});

}  // namespace fracbubble
