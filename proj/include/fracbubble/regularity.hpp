#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fracbubble/field.hpp"
#include "fracbubble/model.hpp"

namespace fracbubble {

// One growth term f_i(x, r) ≤ h_i(x)|r|^{γ_i} with h_i ∈ L^{m_i}; m = ∞ means a bounded h_i.
struct GrowthTerm {
  double gamma = 0.0;
  double m = std::numeric_limits<double>::infinity();
  // a_i defaults to the upper endpoint min{1, 1/γ_i}; any value in the admissible
  // interval may be forced here.
  double a = std::numeric_limits<double>::quiet_NaN();
};

struct DerivedTerm {
  double gamma = 0.0;
  double m = 0.0;
  double m_under = 0.0;
  double Theta = 0.0;
  double a = 0.0;
  double a_lower = 0.0;  // open lower end of the admissible a-interval
  double xi_h = 0.0;
  double tau = 0.0;
};

struct GrowthSpec {
  double crit_exp = 0.0;
  std::vector<DerivedTerm> terms;
  double tau = 0.0;
  double theta = 0.0;  // 2*_s τ / 2
};

// HypothesisViolated names the first inequality that fails.
GrowthSpec derive_growth(const ProblemParams& params, const std::vector<GrowthTerm>& raw);

struct IterationTrace {
  double delta = 0.0;
  std::vector<double> A;        // A_k = 1 - 2^{-k}
  std::vector<double> U;        // ‖w_k‖^{2*}_{2*}
  std::vector<double> measure;  // |{w_k > 0}|
  bool converged = false;       // U_K ≤ 1e-12
  // Pointwise facts checked on every level.
  bool decreasing_w = true;     // w_{k+1} ≤ w_k
  bool subset_chain = true;     // {w_{k+1} > 0} ⊆ {w_k > 2^{-(k+1)}}
  bool phi_bound = true;        // 0 < φ < 2^{k+1} w_k on {w_{k+1} > 0}
  bool step0 = true;            // U_k ≤ U_0 ≤ δ^{2*}
  double fitted_C = 0.0;        // least C with U_{k+1} ≤ C^k U_k^ϑ, k ≥ 1
  double theta_hat = std::numeric_limits<double>::quiet_NaN();
};

IterationTrace run_iteration(const Field& u, const GrowthSpec& spec, double delta, int levels = 40);

struct AuditResult {
  double C = 0.0;
  double max_residual = 0.0;  // |log U_{k+1} - k log C - ϑ log U_k|, max over fitted pairs
  int nonzero_levels = 0;
  bool terminated = false;    // U reached exactly 0, after which the recursion holds trivially
  bool pass = false;
  std::string mode;           // "fit" or "terminated"
};

// Least-squares fit of log U_{k+1} = k log C + ϑ log U_k with ϑ fixed. A sequence that
// hits exactly zero before offering five nonzero levels is audited on the pairs it
// has (the k = 0 step must satisfy U_1 ≤ U_0^ϑ); otherwise InsufficientLevels.
AuditResult recursion_audit(std::span<const double> U, double theta);
AuditResult recursion_audit(const IterationTrace& trace, const GrowthSpec& spec);

}  // namespace fracbubble
