#pragma once

#include <array>
#include <span>
#include <vector>

#include "fracbubble/exterior.hpp"
#include "fracbubble/field.hpp"
#include "fracbubble/model.hpp"

namespace fracbubble {

struct BubblePoint {
  int n = 1;
  double s = 0.2;
  double mu = 1.0;
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  double alpha = 1.0;
};

struct AlphaReport {
  double alpha = 0.0;
  double kappa_origin = 0.0;  // κ read off at x = 0
  double kappa_unit = 0.0;    // κ read off at |x| = 1
  Grid grid;
};

// Reference grid used by alpha_ns for dimension n.
Grid alpha_reference_grid(int n);
// κ from the spectral fractional Laplacian of (1+|x|²)^{-(n-2s)/2} at x = 0 and
// |x| = 1 on `g` (exterior-corrected); throws NormalizationDiverged if they disagree.
AlphaReport alpha_ns_on(const ProblemParams& params, const Grid& g);
// Cached per (n, s).
double alpha_ns(const ProblemParams& params);

BubblePoint make_bubble(const ProblemParams& params, double mu, std::span<const double> xi);

double bubble_eval(const BubblePoint& b, const double* x);
// j = 1..n: ∂z/∂ξ_j; j = n+1: ∂z/∂μ.
double tangent_eval(const BubblePoint& b, int j, const double* x);

Profile bubble_profile(const BubblePoint& b);
Profile tangent_profile(const BubblePoint& b, int j);
Profile bubble_power_profile(const BubblePoint& b, double exponent);

struct GramReport {
  std::vector<double> lambda;               // λ_1..λ_{n+1}
  std::vector<std::vector<double>> matrix;  // p ∫ z^{p-1} q_i q_j
  double max_offdiag_ratio = 0.0;           // max |G_ij| / max(λ_i, λ_j)
};

// λ_i = p ∫ z^{p-1} q_i² by tensor Gauss–Legendre on the cube of half-width 20μ
// around ξ, plus the exterior of that cube; GridTooCoarse if one refinement step
// moves a diagonal entry by more than 1%.
GramReport gram_constants(const ProblemParams& params, const BubblePoint& b, int order = 16);

struct MomentReport {
  double quadrature = 0.0;
  double closed_form = 0.0;
};
// ∫ z₀^{q+1} over ℝⁿ; MomentDiverges unless (n-2s)(q+1) > n.
MomentReport bubble_moment(const ProblemParams& params);
double bubble_moment_value(const ProblemParams& params);

// f₀(z₀) = (s/n) ∫ z₀^{p+1}, the same for every bubble.
double bubble_energy(const ProblemParams& params);

}  // namespace fracbubble
