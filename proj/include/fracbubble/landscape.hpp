#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracbubble/model.hpp"

namespace fracbubble {

struct GammaSample {
  double mu = 1.0;
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  double gamma = 0.0;
  // (∂Γ/∂μ, ∂Γ/∂ξ_1, …, ∂Γ/∂ξ_n)
  std::array<double, 4> grad{0.0, 0.0, 0.0, 0.0};
};

// Γ(μ,ξ) = G(z_{μ,ξ}) = μ^{-γ_s}/(q+1) ∫_ω h(x) z₀^{q+1}((x-ξ)/μ) dx, integrated bump
// by bump over the exact support in the offset variable t = x - ξ.
class Landscape {
 public:
  Landscape(const ProblemParams& params, const CompactWeight& h, double rel_tol = 1e-8);

  const ProblemParams& params() const { return params_; }
  const CompactWeight& weight() const { return h_; }
  int dim() const { return params_.n; }

  // Throws QuadratureNotConverged when two refinement levels disagree.
  GammaSample eval(double mu, std::span<const double> xi, bool with_grad = true) const;
  double value(double mu, std::span<const double> xi) const { return eval(mu, xi, false).gamma; }

 private:
  ProblemParams params_;
  CompactWeight h_;
  double alpha_;
  double tol_;
};

// Ratios Γ(μ,ξ₀)/μ^{n-γ_s} along μ = 2^{-j} and what they say about μ → 0.
struct SmallMuLimit {
  bool supercritical = true;
  std::vector<double> mus;
  std::vector<double> ratios;
  double h_at_xi0 = 0.0;
  // Supercritical regime.
  double A_hat = 0.0;        // extrapolated limit
  double A_pred = 0.0;       // h(ξ₀)/(q+1) ∫ z₀^{q+1}
  std::vector<double> exponents;  // correction exponents used by the extrapolation
  // Sublinear regime.
  bool monotone = false;
  double growth = 0.0;       // last ratio / first ratio
  bool consistent_with_infinity = false;
};

// Richardson extrapolation of r(μ) = A + Σ c_k μ^{e_k} from the last exponents.size()+1
// samples. Exposed for tests.
double richardson_limit(std::span<const double> mus, std::span<const double> values,
                        std::span<const double> exponents);
// Correction exponents of Γ(μ,ξ₀)/μ^{n-γ_s}: the union of τ+2i (τ = 2γ_s - n) and 2i.
std::vector<double> richardson_ladder(double tau, int count);

SmallMuLimit small_mu_limit(const Landscape& land, std::span<const double> xi0, int j_first = 4,
                            int j_last = 12);

struct RateFit {
  std::vector<double> scales;
  std::vector<double> values;  // |Γ|
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double expected = 0.0;
};

// log|Γ| against log μ at fixed ξ₀ over μ = 2^{-j}, j in [j_first, j_last].
RateFit mu_rate(const Landscape& land, std::span<const double> xi0, int j_first, int j_last);
// log|Γ| against log|ξ| along ξ = ξ₀ + r e₁ at fixed μ, r = r_first·2^i up to r_last.
RateFit xi_rate(const Landscape& land, std::span<const double> xi0, double mu, double r_first,
                double r_last);

struct RateWindows {
  int mu_first = 20;  // supercritical μ window 2^{-20..-28}
  int mu_last = 28;
  int mu_first_sublinear = 40;  // sublinear μ window 2^{-40..-60}
  int mu_last_sublinear = 60;
  double xi_first = 8.0;
  double xi_last = 512.0;
};

// (a) μ-rate at the most positive bump center, expected n - γ_s (supercritical) or γ_s
// (sublinear); (b) ξ-rate at μ = 1, expected -(n-2s)(q+1). FitRejected if r² < 0.999.
std::pair<RateFit, RateFit> tail_rates(const Landscape& land, const RateWindows& win = {});

// Center of the bump with the largest positive value of h there.
std::vector<double> most_positive_center(const CompactWeight& h);
std::vector<double> most_negative_center(const CompactWeight& h);

struct SlabSpec {
  double mu0 = 0.0;
  std::vector<double> xi0;
  double B = 0.0;          // Γ(μ₀,ξ₀) ≥ B
  double mu1 = 0.0;
  double mu2 = 0.0;
  double R = 0.0;
  double boundary_max = 0.0;  // largest Γ sampled on ∂S
  // Sign-changing weight: the mirrored construction for the minimum.
  bool has_min = false;
  double mu0_min = 0.0;
  std::vector<double> xi0_min;
  double B_min = 0.0;
  double boundary_min = 0.0;
};

// The slab [μ₁,μ₂] × {|ξ| ≤ R}: Γ(μ₀,ξ₀) ≥ B in the interior, Γ < B/2 on
// the sampled boundary (and Γ > B̃/2 for the minimum when h changes sign).
SlabSpec build_slab(const Landscape& land);

enum class CriticalKind { Max, Min };
std::string to_string(CriticalKind k);

struct CriticalPoint {
  double mu = 0.0;
  std::vector<double> xi;
  double gamma = 0.0;
  double grad_norm = 0.0;
  CriticalKind kind = CriticalKind::Max;
  int iterations = 0;
};

// Γ and its gradient (∂μ, ∂ξ) at (μ, ξ). find_critical_points accepts any such map so
// that a synthetic landscape can be injected.
using GammaFn = std::function<GammaSample(double mu, std::span<const double> xi)>;

struct CriticalSearch {
  int mu_samples = 0;  // 0 picks 48, 24, 12 for n = 1, 2, 3
  int xi_samples = 0;  // per axis; 0 picks 241, 21, 9
  double grad_tol = 1e-10;
  int max_iter = 500;
};

std::vector<CriticalPoint> find_critical_points(const GammaFn& gamma, int n, const SlabSpec& slab,
                                                bool want_min, const CriticalSearch& opts = {});
std::vector<CriticalPoint> find_critical_points(const Landscape& land, const SlabSpec& slab,
                                                const CriticalSearch& opts = {});

}  // namespace fracbubble
