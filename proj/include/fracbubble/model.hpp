#pragma once

#include <array>
#include <span>
#include <vector>

namespace fracbubble {

constexpr int kMaxDim = 3;

// Exponents of (-Δ)^s u = εh u₊^q + u₊^p, validated once and read everywhere else.
struct ProblemParams {
  int n = 1;
  double s = 0.2;
  double q = 1.5;
  double eps = 0.0;

  double p = 0.0;         // (n+2s)/(n-2s)
  double crit_exp = 0.0;  // 2*_s = 2n/(n-2s)
  double dual_exp = 0.0;  // β = 2n/(n+2s)
  double gamma_s = 0.0;   // (n-2s)(q+1)/2
  bool supercritical_q = false;

  // τ = 2γ_s - n: decay exponent of the tail of z₀^{q+1} beyond integrability.
  double tail_exponent() const { return 2.0 * gamma_s - n; }
};

ProblemParams validate(int n, double s, double q, double eps = 0.0);

struct Bump {
  std::vector<double> c;
  double r = 1.0;
  double a = 1.0;
  int k = 2;
};

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

class CompactWeight {
 public:
  CompactWeight() = default;
  CompactWeight(int n, std::vector<Bump> bumps);

  int dim() const { return n_; }
  const std::vector<Bump>& bumps() const { return bumps_; }

  double eval(std::span<const double> x) const;
  Box support_box() const;
  bool sign_changing() const;
  bool has_positive_part() const;
  // Largest |c|+r over the bumps: every ball of ω lies in |x| ≤ radius().
  double radius() const;

  CompactWeight scaled(double factor) const;
  CompactWeight shifted(std::span<const double> v) const;

 private:
  int n_ = 1;
  std::vector<Bump> bumps_;
};

double bump_eval(const Bump& b, std::span<const double> x);

// Throws SublinearNeedsPositiveWeight when q ≤ 2s/(n-2s) meets a sign-changing h,
// and NoPositivePart when h₊ vanishes identically.
void check_weight(const ProblemParams& params, const CompactWeight& h);

}  // namespace fracbubble
