#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "fracbubble/field.hpp"
#include "fracbubble/quadrature.hpp"

namespace fracbubble {

// A function known in closed form on all of ℝⁿ, concentrated near `center` on the
// length `scale`.
struct Profile {
  std::function<double(const double*)> f;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double scale = 1.0;
};

// The periodic spectral operator sees the periodic extension of the box samples.
// For a profile known outside the box the difference to the whole-space operator is
//   c_{n,s} ∫_{|y|∞>L} (u_per(y) - u(y)) |x-y|^{-(n+2s)} dy,
// which is smooth for |x|∞ ≤ L/2. This class evaluates it.
class ExteriorCorrection {
 public:
  ExteriorCorrection(const Grid& g, double s);
  ~ExteriorCorrection();
  ExteriorCorrection(const ExteriorCorrection&) = delete;
  ExteriorCorrection& operator=(const ExteriorCorrection&) = delete;

  double at(const Profile& u, const double* x) const;
  // Correction interpolated on the trusted region; zero elsewhere.
  Field on_trusted(const Profile& u, int cheb_points = 0) const;

 private:
  // Samples u(t)·w(t) on a tensor Gauss–Legendre grid over the box.
  struct BoxSamples {
    std::vector<double> t[3];
    std::vector<double> uw;
  };
  BoxSamples box_samples(const Profile& u) const;
  // c_{n,s}^{-1} times the correction at x.
  double images(const BoxSamples& b, const double* x) const;
  // The same at every node of a tensor grid with the given axis (n ≥ 2), axis 0 fastest.
  std::vector<double> images_on(const BoxSamples& b, const ChebyshevAxis& xs) const;
  double exterior(const Profile& u, const double* x) const;
  // Σ_{m≠0} |d - 2Lm|^{-(n+2s)}, exact in 1D.
  double image_kernel_1d(double d) const;

  Grid grid_;
  double s_;
  double a_;
  double cns_;
  // n ≥ 2: the image kernel interpolated on [-3L/2, 3L/2]^n, shared per (n, L, s).
  std::shared_ptr<const ChebyshevCube> kernel_;
};

double frac_laplacian_constant(int n, double s);

// Whole-space (-Δ)^s of a closed-form profile: periodic spectral result plus the
// exterior correction on the trusted region.
Field frac_laplacian_profile(const Grid& g, double s, const Profile& u);

}  // namespace fracbubble
