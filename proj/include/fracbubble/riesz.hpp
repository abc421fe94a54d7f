#pragma once

#include <memory>

#include "fracbubble/field.hpp"

namespace fracbubble {

// Γ(n/2 - s) / (4^s π^{n/2} Γ(s)): the constant for which c ∫ |x-y|^{2s-n} f(y) dy
// inverts (-Δ)^s.
double riesz_constant(int n, double s);

// Whole-space Riesz potential of grid data. The density is taken piecewise
// (multi)linear between the samples, integrated exactly against |x-y|^{2s-n}, and
// continued outside the box by a power-law tail |y|^{-(n+2s)} matched to the
// boundary samples. The discrete operator is J f = W f + Σ_k a_k (b_k · f) with W
// Toeplitz, applied by zero-padded FFT.
class RieszFree {
 public:
  RieszFree(const Grid& g, double s);

  const Grid& grid() const { return grid_; }
  Field apply(const Field& f) const;
  Field apply_transpose(const Field& f) const;

  struct Data;

 private:
  Grid grid_;
  double s_;
  std::shared_ptr<const Data> data_;
};

// Convenience: J f with a cached operator.
Field riesz_free(const Field& f, double s);

}  // namespace fracbubble
