#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "fracbubble/field.hpp"

namespace fracbubble {

// Half-spectrum (real-to-complex) transform of a field, unnormalized.
std::vector<std::complex<double>> forward(const Field& u);
// Inverse of `forward`, including the 1/N^n normalization.
Field inverse(const Grid& g, std::vector<std::complex<double>> spec);

// Calls f(k², multiplicity, flat index) for every stored mode; multiplicity is 2 for
// modes whose conjugate partner is not stored, 1 otherwise.
void for_each_mode(const Grid& g, const std::function<void(double k2, double mult, std::size_t idx)>& f);

// u ↦ F^{-1}[σ(|k|²) û]
Field apply_symbol(const Field& u, const std::function<double(double)>& sigma);

}  // namespace fracbubble
