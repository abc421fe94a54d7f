#pragma once

#include "fracbubble/field.hpp"
#include "fracbubble/model.hpp"

namespace fracbubble {

struct EnergyReport {
  double f0 = 0.0;
  double feps = 0.0;  // f0 - ε G
  double G = 0.0;
};

// Grid energy: f₀(u) = ½ hs_inner(u,u) - ∫ u₊^{p+1}/(p+1), G(u) = ∫ h u₊^{q+1}/(q+1).
// The quadratic term is the periodic spectral form, so its derivative at u in the
// direction φ is ∫ ((-Δ)^s u) φ with the periodic operator.
EnergyReport energy(const Field& u, const ProblemParams& params, const CompactWeight& h);

// Energy of z + w expanded about a profile z whose own energies are known:
//   f₀(z+w) = f₀(z) + ∫ w (-Δ)^s z + ½ hs_inner(w,w) - ∫ [(z+w)₊^{p+1} - z^{p+1}]/(p+1)
//   G(z+w)  = G(z)  + ∫ h [(z+w)₊^{q+1} - z^{q+1}]/(q+1)
// Only w goes through the periodic quadratic form.
struct EnergyAnchor {
  Field z;
  Field lap_z;  // (-Δ)^s z on the grid
  double f0 = 0.0;
  double G = 0.0;
};
EnergyReport energy_near(const EnergyAnchor& base, const Field& w, const ProblemParams& params,
                         const CompactWeight& h);

Field sample_weight(const Grid& g, const CompactWeight& h);

}  // namespace fracbubble
