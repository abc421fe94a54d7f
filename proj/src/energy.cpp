#include "fracbubble/energy.hpp"

#include <cmath>

#include "fracbubble/errors.hpp"

namespace fracbubble {

namespace {

double pos_pow(double u, double e) { return u > 0.0 ? std::pow(u, e) : 0.0; }

}  // namespace

Field sample_weight(const Grid& g, const CompactWeight& h) {
  if (h.dim() != g.n) config_error("DimensionMismatch", "weight and grid dimensions differ");
  return sample(g, [&](const double* x) { return h.eval(std::span<const double>(x, g.n)); });
}

EnergyReport energy(const Field& u, const ProblemParams& params, const CompactWeight& h) {
  const Field hw = sample_weight(u.grid, h);
  double pot = 0.0, g = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    pot += pos_pow(u[i], params.p + 1.0);
    if (hw[i] != 0.0) g += hw[i] * pos_pow(u[i], params.q + 1.0);
  }
  const double dv = u.grid.cell_volume();
  EnergyReport r;
  r.f0 = 0.5 * hs_inner(u, u, params.s) - pot * dv / (params.p + 1.0);
  r.G = g * dv / (params.q + 1.0);
  r.feps = r.f0 - params.eps * r.G;
  return r;
}

EnergyReport energy_near(const EnergyAnchor& base, const Field& w, const ProblemParams& params,
                         const CompactWeight& h) {
  if (w.grid != base.z.grid || base.lap_z.grid != base.z.grid) {
    computation_error("GridMismatch", "anchor and correction live on different grids");
  }
  const Field hw = sample_weight(w.grid, h);
  double lin = 0.0, pot = 0.0, g = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double z = base.z[i], u = z + w[i];
    lin += w[i] * base.lap_z[i];
    pot += pos_pow(u, params.p + 1.0) - pos_pow(z, params.p + 1.0);
    if (hw[i] != 0.0) g += hw[i] * (pos_pow(u, params.q + 1.0) - pos_pow(z, params.q + 1.0));
  }
  const double dv = w.grid.cell_volume();
  EnergyReport r;
  r.f0 = base.f0 + lin * dv + 0.5 * hs_inner(w, w, params.s) - pot * dv / (params.p + 1.0);
  r.G = base.G + g * dv / (params.q + 1.0);
  r.feps = r.f0 - params.eps * r.G;
  return r;
}

}  // namespace fracbubble
