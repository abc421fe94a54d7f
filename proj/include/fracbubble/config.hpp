#pragma once

#include <string>
#include <vector>

#include "fracbubble/field.hpp"
#include "fracbubble/landscape.hpp"
#include "fracbubble/model.hpp"
#include "fracbubble/regularity.hpp"

namespace fracbubble {

struct LandscapeSweep {
  double mu_min = 1.0 / 64.0;
  double mu_max = 4.0;
  int mu_count = 33;
  double xi_half_width = 4.0;  // ξ-lattice on [-w, w]^n
  int xi_count = 0;            // per axis; 0 picks 33, 17, 9 for n = 1, 2, 3
};

struct RunConfig {
  ProblemParams params;
  CompactWeight weight;
  Grid grid;
  LandscapeSweep landscape;
  RateWindows windows;
  int small_mu_first = 4;  // small-μ limit over μ = 2^{-first..-last}
  int small_mu_last = 12;
  std::vector<double> eps_list{1e-3, 1e-2};
  std::vector<GrowthTerm> growth{GrowthTerm{}};
  std::vector<double> deltas{0.1};
  unsigned seed = 20240611u;
  int threads = 1;
  std::string source;  // canonical JSON text the digest is taken over
};

// Default grid for dimension n: L = 40, N = 4096 in 1D; L = 16, N = 256 in 2D;
// L = 8, N = 64 in 3D.
Grid default_grid(int n);
RunConfig default_config();

// Parses and validates; every problem is a config error (exit code 3).
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical serialization (defaults filled in) and its SHA-256.
std::string canonical_json(const RunConfig& c);
std::string config_digest(const RunConfig& c);

}  // namespace fracbubble
