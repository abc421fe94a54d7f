#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracbubble/bubble.hpp"
#include "fracbubble/errors.hpp"
#include "fracbubble/landscape.hpp"

namespace fracbubble {

namespace {

using Points = std::vector<std::vector<double>>;

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Lattice points of spacing `h` inside the ball |ξ| ≤ R; at most `cap` per axis.
Points ball_points(int n, double R, double h, int cap) {
  int m = static_cast<int>(std::ceil(R / h));
  m = std::min(m, cap / 2);
  const double step = R / std::max(m, 1);
  Points out;
  std::vector<double> x(n);
  const int side = 2 * m + 1;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= side;
  for (int idx = 0; idx < total; ++idx) {
    int r = idx;
    for (int i = 0; i < n; ++i) {
      x[i] = (r % side - m) * step;
      r /= side;
    }
    if (norm(x) <= R * (1.0 + 1e-12)) out.push_back(x);
  }
  return out;
}

// Lattice points of spacing `h` over the support box of h, intersected with |ξ| ≤ R.
Points support_points(const CompactWeight& w, double R, double h) {
  const Box box = w.support_box();
  const int n = w.dim();
  std::vector<int> count(n);
  int total = 1;
  for (int i = 0; i < n; ++i) {
    count[i] = std::min(static_cast<int>(std::ceil((box.hi[i] - box.lo[i]) / h)) + 1, n == 1 ? 4097 : 65);
    total *= count[i];
  }
  Points out;
  std::vector<double> x(n);
  for (int idx = 0; idx < total; ++idx) {
    int r = idx;
    for (int i = 0; i < n; ++i) {
      const int k = r % count[i];
      r /= count[i];
      x[i] = count[i] == 1 ? box.lo[i] : box.lo[i] + (box.hi[i] - box.lo[i]) * k / (count[i] - 1);
    }
    if (norm(x) <= R) out.push_back(x);
  }
  for (const Bump& b : w.bumps()) {
    if (norm(b.c) <= R) out.push_back(b.c);
  }
  return out;
}

Points sphere_points(int n, double R) {
  Points out;
  if (n == 1) return {{-R}, {R}};
  if (n == 2) {
    for (int k = 0; k < 64; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 64.0;
      out.push_back({R * std::cos(th), R * std::sin(th)});
    }
    return out;
  }
  const int m = 128;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < m; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / m;
    const double rr = std::sqrt(1.0 - z * z);
    out.push_back({R * rr * std::cos(golden * k), R * rr * std::sin(golden * k), R * z});
  }
  return out;
}

struct Extremes {
  double max = -std::numeric_limits<double>::infinity();
  double min = std::numeric_limits<double>::infinity();
  void add(double v) {
    max = std::max(max, v);
    min = std::min(min, v);
  }
};

void scan(const Landscape& land, double mu, const Points& pts, Extremes& e) {
  for (const auto& x : pts) e.add(land.value(mu, x));
}

double smallest_radius(const CompactWeight& w) {
  double r = std::numeric_limits<double>::infinity();
  for (const Bump& b : w.bumps()) r = std::min(r, b.r);
  return r;
}

// Largest μ₀ = 2^{-j} with sign·Γ(μ₀,ξ₀) ≥ sign·B(μ₀).
double pick_mu0(const Landscape& land, const std::vector<double>& xi0, double level, double sign, double& B) {
  const ProblemParams& pp = land.params();
  for (int j = 0; j <= 60; ++j) {
    const double mu = std::ldexp(1.0, -j);
    const double b = 0.5 * std::pow(mu, pp.n - pp.gamma_s) * level;
    if (sign * land.value(mu, xi0) >= sign * b) {
      B = b;
      return mu;
    }
  }
  computation_error("SlabNotCertified", "no μ₀ ≥ 2^-60 reaches the threshold B");
}

}  // namespace

SlabSpec build_slab(const Landscape& land) {
  const ProblemParams& pp = land.params();
  const CompactWeight& w = land.weight();
  const int n = pp.n;
  SlabSpec S;
  S.xi0 = most_positive_center(w);
  const double moment = pp.supercritical_q ? bubble_moment_value(pp) : 0.0;
  const double A = pp.supercritical_q ? w.eval(S.xi0) / (pp.q + 1.0) * moment
                                      : std::numeric_limits<double>::infinity();
  S.mu0 = pick_mu0(land, S.xi0, std::min(A, 1.0), 1.0, S.B);
  S.has_min = w.sign_changing() && pp.supercritical_q;
  double mu_top = S.mu0;
  if (S.has_min) {
    S.xi0_min = most_negative_center(w);
    const double At = w.eval(S.xi0_min) / (pp.q + 1.0) * moment;
    S.mu0_min = pick_mu0(land, S.xi0_min, std::max(At, -1.0), -1.0, S.B_min);
    mu_top = std::max(mu_top, S.mu0_min);
  }
  auto below = [&](const Extremes& e) {
    return e.max < 0.5 * S.B && (!S.has_min || e.min > 0.5 * S.B_min);
  };

  const double rmin = smallest_radius(w);
  const double far = w.radius() + 1.0;
  // μ₁: the bottom face must sit below B/2 (above B̃/2) for every ξ.
  double mu0_low = S.has_min ? std::min(S.mu0, S.mu0_min) : S.mu0;
  S.mu1 = mu0_low;
  const Points near = support_points(w, std::numeric_limits<double>::infinity(), rmin / 8.0);
  for (;;) {
    S.mu1 *= 0.5;
    if (S.mu1 < std::ldexp(1.0, -60)) computation_error("SlabNotCertified", "μ₁ fell below 2^-60");
    Extremes e;
    scan(land, S.mu1, near, e);
    scan(land, S.mu1, ball_points(n, far, rmin / 2.0, n == 1 ? 4097 : (n == 2 ? 129 : 33)), e);
    if (below(e)) break;
  }

  // μ₂ = R: grow until the top and the lateral faces are certified.
  double xi0n = norm(S.xi0);
  if (S.has_min) xi0n = std::max(xi0n, norm(S.xi0_min));
  S.R = mu_top + xi0n + 1.0;
  const int cap = n == 1 ? 4097 : (n == 2 ? 129 : 33);
  for (;;) {
    if (S.R > std::ldexp(1.0, 20)) computation_error("SlabNotCertified", "R exceeded 2^20");
    S.mu2 = S.R;
    Extremes e;
    // Bottom over the whole disc, top, and the side at log-spaced μ.
    scan(land, S.mu1, support_points(w, S.R, rmin / 8.0), e);
    scan(land, S.mu1, ball_points(n, S.R, rmin / 2.0, cap), e);
    scan(land, S.mu2, ball_points(n, S.R, S.R / 32.0, cap), e);
    const Points side = sphere_points(n, S.R);
    for (int k = 0; k < 64; ++k) {
      const double mu = S.mu1 * std::pow(S.mu2 / S.mu1, k / 63.0);
      scan(land, mu, side, e);
    }
    if (below(e)) {
      S.boundary_max = e.max;
      S.boundary_min = e.min;
      break;
    }
    S.R *= 2.0;
  }
  return S;
}

}  // namespace fracbubble
