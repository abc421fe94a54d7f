#include "fracbubble/landscape.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracbubble/bubble.hpp"
#include "fracbubble/errors.hpp"
#include "fracbubble/quadrature.hpp"

namespace fracbubble {

namespace {

using Acc = std::array<double, 5>;  // Γ, ∂μ, ∂ξ_1..∂ξ_n

struct Pass {
  const Bump* bump;
  int n;
  double mu;
  const double* xi;
  bool grad;
  int refine;  // number of panel halvings
  double pref;  // α^{q+1} μ^{-γ_s}
  double e;     // (n-2s)/2
  double gam;   // γ_s
  double q;
};

void add_integrand(const Pass& P, const double* t, double w, Acc& acc, Acc& mag) {
  double x[3], rho = 0.0;
  for (int i = 0; i < P.n; ++i) {
    x[i] = P.xi[i] + t[i];
    rho += t[i] * t[i];
  }
  rho /= P.mu * P.mu;
  const double hv = bump_eval(*P.bump, std::span<const double>(x, P.n));
  if (hv == 0.0) return;
  const double base = w * hv * P.pref;
  const double Pg = std::pow(1.0 + rho, -P.gam);
  const double v0 = base * Pg / (P.q + 1.0);
  acc[0] += v0;
  mag[0] += std::abs(v0);
  if (!P.grad) return;
  const double Pg1 = Pg / (1.0 + rho);
  const double dmu = base * P.e * Pg1 * (rho - 1.0) / P.mu;
  acc[1] += dmu;
  mag[1] += std::abs(dmu);
  for (int j = 0; j < P.n; ++j) {
    const double dx = base * 2.0 * P.e * t[j] * Pg1 / (P.mu * P.mu);
    acc[2 + j] += dx;
    mag[2 + j] += std::abs(dx);
  }
}

// Breakpoints on [lo, hi] graded toward the offset origin at `scale`, and, when
// `ends` is set, toward both endpoints where chord integrals have algebraic behaviour.
std::vector<double> breakpoints(double lo, double hi, double scale, bool ends, int refine) {
  std::vector<double> bp = graded_breakpoints(lo, hi, 0.0, scale);
  if (ends) {
    const double len = hi - lo;
    for (int j = 2; j <= 14; ++j) {
      const double d = len * std::ldexp(1.0, -j);
      bp.push_back(lo + d);
      bp.push_back(hi - d);
    }
    std::sort(bp.begin(), bp.end());
    std::vector<double> u{bp.front()};
    for (double v : bp) {
      if (v - u.back() > 1e-14 * len) u.push_back(v);
    }
    u.back() = hi;
    bp.swap(u);
  }
  for (int r = 0; r < refine; ++r) bp = halve_panels(bp);
  return bp;
}

// Iterated integral over the ball of the bump: axis d runs over the chord left by
// the previous coordinates.
void integrate_axis(const Pass& P, int d, double* t, double chord2, double prefix2, double w, Acc& acc,
                    Acc& mag) {
  const Bump& b = *P.bump;
  const double half = std::sqrt(std::max(chord2, 0.0));
  if (half == 0.0) return;
  const double lo = b.c[d] - half - P.xi[d], hi = b.c[d] + half - P.xi[d];
  const double scale = std::sqrt(P.mu * P.mu + prefix2);
  const bool last = d == P.n - 1;
  const auto bp = breakpoints(lo, hi, scale, !last, P.refine);
  const Rule& rule = gauss_legendre(8);
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double a = bp[k], c = bp[k + 1];
    const double hw = 0.5 * (c - a), mid = 0.5 * (a + c);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      t[d] = mid + hw * rule.x[i];
      const double wi = w * hw * rule.w[i];
      if (last) {
        add_integrand(P, t, wi, acc, mag);
      } else {
        const double off = t[d] + P.xi[d] - b.c[d];
        integrate_axis(P, d + 1, t, chord2 - off * off, prefix2 + t[d] * t[d], wi, acc, mag);
      }
    }
  }
}

void integrate_all(const Landscape& L, const ProblemParams& pp, double alpha, double mu, const double* xi,
                   bool grad, int refine, Acc& acc, Acc& mag) {
  acc.fill(0.0);
  mag.fill(0.0);
  for (const Bump& b : L.weight().bumps()) {
    Pass P{&b, pp.n, mu, xi, grad, refine, std::pow(alpha, pp.q + 1.0) * std::pow(mu, -pp.gamma_s),
           0.5 * (pp.n - 2.0 * pp.s), pp.gamma_s, pp.q};
    double t[3] = {0.0, 0.0, 0.0};
    integrate_axis(P, 0, t, b.r * b.r, 0.0, 1.0, acc, mag);
  }
}

bool agree(const Acc& a, const Acc& b, const Acc& mag, int m, double tol) {
  for (int i = 0; i < m; ++i) {
    if (std::abs(a[i] - b[i]) > tol * mag[i]) return false;
  }
  return true;
}

}  // namespace

Landscape::Landscape(const ProblemParams& params, const CompactWeight& h, double rel_tol)
    : params_(params), h_(h), alpha_(alpha_ns(params)), tol_(rel_tol) {
  if (h.dim() != params.n) config_error("DimensionMismatch", "weight dimension differs from n");
  if (h.bumps().empty()) config_error("EmptyWeight", "weight has no bumps");
}

GammaSample Landscape::eval(double mu, std::span<const double> xi, bool with_grad) const {
  if (!(mu > 0.0)) computation_error("DomainError", "Γ needs μ > 0");
  const int n = params_.n;
  const int m = with_grad ? n + 2 : 1;
  Acc prev, prev_mag, cur, cur_mag;
  integrate_all(*this, params_, alpha_, mu, xi.data(), with_grad, 0, prev, prev_mag);
  bool ok = false;
  for (int level = 1; level <= 2 && !ok; ++level) {
    integrate_all(*this, params_, alpha_, mu, xi.data(), with_grad, level, cur, cur_mag);
    ok = agree(prev, cur, cur_mag, m, tol_);
    prev = cur;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "Γ quadrature did not settle to " << tol_ << " at mu = " << mu;
    computation_error("QuadratureNotConverged", msg.str());
  }
  GammaSample g;
  g.mu = mu;
  for (int i = 0; i < n; ++i) g.xi[i] = xi[i];
  g.gamma = cur[0];
  if (with_grad) {
    for (int i = 0; i <= n; ++i) g.grad[i] = cur[1 + i];
  }
  return g;
}

std::vector<double> richardson_ladder(double tau, int count) {
  std::vector<double> c;
  for (int i = 0; i <= count; ++i) {
    if (tau + 2.0 * i > 0.0) c.push_back(tau + 2.0 * i);
    if (i > 0) c.push_back(2.0 * i);
  }
  std::sort(c.begin(), c.end());
  std::vector<double> out;
  for (double v : c) {
    if (out.empty() || v - out.back() > 1e-9) out.push_back(v);
    if (static_cast<int>(out.size()) == count) break;
  }
  return out;
}

double richardson_limit(std::span<const double> mus, std::span<const double> values,
                        std::span<const double> exponents) {
  const int K = static_cast<int>(exponents.size());
  if (static_cast<int>(mus.size()) < K + 1 || mus.size() != values.size()) {
    computation_error("InsufficientSamples", "extrapolation needs one more sample than exponents");
  }
  const std::size_t off = mus.size() - (K + 1);
  Eigen::MatrixXd A(K + 1, K + 1);
  Eigen::VectorXd r(K + 1);
  for (int i = 0; i <= K; ++i) {
    A(i, 0) = 1.0;
    for (int k = 0; k < K; ++k) A(i, 1 + k) = std::pow(mus[off + i], exponents[k]);
    r(i) = values[off + i];
  }
  // Column scaling keeps the tiny powers of μ from wrecking the pivoting.
  Eigen::VectorXd scale(K + 1);
  for (int k = 0; k <= K; ++k) {
    scale(k) = A.col(k).cwiseAbs().maxCoeff();
    A.col(k) /= scale(k);
  }
  const Eigen::VectorXd c = A.fullPivLu().solve(r);
  return c(0) / scale(0);
}

SmallMuLimit small_mu_limit(const Landscape& land, std::span<const double> xi0, int j_first, int j_last) {
  const ProblemParams& pp = land.params();
  SmallMuLimit out;
  out.supercritical = pp.supercritical_q;
  out.h_at_xi0 = land.weight().eval(xi0);
  double amp = 0.0;
  for (const Bump& b : land.weight().bumps()) amp = std::max(amp, std::abs(b.a));
  std::vector<double> gam;
  for (int j = j_first; j <= j_last; ++j) {
    const double mu = std::ldexp(1.0, -j);
    const double g = land.value(mu, xi0);
    out.mus.push_back(mu);
    gam.push_back(g);
    out.ratios.push_back(g / std::pow(mu, pp.n - pp.gamma_s));
  }
  bool sign_change = false;
  for (std::size_t i = 1; i < gam.size(); ++i) {
    if ((gam[i] > 0.0 && gam[i - 1] < 0.0) || (gam[i] < 0.0 && gam[i - 1] > 0.0)) sign_change = true;
  }
  if (sign_change && std::abs(out.h_at_xi0) <= 1e-12 * amp) {
    computation_error("AmbiguousRegime", "Γ changes sign along the μ sweep and h(ξ₀) vanishes");
  }
  if (out.supercritical) {
    out.exponents = richardson_ladder(pp.tail_exponent(), 3);
    out.A_hat = richardson_limit(out.mus, out.ratios, out.exponents);
    out.A_pred = out.h_at_xi0 / (pp.q + 1.0) * bubble_moment_value(pp);
  } else {
    const double sgn = out.h_at_xi0 >= 0.0 ? 1.0 : -1.0;
    out.monotone = true;
    for (std::size_t i = 1; i < out.ratios.size(); ++i) {
      if (!(sgn * out.ratios[i] > sgn * out.ratios[i - 1])) out.monotone = false;
    }
    out.growth = out.ratios.back() / out.ratios.front();
    out.consistent_with_infinity = out.monotone && out.growth > 2.0;
  }
  return out;
}

namespace {

RateFit finish_fit(RateFit f) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < f.scales.size(); ++i) {
    lx.push_back(std::log(f.scales[i]));
    ly.push_back(std::log(f.values[i]));
  }
  const LineFit lf = fit_line(lx, ly);
  f.slope = lf.slope;
  f.intercept = lf.intercept;
  f.r2 = lf.r2;
  return f;
}

}  // namespace

RateFit mu_rate(const Landscape& land, std::span<const double> xi0, int j_first, int j_last) {
  RateFit f;
  for (int j = j_first; j <= j_last; ++j) {
    const double mu = std::ldexp(1.0, -j);
    f.scales.push_back(mu);
    f.values.push_back(std::abs(land.value(mu, xi0)));
  }
  return finish_fit(std::move(f));
}

RateFit xi_rate(const Landscape& land, std::span<const double> xi0, double mu, double r_first, double r_last) {
  RateFit f;
  std::vector<double> xi(xi0.begin(), xi0.end());
  for (double r = r_first; r <= r_last * (1.0 + 1e-12); r *= 2.0) {
    xi[0] = xi0[0] + r;
    f.scales.push_back(r);
    f.values.push_back(std::abs(land.value(mu, xi)));
  }
  return finish_fit(std::move(f));
}

std::vector<double> most_positive_center(const CompactWeight& h) {
  const Bump* best = nullptr;
  double best_v = 0.0;
  for (const Bump& b : h.bumps()) {
    const double v = h.eval(b.c);
    if (v > best_v) best_v = v, best = &b;
  }
  if (!best) config_error("NoPositivePart", "h has no bump center with h > 0 (hypothesis h_+ != 0)");
  return best->c;
}

std::vector<double> most_negative_center(const CompactWeight& h) {
  const Bump* best = nullptr;
  double best_v = 0.0;
  for (const Bump& b : h.bumps()) {
    const double v = h.eval(b.c);
    if (v < best_v) best_v = v, best = &b;
  }
  if (!best) config_error("NoNegativePart", "h has no bump center with h < 0");
  return best->c;
}

std::pair<RateFit, RateFit> tail_rates(const Landscape& land, const RateWindows& win) {
  const ProblemParams& pp = land.params();
  const auto xi0 = most_positive_center(land.weight());
  RateFit a = pp.supercritical_q ? mu_rate(land, xi0, win.mu_first, win.mu_last)
                                 : mu_rate(land, xi0, win.mu_first_sublinear, win.mu_last_sublinear);
  a.expected = pp.supercritical_q ? pp.n - pp.gamma_s : pp.gamma_s;
  RateFit b = xi_rate(land, xi0, 1.0, win.xi_first, win.xi_last);
  b.expected = -2.0 * pp.gamma_s;
  for (const RateFit* f : {&a, &b}) {
    if (f->r2 < 0.999) {
      std::ostringstream msg;
      msg << "log-log fit has r^2 = " << f->r2 << " < 0.999";
      computation_error("FitRejected", msg.str());
    }
  }
  return {a, b};
}

}  // namespace fracbubble
