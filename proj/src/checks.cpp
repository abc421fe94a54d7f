#include "fracbubble/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "fracbubble/bubble.hpp"
#include "fracbubble/energy.hpp"
#include "fracbubble/errors.hpp"
#include "fracbubble/exterior.hpp"
#include "fracbubble/landscape.hpp"
#include "fracbubble/parallel.hpp"
#include "fracbubble/reduction.hpp"
#include "fracbubble/regularity.hpp"
#include "fracbubble/riesz.hpp"

namespace fracbubble {

namespace {

struct Check {
  const char* name;
  std::function<CheckResult(const RunConfig&)> run;
};

CheckResult result(double value, double threshold, bool pass, std::string detail = {}) {
  CheckResult r;
  r.value = value;
  r.threshold = threshold;
  r.pass = pass;
  r.detail = std::move(detail);
  return r;
}

CheckResult at_most(double value, double threshold, std::string detail = {}) {
  return result(value, threshold, value <= threshold, std::move(detail));
}

CheckResult not_applicable(const std::string& why) { return result(0.0, 0.0, true, "not applicable: " + why); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> origin(int n) { return std::vector<double>(n, 0.0); }

double sup_trusted_abs_diff(const Field& a, const Field& b) { return sup_trusted(a - b); }

// Random compactly supported fields: a few bumps of mixed sign inside |x|∞ ≤ L/4.
Field random_compact(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ctr(-g.L / 4.0, g.L / 4.0), rad(0.5, 3.0), amp(-1.0, 1.0);
  std::uniform_int_distribution<int> cnt(1, 4), kk(1, 3);
  std::vector<Bump> bumps;
  const int m = cnt(rng);
  for (int i = 0; i < m; ++i) {
    Bump b;
    b.c.resize(g.n);
    for (double& c : b.c) c = ctr(rng);
    b.r = rad(rng);
    b.a = amp(rng);
    b.k = kk(rng);
    bumps.push_back(b);
  }
  if (std::all_of(bumps.begin(), bumps.end(), [](const Bump& b) { return b.a <= 0.0; })) bumps[0].a = 1.0;
  const CompactWeight w(g.n, bumps);
  return sample_weight(g, w);
}

Field random_field(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Field f(g);
  for (double& v : f.values) v = nd(rng);
  return f;
}

// Ratio family calibration: max over the set against twice the median.
CheckResult calibration(std::vector<double> ratios, const std::string& what) {
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const double med = 0.5 * (sorted[(sorted.size() - 1) / 2] + sorted[sorted.size() / 2]);
  const double mx = sorted.back();
  const bool finite = std::all_of(ratios.begin(), ratios.end(), [](double r) { return std::isfinite(r); });
  return result(mx / med, 2.0, finite && mx <= 2.0 * med,
                what + ": max " + fmt(mx) + ", median " + fmt(med));
}

Field riesz_for(const Field& f, double s) {
  return f.grid.n <= 2 ? riesz_free(f, s) : riesz_potential(f, s);
}

bool pde_dimension(const RunConfig& c) { return c.params.n <= 2; }

bool weight_even(const CompactWeight& h) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-h.radius(), h.radius());
  std::vector<double> x(h.dim()), y(h.dim());
  for (int k = 0; k < 200; ++k) {
    for (int i = 0; i < h.dim(); ++i) {
      x[i] = u(rng);
      y[i] = -x[i];
    }
    if (std::abs(h.eval(x) - h.eval(y)) > 1e-14) return false;
  }
  return true;
}

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = {
      {"model.exponent_identities",
       [](const RunConfig&) {
         std::mt19937_64 rng(1);
         std::uniform_int_distribution<int> dn(1, 3);
         std::uniform_real_distribution<double> u(0.0, 1.0);
         double worst = 0.0;
         for (int k = 0; k < 100; ++k) {
           const int n = dn(rng);
           const double s = std::min(0.999, n / 4.0) * (0.01 + 0.98 * u(rng));
           const ProblemParams p = validate(n, s, 0.5 * (n + 2 * s) / (n - 2 * s));
           worst = std::max(worst, std::abs(p.crit_exp / p.dual_exp - p.p) / p.p);
           worst = std::max(worst,
                            std::abs((p.p - 1.0) * p.dual_exp * (n + 2 * s) / (4 * s) - p.crit_exp) / p.crit_exp);
           if (!(p.dual_exp < 2.0 && 2.0 < p.crit_exp)) worst = 1.0;
         }
         return at_most(worst, 1e-13);
       }},
      {"model.weight_support",
       [](const RunConfig& c) {
         const CompactWeight& h = c.weight;
         const Box box = h.support_box();
         std::mt19937_64 rng(2);
         std::uniform_real_distribution<double> u(-1.0, 1.0);
         const int n = h.dim();
         double outside = 0.0, jump = 0.0;
         std::vector<double> x(n), y(n);
         for (int k = 0; k < 2000; ++k) {
           for (int i = 0; i < n; ++i) {
             const double mid = 0.5 * (box.lo[i] + box.hi[i]), half = 0.5 * (box.hi[i] - box.lo[i]);
             x[i] = mid + 2.0 * half * u(rng);
             y[i] = x[i] + 1e-9 * u(rng);
           }
           bool in = true;
           for (int i = 0; i < n; ++i) in = in && x[i] >= box.lo[i] && x[i] <= box.hi[i];
           if (!in) outside = std::max(outside, std::abs(h.eval(x)));
           jump = std::max(jump, std::abs(h.eval(x) - h.eval(y)));
         }
         return result(std::max(outside, jump), 1e-6, outside == 0.0 && jump <= 1e-6,
                       "max |h| outside box " + fmt(outside) + ", max jump at 1e-9 " + fmt(jump));
       }},
      {"bubble.pde_residual",
       [](const RunConfig& c) {
         const BubblePoint b = make_bubble(c.params, 1.0, origin(c.params.n));
         const Field lap = frac_laplacian_profile(c.grid, c.params.s, bubble_profile(b));
         const Field zp = sample(c.grid, [&](const double* x) { return std::pow(bubble_eval(b, x), c.params.p); });
         return at_most(sup_trusted_abs_diff(lap, zp) / sup_norm(zp), 1e-3, "relative sup on |x|∞ ≤ L/2");
       }},
      {"bubble.tangent_residual",
       [](const RunConfig& c) {
         const ProblemParams& pp = c.params;
         const BubblePoint b = make_bubble(pp, 1.0, origin(pp.n));
         double worst = 0.0;
         for (int j = 1; j <= pp.n + 1; ++j) {
           const Field lap = frac_laplacian_profile(c.grid, pp.s, tangent_profile(b, j));
           const Field rhs = sample(c.grid, [&](const double* x) {
             return pp.p * std::pow(bubble_eval(b, x), pp.p - 1.0) * tangent_eval(b, j, x);
           });
           worst = std::max(worst, sup_trusted_abs_diff(lap, rhs) / sup_norm(rhs));
         }
         return at_most(worst, 1e-3, "max over j of the relative sup residual");
       }},
      {"bubble.gram",
       [](const RunConfig& c) {
         const ProblemParams& pp = c.params;
         double worst_iso = 0.0, lam_min = 1e300;
         double off = 0.0;
         for (double mu : {0.5, 1.0, 2.0}) {
           const GramReport g = gram_constants(pp, make_bubble(pp, mu, origin(pp.n)));
           off = std::max(off, g.max_offdiag_ratio);
           for (double l : g.lambda) lam_min = std::min(lam_min, l);
           for (int i = 1; i < pp.n; ++i) {
             worst_iso = std::max(worst_iso, std::abs(g.lambda[i] - g.lambda[0]) / g.lambda[0]);
           }
         }
         const bool pass = off <= 1e-6 && worst_iso <= 1e-6 && lam_min > 0.0;
         return result(std::max(off, worst_iso), 1e-6, pass,
                       "offdiag " + fmt(off) + ", isotropy " + fmt(worst_iso) + ", min λ " + fmt(lam_min));
       }},
      {"bubble.moment",
       [](const RunConfig& c) {
         if (!c.params.supercritical_q) return not_applicable("the moment diverges for this q");
         const MomentReport m = bubble_moment(c.params);
         return at_most(std::abs(m.quadrature - m.closed_form) / m.closed_form, 1e-8);
       }},
      {"field.plancherel",
       [](const RunConfig& c) {
         std::mt19937_64 rng(c.seed);
         double worst = 0.0;
         for (int k = 0; k < 5; ++k) {
           const Field u = random_field(c.grid, rng);
           const double v = hs_inner(u, u, c.params.s);
           if (!(v > 0.0)) worst = 1.0;
         }
         Field one(c.grid);
         for (double& v : one.values) v = 1.0;
         worst = std::max(worst, std::abs(hs_inner(one, one, c.params.s)));
         return at_most(worst, 1e-12, "hs_inner(u,u) > 0 on random fields and 0 on constants");
       }},
      {"field.inverse_symbols",
       [](const RunConfig& c) {
         std::mt19937_64 rng(c.seed + 1);
         Field u = random_field(c.grid, rng);
         const double mean = integrate(u) / (std::pow(2.0 * c.grid.L, c.grid.n));
         for (double& v : u.values) v -= mean;
         const Field back = riesz_potential(frac_laplacian(u, c.params.s), c.params.s);
         return at_most(sup_norm(back - u) / sup_norm(u), 1e-10);
       }},
      {"field.el4_identity",
       [](const RunConfig& c) {
         std::mt19937_64 rng(c.seed + 2);
         Field psi = random_field(c.grid, rng);
         const Field phi = random_field(c.grid, rng);
         const double mean = integrate(psi) / (std::pow(2.0 * c.grid.L, c.grid.n));
         for (double& v : psi.values) v -= mean;
         const double lhs = hs_inner(riesz_potential(psi, c.params.s), phi, c.params.s);
         const double rhs = dot(psi, phi);
         const double scale = std::sqrt(dot(psi, psi) * dot(phi, phi));
         return at_most(std::abs(lhs - rhs) / scale, 1e-12);
       }},
      {"field.energy_decomposition",
       [](const RunConfig& c) {
         ProblemParams p = c.params;
         if (p.eps == 0.0) p.eps = 0.01;
         const BubblePoint b = make_bubble(p, 1.0, origin(p.n));
         const Field z = sample(c.grid, [&](const double* x) { return bubble_eval(b, x); });
         const EnergyReport e = energy(z, p, c.weight);
         return at_most(std::abs(e.feps - (e.f0 - p.eps * e.G)), 0.0, "exact identity");
       }},
      {"field.riesz_free_bubble",
       [](const RunConfig& c) {
         if (!pde_dimension(c)) return not_applicable("free-space J is built for n = 1, 2");
         const BubblePoint b = make_bubble(c.params, 1.0, origin(c.params.n));
         const Field z = sample(c.grid, [&](const double* x) { return bubble_eval(b, x); });
         const Field zp = sample(c.grid, [&](const double* x) { return std::pow(bubble_eval(b, x), c.params.p); });
         return at_most(sup_trusted_abs_diff(riesz_free(zp, c.params.s), z) / sup_norm(z), 1e-3,
                        "J(z^p) against z, relative sup on the trusted region");
       }},
      {"field.hls_calibration",
       [](const RunConfig& c) {
         std::mt19937_64 rng(c.seed + 3);
         std::vector<double> r;
         for (int k = 0; k < 50; ++k) {
           const Field psi = random_compact(c.grid, rng);
           r.push_back(lp_norm(riesz_for(psi, c.params.s), c.params.crit_exp) / lp_norm(psi, c.params.dual_exp));
         }
         return calibration(r, "‖Jψ‖_{2*}/‖ψ‖_β");
       }},
      {"field.sobolev_calibration",
       [](const RunConfig& c) {
         std::mt19937_64 rng(c.seed + 4);
         std::vector<double> r;
         for (int k = 0; k < 50; ++k) {
           const Field u = random_compact(c.grid, rng);
           r.push_back(lp_norm(u, c.params.crit_exp) / std::sqrt(hs_inner(u, u, c.params.s)));
         }
         return calibration(r, "‖u‖_{2*}/[u]_s");
       }},
      {"field.el3_boundedness",
       [](const RunConfig& c) {
         std::mt19937_64 rng(c.seed + 5);
         std::vector<double> r;
         for (int k = 0; k < 50; ++k) {
           const Field psi = random_compact(c.grid, rng);
           r.push_back(sup_norm(riesz_for(psi, c.params.s)) / (sup_norm(psi) + lp_norm(psi, c.params.dual_exp)));
         }
         return calibration(r, "sup|Jψ|/(‖ψ‖_∞+‖ψ‖_β)");
       }},
      {"landscape.linearity",
       [](const RunConfig& c) {
         const Landscape a(c.params, c.weight), b(c.params, c.weight.scaled(3.0));
         const auto xi0 = most_positive_center(c.weight);
         double worst = 0.0;
         for (double mu : {0.05, 0.3, 1.0, 4.0}) {
           const double ga = a.value(mu, xi0), gb = b.value(mu, xi0);
           worst = std::max(worst, std::abs(gb - 3.0 * ga) / std::abs(3.0 * ga));
         }
         return at_most(worst, 1e-12);
       }},
      {"landscape.translation",
       [](const RunConfig& c) {
         std::vector<double> v(c.params.n, 0.0);
         v[0] = 1.75;
         const Landscape a(c.params, c.weight), b(c.params, c.weight.shifted(v));
         auto xi = most_positive_center(c.weight);
         auto xs = xi;
         for (int i = 0; i < c.params.n; ++i) xs[i] += v[i];
         double worst = 0.0;
         for (double mu : {0.1, 0.7, 2.0}) {
           const double ga = a.value(mu, xi), gb = b.value(mu, xs);
           worst = std::max(worst, std::abs(gb - ga) / std::abs(ga));
         }
         return at_most(worst, 1e-8);
       }},
      {"landscape.sign",
       [](const RunConfig& c) {
         for (const Bump& b : c.weight.bumps()) {
           if (b.a < 0.0) return not_applicable("the weight takes negative values");
         }
         const Landscape land(c.params, c.weight);
         double worst = 0.0;
         for (double mu : {0.01, 0.1, 1.0, 10.0}) {
           for (double x : {-5.0, -1.0, 0.0, 0.5, 3.0}) {
             std::vector<double> xi(c.params.n, 0.0);
             xi[0] = x;
             worst = std::min(worst, land.value(mu, xi));
           }
         }
         return result(worst, 0.0, worst >= 0.0, "minimum sampled Γ");
       }},
      {"landscape.gradient_fd",
       [](const RunConfig& c) {
         const Landscape land(c.params, c.weight);
         std::mt19937_64 rng(c.seed + 6);
         std::uniform_real_distribution<double> lm(std::log(0.05), std::log(3.0)), ux(-1.5, 1.5);
         const int n = c.params.n;
         const double h = 1e-5;
         double worst = 0.0;
         for (int k = 0; k < 20; ++k) {
           const double mu = std::exp(lm(rng));
           std::vector<double> xi(n);
           for (double& x : xi) x = ux(rng);
           const GammaSample g = land.eval(mu, xi);
           const double fd_mu = (land.value(mu + h, xi) - land.value(mu - h, xi)) / (2 * h);
           worst = std::max(worst, std::abs(fd_mu - g.grad[0]) / std::max(1.0, std::abs(g.grad[0])));
           for (int d = 0; d < n; ++d) {
             auto xp = xi, xm = xi;
             xp[d] += h;
             xm[d] -= h;
             const double fd = (land.value(mu, xp) - land.value(mu, xm)) / (2 * h);
             worst = std::max(worst, std::abs(fd - g.grad[1 + d]) / std::max(1.0, std::abs(g.grad[1 + d])));
           }
         }
         return at_most(worst, 1e-6);
       }},
      {"landscape.uniform_decay",
       [](const RunConfig& c) {
         const Landscape land(c.params, c.weight);
         const int n = c.params.n;
         const int per = n == 1 ? 41 : (n == 2 ? 11 : 5);
         const double w = c.weight.radius() + 2.0;
         double prev = std::numeric_limits<double>::infinity();
         bool mono = true;
         for (int j = 4; j <= 12; ++j) {
           const double mu = std::ldexp(1.0, -j);
           double sup = 0.0;
           int total = 1;
           for (int i = 0; i < n; ++i) total *= per;
           std::vector<double> xi(n);
           for (int f = 0; f < total; ++f) {
             int r = f;
             for (int d = 0; d < n; ++d) {
               xi[d] = -w + 2.0 * w * (r % per) / (per - 1);
               r /= per;
             }
             sup = std::max(sup, std::abs(land.value(mu, xi)));
           }
           if (!(sup < prev)) mono = false;
           prev = sup;
         }
         return result(prev, 0.0, mono, "sup over sampled ξ of |Γ(2^-j, ξ)| decreases for j = 4..12");
       }},
      {"landscape.grid_consistency",
       [](const RunConfig& c) {
         const ProblemParams& pp = c.params;
         const Landscape land(pp, c.weight);
         const auto xi0 = most_positive_center(c.weight);
         const BubblePoint b = make_bubble(pp, 1.0, xi0);
         const Field z = sample(c.grid, [&](const double* x) { return bubble_eval(b, x); });
         const double G = energy(z, pp, c.weight).G;
         const double g = land.value(1.0, xi0);
         return at_most(std::abs(G - g) / std::abs(g), 1e-6, "Γ(1, ξ₀) against grid G(z)");
       }},
      {"reduction.tangent_kernel",
       [](const RunConfig& c) {
         if (!pde_dimension(c)) return not_applicable("reduction runs for n = 1, 2");
         const BorderedOp op(c.params, make_bubble(c.params, 1.0, origin(c.params.n)), c.grid);
         double worst = 0.0;
         for (int i = 0; i < op.border(); ++i) {
           worst = std::max(worst, sup_trusted(op.apply_T(op.q(i))) / sup_norm(op.q(i)));
         }
         return at_most(worst, 1e-3, "max_j ‖T q_j‖/‖q_j‖");
       }},
      {"reduction.kernel_gap",
       [](const RunConfig& c) {
         if (!pde_dimension(c)) return not_applicable("reduction runs for n = 1, 2");
         const BorderedOp op(c.params, make_bubble(c.params, 1.0, origin(c.params.n)), c.grid);
         const KernelCertificate k = kernel_certificate(op);
         std::string d = "smallest singular values:";
         for (double s : k.sigma) d += " " + fmt(s);
         return result(k.gap, 1e3, k.gap >= 1e3, d);
       }},
      {"reduction.bordered_roundtrip",
       [](const RunConfig& c) {
         if (!pde_dimension(c)) return not_applicable("reduction runs for n = 1, 2");
         const BorderedOp op(c.params, make_bubble(c.params, 1.0, origin(c.params.n)), c.grid);
         std::mt19937_64 rng(c.seed + 7);
         const Field v0 = random_compact(c.grid, rng);
         std::normal_distribution<double> nd;
         std::vector<double> b0(op.border());
         for (double& b : b0) b = nd(rng);
         const Eigen::VectorXd y = op.apply(op.pack_unknown(v0, b0));
         Field f;
         std::vector<double> pairs;
         op.unpack_image(y, f, pairs);
         const BorderedSolution s = solve_bordered(op, f, pairs, 1e-12);
         double err = sup_norm(s.v - v0) / sup_norm(v0);
         for (int i = 0; i < op.border(); ++i) err = std::max(err, std::abs(s.beta[i] - b0[i]) / std::abs(b0[i]));
         return at_most(err, 1e-8);
       }},
      {"reduction.condition_uniform",
       [](const RunConfig& c) {
         if (!pde_dimension(c)) return not_applicable("reduction runs for n = 1, 2");
         double lo = 1e300, hi = 0.0;
         for (double mu : {0.5, 1.0, 2.0}) {
           const BorderedOp op(c.params, make_bubble(c.params, mu, origin(c.params.n)), c.grid);
           const double k = bordered_condition(op).cond;
           lo = std::min(lo, k);
           hi = std::max(hi, k);
         }
         return at_most(hi / lo, 10.0, "condition estimates in [" + fmt(lo) + ", " + fmt(hi) + "]");
       }},
      {"reduction.zero_eps",
       [](const RunConfig& c) {
         if (!pde_dimension(c)) return not_applicable("reduction runs for n = 1, 2");
         ProblemParams p = c.params;
         p.eps = 0.0;
         const ReductionState st =
             solve_auxiliary(make_bubble(p, 1.0, most_positive_center(c.weight)), p, c.weight, c.grid);
         double a = 0.0;
         for (double v : st.alpha) a = std::max(a, std::abs(v));
         const double v = std::max(sup_norm(st.w), a) + st.newton_iters;
         return result(v, 0.0, v == 0.0, "w = 0, α = 0, no Newton step");
       }},
      {"reduction.orthogonality",
       [](const RunConfig& c) {
         if (!pde_dimension(c)) return not_applicable("reduction runs for n = 1, 2");
         ProblemParams p = c.params;
         p.eps = 0.01;
         const ReductionState st =
             solve_auxiliary(make_bubble(p, 1.0, most_positive_center(c.weight)), p, c.weight, c.grid);
         return at_most(st.max_orth_ratio, 1e-10, "max |⟨w,q_i⟩|/(‖w‖‖q_i‖) over Newton iterates");
       }},
      {"reduction.even_correction",
       [](const RunConfig& c) {
         if (!pde_dimension(c)) return not_applicable("reduction runs for n = 1, 2");
         if (!weight_even(c.weight)) return not_applicable("the weight is not even");
         ProblemParams p = c.params;
         p.eps = 0.01;
         const Grid& g = c.grid;
         const ReductionState st = solve_auxiliary(make_bubble(p, 1.0, origin(p.n)), p, c.weight, g);
         // Mirror x ↦ -x maps index i to N - i on each axis; index 0 has no mirror.
         double worst = 0.0;
         std::vector<int> idx(g.n), mir(g.n);
         for (std::size_t k = 0; k < g.size(); ++k) {
           std::size_t r = k;
           bool ok = true;
           for (int d = g.n - 1; d >= 0; --d) {
             idx[d] = static_cast<int>(r % g.N);
             r /= g.N;
             ok = ok && idx[d] != 0;
             mir[d] = g.N - idx[d];
           }
           if (ok) worst = std::max(worst, std::abs(st.w[k] - st.w[g.index(mir.data())]));
         }
         return at_most(worst / sup_norm(st.w), 1e-6, "max |w(x) - w(-x)| / sup|w|");
       }},
      {"regularity.derived_inequalities",
       [](const RunConfig& c) {
         const GrowthSpec s = derive_growth(c.params, c.growth);
         return result(s.theta, 1.0, s.theta > 1.0, "ϑ = 2*_s τ/2");
       }},
      {"regularity.bubble_trace",
       [](const RunConfig& c) {
         const GrowthSpec s = derive_growth(c.params, c.growth);
         const BubblePoint b = make_bubble(c.params, 1.0, origin(c.params.n));
         const Field z = sample(c.grid, [&](const double* x) { return bubble_eval(b, x); });
         const IterationTrace tr = run_iteration(z, s, 0.1);
         const bool facts = tr.decreasing_w && tr.subset_chain && tr.phi_bound && tr.step0;
         return result(tr.U.back(), 1e-12, tr.converged && facts, facts ? "" : "a pointwise level fact failed");
       }},
      {"regularity.synthetic_audit",
       [](const RunConfig& c) {
         const GrowthSpec s = derive_growth(c.params, c.growth);
         std::vector<double> U{1e-4};
         while (U.size() < 41) {
           const double k = static_cast<double>(U.size() - 1);
           const double nxt = std::exp(k * std::log(2.0) + s.theta * std::log(U.back()));
           U.push_back(nxt > 0.0 && std::isfinite(nxt) ? nxt : 0.0);
         }
         const AuditResult a = recursion_audit(U, s.theta);
         return at_most(std::abs(a.C - 2.0), 1e-6, "fitted C for U_{k+1} = 2^k U_k^ϑ");
       }},
  };
  return checks;
}

}  // namespace

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const Check& c : registry()) out.push_back(c.name);
  return out;
}

std::vector<CheckResult> run_checks(const RunConfig& c, int threads) {
  const auto& reg = registry();
  std::vector<CheckResult> out(reg.size());
  parallel_for(reg.size(), threads, [&](std::size_t i) {
    try {
      out[i] = reg[i].run(c);
    } catch (const Error& e) {
      out[i] = result(std::numeric_limits<double>::quiet_NaN(), 0.0, false,
                      std::string("error ") + e.code() + ": " + e.what());
    } catch (const std::exception& e) {
      out[i] = result(std::numeric_limits<double>::quiet_NaN(), 0.0, false, std::string("error: ") + e.what());
    }
    out[i].name = reg[i].name;
  });
  return out;
}

}  // namespace fracbubble
