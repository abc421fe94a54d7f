#include "fracbubble/bubble.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fracbubble/errors.hpp"
#include "fracbubble/quadrature.hpp"

namespace fracbubble {

Grid alpha_reference_grid(int n) {
  switch (n) {
    case 1: return make_grid(1, 40.0, 32768);
    case 2: return make_grid(2, 16.0, 256);
    default: return make_grid(3, 8.0, 64);
  }
}

AlphaReport alpha_ns_on(const ProblemParams& params, const Grid& g) {
  const int n = params.n;
  const double s = params.s;
  const double e = 0.5 * (n - 2.0 * s);
  Profile prof;
  prof.f = [n, e](const double* x) {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
    return std::pow(1.0 + r2, -e);
  };
  const Field u = sample(g, prof.f);
  ExteriorCorrection corr(g, s);
  const double x0[3] = {0.0, 0.0, 0.0};
  const double x1[3] = {1.0, 0.0, 0.0};
  AlphaReport rep;
  rep.grid = g;
  rep.kappa_origin = frac_laplacian_at(u, s, x0) + corr.at(prof, x0);
  rep.kappa_unit = (frac_laplacian_at(u, s, x1) + corr.at(prof, x1)) * std::pow(2.0, 0.5 * (n + 2.0 * s));
  const double rel = std::abs(rep.kappa_origin - rep.kappa_unit) / std::abs(rep.kappa_origin);
  if (!(rel <= 1e-3) || !(rep.kappa_origin > 0.0)) {
    std::ostringstream msg;
    msg << "kappa at x=0 (" << rep.kappa_origin << ") and |x|=1 (" << rep.kappa_unit
        << ") disagree by " << rel << " on L=" << g.L << ", N=" << g.N;
    computation_error("NormalizationDiverged", msg.str());
  }
  rep.alpha = std::pow(rep.kappa_origin, (n - 2.0 * s) / (4.0 * s));
  return rep;
}

double alpha_ns(const ProblemParams& params) {
  static std::mutex m;
  static std::map<std::pair<int, double>, double> cache;
  const auto key = std::make_pair(params.n, params.s);
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double a = alpha_ns_on(params, alpha_reference_grid(params.n)).alpha;
  std::lock_guard<std::mutex> lock(m);
  cache[key] = a;
  return a;
}

BubblePoint make_bubble(const ProblemParams& params, double mu, std::span<const double> xi) {
  BubblePoint b;
  b.n = params.n;
  b.s = params.s;
  b.mu = mu;
  for (int i = 0; i < params.n; ++i) b.xi[i] = xi.empty() ? 0.0 : xi[i];
  b.alpha = alpha_ns(params);
  return b;
}

namespace {

// r = |x-ξ|²/μ²
double scaled_r(const BubblePoint& b, const double* x) {
  double r2 = 0.0;
  for (int i = 0; i < b.n; ++i) {
    const double d = x[i] - b.xi[i];
    r2 += d * d;
  }
  return r2 / (b.mu * b.mu);
}

}  // namespace

double bubble_eval(const BubblePoint& b, const double* x) {
  const double e = 0.5 * (b.n - 2.0 * b.s);
  return std::pow(b.mu, -e) * b.alpha * std::pow(1.0 + scaled_r(b, x), -e);
}

double tangent_eval(const BubblePoint& b, int j, const double* x) {
  const double e = 0.5 * (b.n - 2.0 * b.s);
  const double r = scaled_r(b, x);
  const double zbar = b.alpha * std::pow(1.0 + r, -e);
  const double dzbar = -e * b.alpha * std::pow(1.0 + r, -e - 1.0);
  const double mu = b.mu;
  const double scale = std::pow(mu, -e);
  if (j >= 1 && j <= b.n) {
    return scale * dzbar * 2.0 * (b.xi[j - 1] - x[j - 1]) / (mu * mu);
  }
  // ∂/∂μ of μ^{-e} z̄(|x-ξ|²/μ²)
  const double d2 = r * mu * mu;
  return -e * std::pow(mu, -e - 1.0) * zbar - scale * dzbar * 2.0 * d2 / (mu * mu * mu);
}

Profile bubble_profile(const BubblePoint& b) {
  Profile p;
  p.f = [b](const double* x) { return bubble_eval(b, x); };
  p.center = b.xi;
  p.scale = b.mu;
  return p;
}

Profile tangent_profile(const BubblePoint& b, int j) {
  Profile p;
  p.f = [b, j](const double* x) { return tangent_eval(b, j, x); };
  p.center = b.xi;
  p.scale = b.mu;
  return p;
}

Profile bubble_power_profile(const BubblePoint& b, double exponent) {
  Profile p;
  p.f = [b, exponent](const double* x) { return std::pow(bubble_eval(b, x), exponent); };
  p.center = b.xi;
  p.scale = b.mu;
  return p;
}

namespace {

std::vector<double> gram_pass(const ProblemParams& params, const BubblePoint& b, int order, double R) {
  const int m = params.n + 1;
  std::vector<double> acc(m * m, 0.0);
  std::vector<double> q(m);
  auto visit = [&](const double* x, double w) {
    const double z = bubble_eval(b, x);
    const double wz = w * params.p * std::pow(z, params.p - 1.0);
    for (int i = 0; i < m; ++i) q[i] = tangent_eval(b, i + 1, x);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) acc[i * m + j] += wz * q[i] * q[j];
    }
  };
  visit_cube(params.n, b.xi.data(), R, b.xi.data(), b.mu, order, visit);
  visit_cube_exterior(params.n, b.xi.data(), R, order, visit);
  return acc;
}

}  // namespace

GramReport gram_constants(const ProblemParams& params, const BubblePoint& b, int order) {
  const int m = params.n + 1;
  const double R = 20.0 * b.mu;
  const auto coarse = gram_pass(params, b, order == 8 ? 4 : order / 2, R);
  const auto fine = gram_pass(params, b, order, R);
  GramReport rep;
  rep.matrix.assign(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) {
    const double lc = coarse[i * m + i], lf = fine[i * m + i];
    if (std::abs(lc - lf) > 0.01 * std::abs(lf)) {
      computation_error("GridTooCoarse", "Gram diagonal moved by more than 1% under refinement");
    }
    rep.lambda.push_back(lf);
    for (int j = 0; j < m; ++j) rep.matrix[i][j] = fine[i * m + j];
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const double ref = std::max(rep.lambda[i], rep.lambda[j]);
      rep.max_offdiag_ratio = std::max(rep.max_offdiag_ratio, std::abs(rep.matrix[i][j]) / ref);
    }
  }
  return rep;
}

namespace {

double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

// ∫_{ℝⁿ} (1+|x|²)^{-g} dx by radial quadrature; the tail r > 1 is folded onto (0,1]
// by r = 1/t, where the integrand t^{2g-n-1}(1+t²)^{-g} has an algebraic endpoint
// singularity that tanh-sinh handles.
double radial_integral(int n, double g) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto head = [n, g](double r) { return std::pow(1.0 + r * r, -g) * std::pow(r, n - 1); };
  auto tail = [n, g](double t) { return std::pow(t, 2.0 * g - n - 1.0) * std::pow(1.0 + t * t, -g); };
  return sphere_area(n) * (ts.integrate(head, 0.0, 1.0) + ts.integrate(tail, 0.0, 1.0));
}

double radial_closed_form(int n, double g) {
  return sphere_area(n) * 0.5 * boost::math::beta(0.5 * n, g - 0.5 * n);
}

}  // namespace

MomentReport bubble_moment(const ProblemParams& params) {
  const int n = params.n;
  if (!((n - 2.0 * params.s) * (params.q + 1.0) > n)) {
    std::ostringstream msg;
    msg << "(n-2s)(q+1) = " << (n - 2.0 * params.s) * (params.q + 1.0) << " <= n";
    computation_error("MomentDiverges", msg.str());
  }
  const double a = std::pow(alpha_ns(params), params.q + 1.0);
  MomentReport rep;
  rep.quadrature = a * radial_integral(n, params.gamma_s);
  rep.closed_form = a * radial_closed_form(n, params.gamma_s);
  return rep;
}

double bubble_moment_value(const ProblemParams& params) { return bubble_moment(params).quadrature; }

double bubble_energy(const ProblemParams& params) {
  const double a = std::pow(alpha_ns(params), params.p + 1.0);
  return params.s / params.n * a * radial_integral(params.n, params.n);
}

}  // namespace fracbubble
