#include "fracbubble/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracbubble/errors.hpp"

namespace fracbubble {

ProblemParams validate(int n, double s, double q, double eps) {
  if (n < 1 || n > kMaxDim) {
    config_error("DimensionUnsupported", "n must be 1, 2 or 3 (got " + std::to_string(n) + ")");
  }
  if (!(s > 0.0 && s < 1.0)) {
    config_error("ExponentRange", "s must lie in (0,1)");
  }
  if (!(n > 4.0 * s)) {
    std::ostringstream msg;
    msg << "need n > 4s, got n=" << n << ", 4s=" << 4.0 * s;
    config_error("DimensionOrderViolation", msg.str());
  }
  ProblemParams pp;
  pp.n = n;
  pp.s = s;
  pp.q = q;
  pp.eps = eps;
  pp.p = (n + 2.0 * s) / (n - 2.0 * s);
  if (!(q > 0.0 && q < pp.p)) {
    std::ostringstream msg;
    msg << "q must lie in (0,p) with p=" << pp.p << ", got q=" << q;
    config_error("ExponentRange", msg.str());
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    config_error("ExponentRange", "eps must be finite and nonnegative");
  }
  pp.crit_exp = 2.0 * n / (n - 2.0 * s);
  pp.dual_exp = 2.0 * n / (n + 2.0 * s);
  pp.gamma_s = (n - 2.0 * s) * (q + 1.0) / 2.0;
  pp.supercritical_q = q > 2.0 * s / (n - 2.0 * s);
  return pp;
}

double bump_eval(const Bump& b, std::span<const double> x) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < b.c.size(); ++i) {
    const double d = x[i] - b.c[i];
    d2 += d * d;
  }
  const double r2 = b.r * b.r;
  if (d2 >= r2) return 0.0;
  const double t = 1.0 - d2 / r2;
  double v = 1.0;
  for (int i = 0; i < b.k; ++i) v *= t;
  return b.a * v;
}

CompactWeight::CompactWeight(int n, std::vector<Bump> bumps) : n_(n), bumps_(std::move(bumps)) {
  for (const auto& b : bumps_) {
    if (static_cast<int>(b.c.size()) != n_) {
      config_error("WeightShape", "bump center dimension does not match n");
    }
    if (!(b.r > 0.0) || !std::isfinite(b.r)) config_error("WeightShape", "bump radius must be positive");
    if (b.k < 1) config_error("WeightShape", "bump smoothness k must be at least 1");
    if (!std::isfinite(b.a)) config_error("WeightShape", "bump amplitude must be finite");
  }
}

double CompactWeight::eval(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& b : bumps_) v += bump_eval(b, x);
  return v;
}

Box CompactWeight::support_box() const {
  if (bumps_.empty()) config_error("EmptyWeight", "the weight has no bumps, so h₊ vanishes");
  Box box;
  box.lo.assign(n_, INFINITY);
  box.hi.assign(n_, -INFINITY);
  for (const auto& b : bumps_) {
    for (int i = 0; i < n_; ++i) {
      box.lo[i] = std::min(box.lo[i], b.c[i] - b.r);
      box.hi[i] = std::max(box.hi[i], b.c[i] + b.r);
    }
  }
  return box;
}

bool CompactWeight::sign_changing() const {
  return std::any_of(bumps_.begin(), bumps_.end(), [](const Bump& b) { return b.a < 0.0; });
}

bool CompactWeight::has_positive_part() const {
  // A positive bump could in principle be cancelled by negative ones; that is only
  // possible for coincident balls with the same profile, which we detect directly.
  for (const auto& b : bumps_) {
    if (!(b.a > 0.0)) continue;
    double net = 0.0;
    for (const auto& o : bumps_) {
      if (o.k == b.k && o.r == b.r && o.c == b.c) net += o.a;
    }
    if (net > 0.0) return true;
  }
  return false;
}

double CompactWeight::radius() const {
  double R = 0.0;
  for (const auto& b : bumps_) {
    double c2 = 0.0;
    for (double ci : b.c) c2 += ci * ci;
    R = std::max(R, std::sqrt(c2) + b.r);
  }
  return R;
}

CompactWeight CompactWeight::scaled(double factor) const {
  auto out = bumps_;
  for (auto& b : out) b.a *= factor;
  return CompactWeight(n_, std::move(out));
}

CompactWeight CompactWeight::shifted(std::span<const double> v) const {
  auto out = bumps_;
  for (auto& b : out) {
    for (int i = 0; i < n_; ++i) b.c[i] += v[i];
  }
  return CompactWeight(n_, std::move(out));
}

void check_weight(const ProblemParams& params, const CompactWeight& h) {
  if (h.bumps().empty()) config_error("EmptyWeight", "the weight has no bumps, so h₊ vanishes");
  if (h.dim() != params.n) config_error("WeightShape", "weight dimension does not match n");
  if (!h.has_positive_part()) {
    config_error("NoPositivePart",
                 "hypothesis on the weight violated: h₊ vanishes identically (need some positive amplitude)");
  }
  if (!params.supercritical_q && h.sign_changing()) {
    config_error("SublinearNeedsPositiveWeight",
                 "q ≤ 2s/(n-2s) requires h ≥ 0, but the weight changes sign");
  }
}

}  // namespace fracbubble
