#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

#include "fracbubble/bubble.hpp"
#include "fracbubble/errors.hpp"
#include "fracbubble/landscape.hpp"
#include "fracbubble/quadrature.hpp"
#include "fracbubble/reduction.hpp"

using namespace fracbubble;

namespace {

ProblemParams defaults() { return validate(1, 0.2, 1.5); }
CompactWeight unit_bump() { return CompactWeight(1, {Bump{{0.0}, 1.0, 1.0, 2}}); }

// Γ(μ,ξ) by direct adaptive quadrature over the support.
double gamma_direct(const ProblemParams& p, const CompactWeight& h, double mu, double xi) {
  const BubblePoint b = make_bubble(p, mu, std::vector<double>{xi});
  auto f = [&](double x) {
    const std::vector<double> pt{x};
    return h.eval(pt) * std::pow(bubble_eval(b, &x), p.q + 1.0);
  };
  const Box box = h.support_box();
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, box.lo[0], box.hi[0], 15, 1e-14) /
         (p.q + 1.0);
}

}  // namespace

TEST_CASE("Γ against direct quadrature") {
  const ProblemParams p = defaults();
  const CompactWeight h(1, {Bump{{0.5}, 1.5, 2.0, 3}, Bump{{-2.0}, 0.7, -1.0, 2}});
  const Landscape land(p, h);
  for (double mu : {0.2, 1.0, 3.0}) {
    for (double xi : {-2.0, 0.0, 1.3}) {
      CHECK(land.value(mu, std::vector<double>{xi}) ==
            doctest::Approx(gamma_direct(p, h, mu, xi)).epsilon(1e-8));
    }
  }
}

TEST_CASE("Γ is linear in h and covariant under translation") {
  const ProblemParams p = defaults();
  const Landscape a(p, unit_bump()), b(p, unit_bump().scaled(-2.5));
  const std::vector<double> xi{0.4}, v{3.0}, xs{3.4};
  CHECK(b.value(0.5, xi) == doctest::Approx(-2.5 * a.value(0.5, xi)).epsilon(1e-13));
  const Landscape c(p, unit_bump().shifted(v));
  CHECK(c.value(0.5, xs) == doctest::Approx(a.value(0.5, xi)).epsilon(1e-12));
}

TEST_CASE("analytic gradient against central differences") {
  const ProblemParams p = validate(2, 0.4, 1.5);
  const CompactWeight h(2, {Bump{{0.0, 0.0}, 1.0, 1.0, 2}, Bump{{1.5, 0.5}, 0.5, -0.5, 3}});
  const Landscape land(p, h);
  const std::vector<double> xi{0.3, -0.4};
  const double mu = 0.6, d = 1e-5;
  const GammaSample g = land.eval(mu, xi);
  CHECK(g.grad[0] == doctest::Approx((land.value(mu + d, xi) - land.value(mu - d, xi)) / (2 * d)).epsilon(1e-6));
  for (int i = 0; i < 2; ++i) {
    auto xp = xi, xm = xi;
    xp[i] += d;
    xm[i] -= d;
    CHECK(g.grad[1 + i] == doctest::Approx((land.value(mu, xp) - land.value(mu, xm)) / (2 * d)).epsilon(1e-6));
  }
}

TEST_CASE("least-squares line and Richardson extrapolation") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));

  // r(μ) = 2 + 3 μ^{1/2} - μ² is recovered exactly with exponents {1/2, 2}.
  std::vector<double> mus, r;
  for (int j = 4; j <= 8; ++j) {
    const double m = std::ldexp(1.0, -j);
    mus.push_back(m);
    r.push_back(2.0 + 3.0 * std::sqrt(m) - m * m);
  }
  const std::vector<double> e{0.5, 2.0};
  CHECK(richardson_limit(mus, r, e) == doctest::Approx(2.0).epsilon(1e-12));
  const std::vector<double> ladder = richardson_ladder(0.5, 4);
  CHECK(ladder == std::vector<double>{0.5, 2.0, 2.5, 4.0});
}

TEST_CASE("small-μ limit and rates for the default problem") {
  const ProblemParams p = defaults();
  const Landscape land(p, unit_bump());
  const std::vector<double> xi0{0.0};
  const SmallMuLimit lim = small_mu_limit(land, xi0);
  // A = h(0)/(q+1) ∫ z₀^{q+1}
  CHECK(lim.A_pred == doctest::Approx(bubble_moment_value(p) / (p.q + 1.0)).epsilon(1e-12));
  CHECK(lim.A_hat == doctest::Approx(lim.A_pred).epsilon(1e-6));
  const auto [mu, xi] = tail_rates(land);
  CHECK(mu.slope == doctest::Approx(p.n - p.gamma_s).epsilon(0.02));
  CHECK(xi.slope == doctest::Approx(-(p.n - 2 * p.s) * (p.q + 1)).epsilon(0.02));

  const ProblemParams sub = validate(1, 0.2, 0.5);
  const SmallMuLimit div = small_mu_limit(Landscape(sub, unit_bump()), xi0);
  CHECK(div.monotone);
  CHECK(div.growth >= 2.0);
  CHECK(div.consistent_with_infinity);
}

TEST_CASE("critical points of a synthetic landscape") {
  // Γ = 1 - (log μ - log 0.5)² - (ξ - 0.3)²
  const GammaFn f = [](double mu, std::span<const double> xi) {
    GammaSample s;
    const double l = std::log(mu / 0.5);
    s.mu = mu;
    s.xi[0] = xi[0];
    s.gamma = 1.0 - l * l - (xi[0] - 0.3) * (xi[0] - 0.3);
    s.grad[0] = -2.0 * l / mu;
    s.grad[1] = -2.0 * (xi[0] - 0.3);
    return s;
  };
  SlabSpec slab;
  slab.mu0 = 0.5;
  slab.xi0 = {0.0};
  slab.B = 0.9;
  slab.mu1 = 0.01;
  slab.mu2 = 10.0;
  slab.R = 3.0;
  const auto cps = find_critical_points(f, 1, slab, false);
  REQUIRE(cps.size() == 1);
  CHECK(cps[0].kind == CriticalKind::Max);
  CHECK(cps[0].mu == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(cps[0].xi[0] == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("slab and critical points for a ±bump weight") {
  const ProblemParams p = defaults();
  const CompactWeight h(1, {Bump{{-3.0}, 1.0, 1.0, 2}, Bump{{3.0}, 1.0, -1.0, 2}});
  const Landscape land(p, h);
  const SlabSpec slab = build_slab(land);
  CHECK(slab.has_min);
  CHECK(slab.boundary_max < slab.B / 2);
  const auto cps = find_critical_points(land, slab);
  REQUIRE(cps.size() == 2);
  const CriticalPoint& mx = pick_critical(cps, CriticalKind::Max);
  const CriticalPoint& mn = pick_critical(cps, CriticalKind::Min);
  CHECK(mx.xi[0] == doctest::Approx(-3.0).epsilon(1e-2));
  CHECK(mn.xi[0] == doctest::Approx(3.0).epsilon(1e-2));
  CHECK(mx.gamma == doctest::Approx(-mn.gamma).epsilon(1e-10));
  CHECK(mx.grad_norm < 1e-8);
}
