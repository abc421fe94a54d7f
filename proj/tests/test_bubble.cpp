#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracbubble/bubble.hpp"
#include "fracbubble/exterior.hpp"

using namespace fracbubble;

namespace {

// α^{p-1} = 2^{2s} Γ((n+2s)/2) / Γ((n-2s)/2)
double alpha_closed(const ProblemParams& p) {
  const double n = p.n, s = p.s;
  return std::pow(std::pow(2.0, 2 * s) * std::tgamma((n + 2 * s) / 2) / std::tgamma((n - 2 * s) / 2),
                  1.0 / (p.p - 1.0));
}

}  // namespace

TEST_CASE("bubble amplitude against the closed form") {
  // α comes from the spectral operator on a reference grid; the 3D grid is the coarsest.
  for (auto [n, s] : {std::pair{1, 0.2}, std::pair{1, 0.1}, std::pair{2, 0.4}, std::pair{3, 0.5}}) {
    const ProblemParams p = validate(n, s, 1.0);
    CHECK(alpha_ns(p) == doctest::Approx(alpha_closed(p)).epsilon(n == 3 ? 5e-5 : 1e-6));
  }
}

TEST_CASE("bubble scaling and tangent fields") {
  const ProblemParams p = validate(2, 0.4, 1.5);
  const std::vector<double> xi{0.3, -0.2};
  const double mu = 0.7;
  const BubblePoint b = make_bubble(p, mu, xi);
  const BubblePoint b0 = make_bubble(p, 1.0, std::vector<double>{0.0, 0.0});
  const double x[2] = {1.1, 0.4};
  const double y[2] = {(x[0] - xi[0]) / mu, (x[1] - xi[1]) / mu};
  CHECK(bubble_eval(b, x) == doctest::Approx(std::pow(mu, -(p.n - 2 * p.s) / 2) * bubble_eval(b0, y)));

  const double h = 1e-6;
  for (int j = 1; j <= 2; ++j) {
    auto xp = xi, xm = xi;
    xp[j - 1] += h;
    xm[j - 1] -= h;
    const double fd = (bubble_eval(make_bubble(p, mu, xp), x) - bubble_eval(make_bubble(p, mu, xm), x)) / (2 * h);
    CHECK(tangent_eval(b, j, x) == doctest::Approx(fd).epsilon(1e-6));
  }
  const double fd_mu =
      (bubble_eval(make_bubble(p, mu + h, xi), x) - bubble_eval(make_bubble(p, mu - h, xi), x)) / (2 * h);
  CHECK(tangent_eval(b, 3, x) == doctest::Approx(fd_mu).epsilon(1e-6));
}

TEST_CASE("bubble solves the critical equation on the default grid") {
  const ProblemParams p = validate(1, 0.2, 1.5);
  const Grid g = make_grid(1, 40.0, 4096);
  const BubblePoint b = make_bubble(p, 1.0, std::vector<double>{0.0});
  const Field lap = frac_laplacian_profile(g, p.s, bubble_profile(b));
  const Field zp = sample(g, [&](const double* x) { return std::pow(bubble_eval(b, x), p.p); });
  CHECK(sup_trusted(lap - zp) / sup_norm(zp) < 1e-6);
}

TEST_CASE("Gram matrix of the tangent fields") {
  const ProblemParams p = validate(2, 0.4, 1.5);
  for (double mu : {0.5, 2.0}) {
    const GramReport g = gram_constants(p, make_bubble(p, mu, std::vector<double>{1.0, -1.0}));
    REQUIRE(g.lambda.size() == 3);
    for (double l : g.lambda) CHECK(l > 0.0);
    CHECK(g.max_offdiag_ratio < 1e-10);
    CHECK(g.lambda[0] == doctest::Approx(g.lambda[1]).epsilon(1e-10));
  }
  // ξ-directions scale like μ^{-2}, the μ-direction likewise.
  const GramReport a = gram_constants(p, make_bubble(p, 1.0, std::vector<double>{0.0, 0.0}));
  const GramReport c = gram_constants(p, make_bubble(p, 2.0, std::vector<double>{0.0, 0.0}));
  CHECK(c.lambda[0] == doctest::Approx(a.lambda[0] / 4.0).epsilon(1e-8));
  CHECK(c.lambda[2] == doctest::Approx(a.lambda[2] / 4.0).epsilon(1e-8));
}

TEST_CASE("moment of z0^{q+1} against the Beta-function form") {
  const ProblemParams p = validate(1, 0.2, 1.5);
  const double alpha = alpha_ns(p);
  // ∫ (1+x²)^{-γ} dx = √π Γ(γ-1/2)/Γ(γ)
  const double closed = std::pow(alpha, p.q + 1) * std::sqrt(M_PI) * std::tgamma(p.gamma_s - 0.5) /
                        std::tgamma(p.gamma_s);
  CHECK(bubble_moment_value(p) == doctest::Approx(closed).epsilon(1e-8));
  const MomentReport m = bubble_moment(p);
  CHECK(m.quadrature == doctest::Approx(m.closed_form).epsilon(1e-8));
}
