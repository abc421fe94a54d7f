#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fracbubble/bubble.hpp"
#include "fracbubble/errors.hpp"
#include "fracbubble/regularity.hpp"

using namespace fracbubble;

namespace {

std::string violation(const std::vector<GrowthTerm>& terms) {
  try {
    derive_growth(validate(1, 0.2, 1.5), terms);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    CHECK(e.code() == "HypothesisViolated");
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("derived exponents for a bounded linear-free term") {
  const GrowthSpec s = derive_growth(validate(1, 0.2, 1.5), {GrowthTerm{}});
  REQUIRE(s.terms.size() == 1);
  const DerivedTerm& t = s.terms[0];
  CHECK(s.crit_exp == doctest::Approx(10.0 / 3.0));
  CHECK(t.m_under == doctest::Approx(2.5));
  CHECK(t.Theta == doctest::Approx(-0.4));
  CHECK(t.a == 1.0);
  CHECK(t.xi_h == doctest::Approx(0.7));
  CHECK(s.tau == doctest::Approx(1.0));
  CHECK(s.theta == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("the smallest τ over the terms sets ϑ") {
  GrowthTerm g;
  g.gamma = 1.5;
  const GrowthSpec s = derive_growth(validate(1, 0.2, 1.5), {GrowthTerm{}, g});
  // τ = (1 + (2/3)(3/2))/2* + 1 - (5/2)/2* = 0.85
  CHECK(s.terms[1].tau == doctest::Approx(0.85));
  CHECK(s.tau == doctest::Approx(0.85));
  CHECK(s.theta == doctest::Approx(10.0 / 3.0 * 0.85 / 2.0));
}

TEST_CASE("each violated inequality is named") {
  GrowthTerm big;
  big.gamma = 3.0;
  CHECK(violation({big}).find("gamma must lie") != std::string::npos);
  GrowthTerm low_m;
  low_m.m = 2.0;
  CHECK(violation({low_m}).find("m must exceed") != std::string::npos);
  GrowthTerm bad_a;
  bad_a.gamma = 1.5;
  bad_a.a = 0.05;
  CHECK(violation({bad_a}).find("a outside") != std::string::npos);
  CHECK(violation({}).find("no growth terms") != std::string::npos);
}

TEST_CASE("recursion audit on synthetic sequences") {
  const double theta = 5.0 / 3.0;
  std::vector<double> U{1e-3};
  for (int k = 0; k < 12; ++k) U.push_back(std::pow(3.0, k) * std::pow(U.back(), theta));
  const AuditResult a = recursion_audit(U, theta);
  CHECK(a.mode == "fit");
  CHECK(a.pass);
  CHECK(a.C == doctest::Approx(3.0).epsilon(1e-9));

  // Noisy enough to break the fit.
  std::vector<double> V = U;
  V[5] *= 10.0;
  CHECK_FALSE(recursion_audit(V, theta).pass);

  const std::vector<double> stop{1e-2, 1e-4, 0.0, 0.0};
  const AuditResult t = recursion_audit(stop, theta);
  CHECK(t.terminated);
  CHECK(t.mode == "terminated");
  CHECK(t.pass);
  const std::vector<double> grow{1e-2, 1e-1, 0.0};
  CHECK_FALSE(recursion_audit(grow, theta).pass);

  const std::vector<double> short_run{1e-2, 1e-3, 1e-4};
  CHECK_THROWS_AS(recursion_audit(short_run, theta), Error);
}

TEST_CASE("level-set iteration on the bubble") {
  const ProblemParams p = validate(1, 0.2, 1.5);
  const GrowthSpec spec = derive_growth(p, {GrowthTerm{}});
  const Grid g = make_grid(1, 40.0, 4096);
  const BubblePoint b = make_bubble(p, 1.0, std::vector<double>{0.0});
  const Field z = sample(g, [&](const double* x) { return bubble_eval(b, x); });
  const IterationTrace tr = run_iteration(z, spec, 0.1);
  REQUIRE(tr.U.size() == 41);
  CHECK(tr.A[0] == 0.0);
  CHECK(tr.A[3] == 0.875);
  CHECK(tr.U.back() <= 1e-12);
  CHECK(tr.converged);
  CHECK(tr.decreasing_w);
  CHECK(tr.subset_chain);
  CHECK(tr.phi_bound);
  CHECK(tr.step0);
  CHECK(tr.U[0] <= std::pow(0.1, spec.crit_exp) * (1 + 1e-12));
  for (std::size_t k = 1; k < tr.U.size(); ++k) CHECK(tr.U[k] <= tr.U[k - 1]);
  CHECK(recursion_audit(tr, spec).pass);

  // A field with slowly thinning super-level sets gives a genuine fit.
  const Field peaked = sample(g, [](const double* x) { return std::pow(1e-6 + std::abs(x[0]), -0.2); });
  const IterationTrace tp = run_iteration(peaked, spec, 1.0);
  CHECK(tp.decreasing_w);
  CHECK(tp.subset_chain);

  Field zero(g);
  CHECK_THROWS_AS(run_iteration(zero, spec, 0.1), Error);
}
