#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fracbubble/errors.hpp"
#include "fracbubble/model.hpp"

using namespace fracbubble;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "none";
}

}  // namespace

TEST_CASE("exponents for the default problem") {
  const ProblemParams p = validate(1, 0.2, 1.5);
  CHECK(p.p == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(p.crit_exp == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
  CHECK(p.dual_exp == doctest::Approx(10.0 / 7.0).epsilon(1e-15));
  CHECK(p.gamma_s == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(p.tail_exponent() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.supercritical_q);
  CHECK_FALSE(validate(1, 0.2, 0.5).supercritical_q);
}

TEST_CASE("conjugate exponent identities hold across admissible (n, s)") {
  for (int n = 1; n <= 3; ++n) {
    for (double frac : {0.05, 0.3, 0.6, 0.95}) {
      const double s = std::min(0.99, n / 4.0) * frac;
      const ProblemParams p = validate(n, s, 1.0);
      CHECK(p.crit_exp / p.dual_exp == doctest::Approx(p.p).epsilon(1e-13));
      CHECK(1.0 / p.crit_exp + 1.0 / p.dual_exp == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("validate rejects inadmissible parameters with config errors") {
  CHECK(code_of([] { validate(4, 0.2, 1.0); }) == "DimensionUnsupported");
  CHECK(code_of([] { validate(1, 0.0, 1.0); }) == "ExponentRange");
  CHECK(code_of([] { validate(1, 0.3, 1.0); }) == "DimensionOrderViolation");
  CHECK(code_of([] { validate(1, 0.2, 2.5); }) == "ExponentRange");
  CHECK(code_of([] { validate(1, 0.2, 1.0, -1e-3); }) == "ExponentRange");
  try {
    validate(1, 0.25, 1.0);
    FAIL("n = 4s must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("bump weight values, support and transforms") {
  const CompactWeight h(1, {Bump{{0.0}, 2.0, 3.0, 2}});
  const std::vector<double> half{1.0};
  // 3 (1 - 1/4)^2
  CHECK(h.eval(half) == doctest::Approx(3.0 * 0.5625));
  const std::vector<double> out{2.0};
  CHECK(h.eval(out) == 0.0);
  const Box b = h.support_box();
  CHECK(b.lo[0] == -2.0);
  CHECK(b.hi[0] == 2.0);
  CHECK(h.scaled(-2.0).eval(half) == doctest::Approx(-6.0 * 0.5625));
  const std::vector<double> v{5.0}, x{6.0};
  CHECK(h.shifted(v).eval(x) == doctest::Approx(h.eval(half)));
  CHECK(h.radius() == 2.0);
}

TEST_CASE("weight hypotheses") {
  const ProblemParams sup = validate(1, 0.2, 1.5);
  const ProblemParams sub = validate(1, 0.2, 0.5);
  CHECK(code_of([&] { check_weight(sup, CompactWeight(1, {Bump{{0.0}, 1.0, -1.0, 2}})); }) == "NoPositivePart");
  CHECK(code_of([&] {
          check_weight(sup, CompactWeight(1, {Bump{{0.0}, 1.0, 1.0, 2}, Bump{{0.0}, 1.0, -1.0, 2}}));
        }) == "NoPositivePart");
  CHECK(code_of([&] { CompactWeight(1, {}); check_weight(sup, CompactWeight(1, {})); }) == "EmptyWeight");
  CHECK(code_of([&] { CompactWeight(1, {Bump{{0.0, 1.0}, 1.0, 1.0, 2}}); }) == "WeightShape");
  const CompactWeight mixed(1, {Bump{{-3.0}, 1.0, 1.0, 2}, Bump{{3.0}, 1.0, -1.0, 2}});
  CHECK(code_of([&] { check_weight(sup, mixed); }) == "none");
  CHECK(code_of([&] { check_weight(sub, mixed); }) == "SublinearNeedsPositiveWeight");
  try {
    check_weight(sup, CompactWeight(1, {Bump{{0.0}, 1.0, -1.0, 2}}));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("hypothesis on the weight") != std::string::npos);
  }
}
