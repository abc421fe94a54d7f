#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "fracbubble/bubble.hpp"
#include "fracbubble/errors.hpp"
#include "fracbubble/field.hpp"
#include "fracbubble/riesz.hpp"

using namespace fracbubble;

TEST_CASE("grid geometry") {
  const Grid g = make_grid(2, 32.0, 64);
  CHECK(g.dx() == 1.0);
  CHECK(g.cell_volume() == 1.0);
  CHECK(g.size() == 4096);
  double x[2];
  g.coords(0, x);
  CHECK(x[0] == -32.0);
  CHECK(x[1] == -32.0);
  const int idx[2] = {1, 3};
  g.coords(g.index(idx), x);
  CHECK(x[0] == -31.0);
  CHECK(x[1] == -29.0);
  const double in[2] = {16.0, -16.0}, out[2] = {16.5, 0.0};
  CHECK(g.trusted(in));
  CHECK_FALSE(g.trusted(out));
  CHECK_THROWS_AS(make_grid(1, 1.0, 48), Error);
}

TEST_CASE("fractional Laplacian of a Fourier mode") {
  const Grid g = make_grid(1, M_PI, 64);
  const double s = 0.3;
  for (int m : {1, 3, 7}) {
    const Field u = sample(g, [&](const double* x) { return std::cos(m * x[0]); });
    const Field lap = frac_laplacian(u, s);
    const Field expect = std::pow(static_cast<double>(m), 2 * s) * u;
    CHECK(sup_norm(lap - expect) < 1e-12);
    const Field back = riesz_potential(lap, s);
    CHECK(sup_norm(back - u) < 1e-12);
  }
}

TEST_CASE("Ḣ^s product: Plancherel and constants") {
  const Grid g = make_grid(2, M_PI, 64);
  const double s = 0.4;
  // u = cos x + sin 2y: [u]² = (2π)² (1^{2s} + 2^{2s}) / 2
  const Field u = sample(g, [](const double* x) { return std::cos(x[0]) + std::sin(2 * x[1]); });
  const double expect = 4 * M_PI * M_PI * (1.0 + std::pow(2.0, 2 * s)) / 2.0;
  CHECK(hs_inner(u, u, s) == doctest::Approx(expect).epsilon(1e-12));
  Field one(g);
  for (double& v : one.values) v = 1.0;
  CHECK(std::abs(hs_inner(one, u, s)) < 1e-10);
  CHECK(integrate(one) == doctest::Approx(4 * M_PI * M_PI));
}

TEST_CASE("norms") {
  const Grid g = make_grid(1, 32.0, 64);
  Field u(g);
  u[0] = 1.0;
  u[1] = -2.0;
  u[3] = 2.0;
  CHECK(sup_norm(u) == 2.0);
  CHECK(lp_norm(u, 2.0) == doctest::Approx(3.0));
  CHECK(lp_norm(u, 1.0) == doctest::Approx(5.0));
  CHECK(dot(u, u) == doctest::Approx(9.0));
  Field v = u;
  axpy(2.0, u, v);
  CHECK(v[1] == -6.0);
}

TEST_CASE("free-space Riesz potential inverts the operator on the bubble") {
  const ProblemParams p = validate(1, 0.2, 1.5);
  const Grid g = make_grid(1, 40.0, 4096);
  const BubblePoint b = make_bubble(p, 1.0, std::vector<double>{0.0});
  const Field z = sample(g, [&](const double* x) { return bubble_eval(b, x); });
  const Field zp = sample(g, [&](const double* x) { return std::pow(bubble_eval(b, x), p.p); });
  CHECK(sup_trusted(riesz_free(zp, p.s) - z) / sup_norm(z) < 1e-4);
}

TEST_CASE("free-space Riesz potential: transpose and linearity") {
  const Grid g = make_grid(1, 10.0, 256);
  const RieszFree J(g, 0.2);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Field a(g), c(g);
  for (double& v : a.values) v = nd(rng);
  for (double& v : c.values) v = nd(rng);
  const double lhs = dot(J.apply(a), c), rhs = dot(a, J.apply_transpose(c));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  const Field sum = J.apply(a + 2.0 * c);
  CHECK(sup_norm(sum - (J.apply(a) + 2.0 * J.apply(c))) < 1e-10 * sup_norm(sum));
}

TEST_CASE("Riesz kernel constant in the Fourier normalization") {
  // Γ(n/2 - s)/(4^s π^{n/2} Γ(s)) for n = 1, s = 1/4
  CHECK(riesz_constant(1, 0.25) ==
        doctest::Approx(std::tgamma(0.25) / (std::sqrt(2.0) * std::sqrt(M_PI) * std::tgamma(0.25))));
}

TEST_CASE("raw export round trip") {
  const Grid g = make_grid(1, 2.0, 64);
  const Field u = sample(g, [](const double* x) { return x[0] * x[0]; });
  const auto dir = std::filesystem::temp_directory_path() / "fracbubble_field_test";
  std::filesystem::create_directories(dir);
  const auto paths = export_raw(u, (dir / "u").string());
  REQUIRE(paths.size() == 2);
  std::ifstream is(dir / "u.bin", std::ios::binary);
  std::vector<double> back(g.size());
  is.read(reinterpret_cast<char*>(back.data()), static_cast<std::streamsize>(back.size() * sizeof(double)));
  CHECK(back == u.values);
  std::filesystem::remove_all(dir);
}
