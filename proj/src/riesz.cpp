#include "fracbubble/riesz.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <utility>

#include "fracbubble/errors.hpp"
#include "fracbubble/quadrature.hpp"
#include "fracbubble/spectral.hpp"

namespace fracbubble {

double riesz_constant(int n, double s) {
  return std::tgamma(0.5 * n - s) /
         (std::pow(4.0, s) * std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(s));
}

struct RieszFree::Data {
  Grid padded;
  std::vector<std::complex<double>> kernel_hat;
  struct Rank1 {
    std::vector<double> a;
    std::vector<std::pair<std::size_t, double>> b;  // sparse functional
  };
  std::vector<Rank1> closure;
};

namespace {

// Derivatives of g(u) = u^{-b}: g^{(m)}(k) = (-1)^m b(b+1)…(b+m-1) k^{-b-m}.
double power_derivative(double b, int m, double k) {
  double c = 1.0;
  for (int i = 0; i < m; ++i) c *= -(b + i);
  return c * std::pow(k, -b - m);
}

// ∫_{-1}^{1} |k - t|^{-b} (1 - |t|) dt
double hat_weight_1d(double b, int k) {
  k = std::abs(k);
  if (k >= 32) {
    // Hat moments ∫ t^{2m}(1-|t|) dt = 2/((2m+1)(2m+2)).
    double acc = 0.0, fact = 1.0;
    for (int m = 0; m <= 8; m += 2) {
      if (m > 0) fact *= (m - 1) * m;
      acc += power_derivative(b, m, k) * 2.0 / ((m + 1.0) * (m + 2.0)) / fact;
    }
    return acc;
  }
  auto F2 = [b](double u) { return std::pow(std::abs(u), 2.0 - b) / ((1.0 - b) * (2.0 - b)); };
  return F2(k + 1.0) - 2.0 * F2(k) + F2(k - 1.0);
}

// ∫_0^1 (k + t)^{-b} (1 - t) dt: the half hat hanging over the box edge.
double half_hat_weight_1d(double b, int k) {
  if (k >= 32) {
    double acc = 0.0, fact = 1.0;
    for (int m = 0; m <= 8; ++m) {
      if (m > 0) fact *= m;
      acc += power_derivative(b, m, k) / ((m + 1.0) * (m + 2.0)) / fact;
    }
    return acc;
  }
  const double F1 = std::pow(k, 1.0 - b) / (1.0 - b);
  auto F2 = [b](double u) { return std::pow(u, 2.0 - b) / ((1.0 - b) * (2.0 - b)); };
  return F2(k + 1.0) - F2(k) - F1;
}

// ∫ |P - t|^{-b} (1-|t_1|)(1-|t_2|) dt over [-1,1]², P = (k, l).
double hat_weight_2d(double b, int k, int l) {
  const Rule& g16 = gauss_legendre(16);
  auto hat = [](double t1, double t2) { return (1.0 - std::abs(t1)) * (1.0 - std::abs(t2)); };
  double acc = 0.0;
  for (int qi = -1; qi <= 0; ++qi) {
    for (int qj = -1; qj <= 0; ++qj) {
      // Cell [qi, qi+1] × [qj, qj+1].
      const bool vertex = (k == qi || k == qi + 1) && (l == qj || l == qj + 1);
      if (!vertex) {
        for (std::size_t i = 0; i < g16.x.size(); ++i) {
          const double t1 = qi + 0.5 * (g16.x[i] + 1.0);
          for (std::size_t j = 0; j < g16.x.size(); ++j) {
            const double t2 = qj + 0.5 * (g16.x[j] + 1.0);
            const double r = std::hypot(k - t1, l - t2);
            acc += 0.25 * g16.w[i] * g16.w[j] * std::pow(r, -b) * hat(t1, t2);
          }
        }
        continue;
      }
      // Two triangles sharing the singular vertex P, each mapped by
      // t = P + u[(V1 - P) + v(V2 - V1)]; u is graded toward 0.
      const double ox = k == qi ? qi + 1 : qi;  // the other x-coordinate of the cell
      const double oy = l == qj ? qj + 1 : qj;
      const double V[3][2] = {{ox, static_cast<double>(l)}, {ox, oy}, {static_cast<double>(k), oy}};
      for (int tri = 0; tri < 2; ++tri) {
        const double* V1 = V[tri];
        const double* V2 = V[tri + 1];
        const double e1[2] = {V1[0] - k, V1[1] - l};
        const double e2[2] = {V2[0] - V1[0], V2[1] - V1[1]};
        const double jac = std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
        for (int panel = 0; panel < 48; ++panel) {
          const double u0 = std::ldexp(1.0, -panel - 1), u1 = std::ldexp(1.0, -panel);
          for (std::size_t i = 0; i < g16.x.size(); ++i) {
            const double u = u0 + 0.5 * (u1 - u0) * (g16.x[i] + 1.0);
            const double wu = 0.5 * (u1 - u0) * g16.w[i];
            for (std::size_t j = 0; j < g16.x.size(); ++j) {
              const double v = 0.5 * (g16.x[j] + 1.0);
              const double d0 = e1[0] + v * e2[0], d1 = e1[1] + v * e2[1];
              const double t1 = k + u * d0, t2 = l + u * d1;
              const double r = u * std::hypot(d0, d1);
              acc += wu * 0.5 * g16.w[j] * jac * u * std::pow(r, -b) * hat(t1, t2);
            }
          }
        }
      }
    }
  }
  return acc;
}

double far_weight_2d(double b, double k, double l) {
  const double r = std::hypot(k, l);
  return std::pow(r, -b) + b * b * std::pow(r, -b - 2.0) / 12.0;
}

// ∫_0^∞ (d + t)^{-b} (X / (X + t))^a dt
double tail_integral(double b, double a, double X, double d) {
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [=](double t) { return std::pow(d + t, -b) * std::pow(X / (X + t), a); };
  return es.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

std::shared_ptr<const RieszFree::Data> build(const Grid& g, double s) {
  auto data = std::make_shared<RieszFree::Data>();
  const int n = g.n, N = g.N;
  const double b = n - 2.0 * s, a = n + 2.0 * s;
  const double h = g.dx();
  const double cJ = riesz_constant(n, s);
  const double scale = cJ * std::pow(h, n - b);
  data->padded = Grid{n, 2.0 * g.L, 2 * N};
  Field kernel(data->padded);
  const int M = 2 * N;
  if (n == 1) {
    for (int k = 0; k <= N; ++k) {
      const double w = scale * hat_weight_1d(b, k);
      kernel[k] = w;
      if (k > 0 && k < N) kernel[M - k] = w;
    }
    // Outer half hats and power-law tails beyond the two end nodes.
    RieszFree::Data::Rank1 left, right;
    left.a.resize(N);
    right.a.resize(N);
    const double XL = g.L, XR = g.L - h;
    for (int i = 0; i < N; ++i) {
      left.a[i] = cJ * tail_integral(b, a, XL, i * h) - scale * half_hat_weight_1d(b, i);
      right.a[i] = cJ * tail_integral(b, a, XR, (N - 1 - i) * h) - scale * half_hat_weight_1d(b, N - 1 - i);
    }
    left.b = {{0, 1.0}};
    right.b = {{static_cast<std::size_t>(N - 1), 1.0}};
    data->closure = {std::move(left), std::move(right)};
  } else if (n == 2) {
    constexpr int kNear = 32;
    std::vector<double> near((kNear + 1) * (kNear + 1));
    for (int k = 0; k <= kNear; ++k) {
      for (int l = k; l <= kNear; ++l) {
        near[k * (kNear + 1) + l] = near[l * (kNear + 1) + k] = hat_weight_2d(b, k, l);
      }
    }
    for (int i = 0; i < M; ++i) {
      const int k = i <= N ? i : M - i;
      for (int j = 0; j < M; ++j) {
        const int l = j <= N ? j : M - j;
        const double w = (k <= kNear && l <= kNear) ? near[k * (kNear + 1) + l] : far_weight_2d(b, k, l);
        kernel[static_cast<std::size_t>(i) * M + j] = scale * w;
      }
    }
    // Isotropic tail c|y|^{-(n+2s)} outside the box, c averaged over the boundary ring.
    ChebyshevCube tail(2, -g.L, g.L, 16);
    std::vector<double> tv(tail.points());
    const double zero[2] = {0.0, 0.0};
    double x[2];
    for (int p = 0; p < tail.points(); ++p) {
      tail.node(p, x);
      double acc = 0.0;
      visit_cube_exterior(2, zero, g.L, 8, [&](const double* y, double w) {
        const double r2 = (x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]);
        acc += w * std::pow(r2, -0.5 * b) * std::pow(y[0] * y[0] + y[1] * y[1], -0.5 * a);
      });
      tv[p] = cJ * acc;
    }
    tail.set_values(std::move(tv));
    RieszFree::Data::Rank1 ring;
    ring.a.resize(g.size());
    std::vector<std::size_t> idx;
    for (std::size_t p = 0; p < g.size(); ++p) {
      g.coords(p, x);
      ring.a[p] = tail(x);
      const int i0 = static_cast<int>(p / N), i1 = static_cast<int>(p % N);
      if (i0 == 0 || i0 == N - 1 || i1 == 0 || i1 == N - 1) idx.push_back(p);
    }
    for (std::size_t p : idx) {
      g.coords(p, x);
      ring.b.emplace_back(p, std::pow(x[0] * x[0] + x[1] * x[1], 0.5 * a) / idx.size());
    }
    data->closure = {std::move(ring)};
  } else {
    config_error("DimensionUnsupported", "the whole-space Riesz potential is implemented for n = 1, 2");
  }
  data->kernel_hat = forward(kernel);
  return data;
}

std::shared_ptr<const RieszFree::Data> cached(const Grid& g, double s) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, int, double>, std::shared_ptr<const RieszFree::Data>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{g.n, g.L, g.N, s}];
  if (!slot) slot = build(g, s);
  return slot;
}

Field toeplitz_apply(const RieszFree::Data& d, const Grid& g, const Field& f) {
  const int N = g.N, M = 2 * N;
  Field pad(d.padded);
  if (g.n == 1) {
    for (int i = 0; i < N; ++i) pad[i] = f[i];
  } else {
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) pad[static_cast<std::size_t>(i) * M + j] = f[static_cast<std::size_t>(i) * N + j];
    }
  }
  auto spec = forward(pad);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= d.kernel_hat[k];
  Field conv = inverse(d.padded, std::move(spec));
  Field out(g);
  if (g.n == 1) {
    for (int i = 0; i < N; ++i) out[i] = conv[i];
  } else {
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) out[static_cast<std::size_t>(i) * N + j] = conv[static_cast<std::size_t>(i) * M + j];
    }
  }
  return out;
}

}  // namespace

RieszFree::RieszFree(const Grid& g, double s) : grid_(g), s_(s), data_(cached(g, s)) {}

Field RieszFree::apply(const Field& f) const {
  if (f.grid != grid_) computation_error("GridMismatch", "field grid differs from the operator grid");
  Field out = toeplitz_apply(*data_, grid_, f);
  for (const auto& r : data_->closure) {
    double c = 0.0;
    for (const auto& [i, w] : r.b) c += w * f[i];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * r.a[i];
  }
  return out;
}

Field RieszFree::apply_transpose(const Field& f) const {
  if (f.grid != grid_) computation_error("GridMismatch", "field grid differs from the operator grid");
  Field out = toeplitz_apply(*data_, grid_, f);
  for (const auto& r : data_->closure) {
    double c = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) c += r.a[i] * f[i];
    for (const auto& [i, w] : r.b) out[i] += c * w;
  }
  return out;
}

Field riesz_free(const Field& f, double s) { return RieszFree(f.grid, s).apply(f); }

}  // namespace fracbubble
