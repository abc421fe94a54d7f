#include "fracbubble/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>

#include "fracbubble/errors.hpp"

namespace fracbubble {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans are made once per (n, N) with FFTW_ESTIMATE so that the chosen algorithm,
// and hence every rounding, is the same from run to run.
const PlanPair& plans_for(int n, int N) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_pair(n, N);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int dims[3] = {N, N, N};
  std::size_t real_size = 1, cplx_size = 1;
  for (int d = 0; d < n; ++d) real_size *= N;
  for (int d = 0; d < n - 1; ++d) cplx_size *= N;
  cplx_size *= (N / 2 + 1);
  double* in = fftw_alloc_real(real_size);
  fftw_complex* out = fftw_alloc_complex(cplx_size);
  PlanPair pp;
  pp.fwd = fftw_plan_dft_r2c(n, dims, in, out, FFTW_ESTIMATE);
  pp.bwd = fftw_plan_dft_c2r(n, dims, out, in, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  return cache.emplace(key, pp).first->second;
}

std::size_t spectrum_size(const Grid& g) {
  std::size_t s = 1;
  for (int d = 0; d < g.n - 1; ++d) s *= g.N;
  return s * (g.N / 2 + 1);
}

}  // namespace

std::vector<std::complex<double>> forward(const Field& u) {
  const Grid& g = u.grid;
  const PlanPair& pp = plans_for(g.n, g.N);
  const std::size_t rs = g.size(), cs = spectrum_size(g);
  double* in = fftw_alloc_real(rs);
  fftw_complex* out = fftw_alloc_complex(cs);
  std::memcpy(in, u.values.data(), rs * sizeof(double));
  fftw_execute_dft_r2c(pp.fwd, in, out);
  std::vector<std::complex<double>> spec(cs);
  std::memcpy(static_cast<void*>(spec.data()), out, cs * sizeof(fftw_complex));
  fftw_free(in);
  fftw_free(out);
  return spec;
}

Field inverse(const Grid& g, std::vector<std::complex<double>> spec) {
  const PlanPair& pp = plans_for(g.n, g.N);
  const std::size_t rs = g.size(), cs = spectrum_size(g);
  if (spec.size() != cs) computation_error("GridMismatch", "spectrum size does not match grid");
  double* out = fftw_alloc_real(rs);
  fftw_complex* in = fftw_alloc_complex(cs);
  std::memcpy(in, spec.data(), cs * sizeof(fftw_complex));
  fftw_execute_dft_c2r(pp.bwd, in, out);
  Field u(g);
  const double scale = 1.0 / static_cast<double>(rs);
  for (std::size_t i = 0; i < rs; ++i) u[i] = out[i] * scale;
  fftw_free(in);
  fftw_free(out);
  return u;
}

void for_each_mode(const Grid& g, const std::function<void(double, double, std::size_t)>& f) {
  const int N = g.N, H = N / 2 + 1;
  const double k0 = std::numbers::pi / g.L;
  auto sgn = [N](int m) { return m < N / 2 ? m : m - N; };
  std::size_t idx = 0;
  if (g.n == 1) {
    for (int m = 0; m < H; ++m, ++idx) {
      const double kk = k0 * m;
      f(kk * kk, (m == 0 || m == N / 2) ? 1.0 : 2.0, idx);
    }
  } else if (g.n == 2) {
    for (int a = 0; a < N; ++a) {
      const double ka = k0 * sgn(a);
      for (int m = 0; m < H; ++m, ++idx) {
        const double kb = k0 * m;
        f(ka * ka + kb * kb, (m == 0 || m == N / 2) ? 1.0 : 2.0, idx);
      }
    }
  } else {
    for (int a = 0; a < N; ++a) {
      const double ka = k0 * sgn(a);
      for (int b = 0; b < N; ++b) {
        const double kb = k0 * sgn(b);
        for (int m = 0; m < H; ++m, ++idx) {
          const double kc = k0 * m;
          f(ka * ka + kb * kb + kc * kc, (m == 0 || m == N / 2) ? 1.0 : 2.0, idx);
        }
      }
    }
  }
}

Field apply_symbol(const Field& u, const std::function<double(double)>& sigma) {
  auto spec = forward(u);
  for_each_mode(u.grid, [&](double k2, double, std::size_t idx) { spec[idx] *= sigma(k2); });
  return inverse(u.grid, std::move(spec));
}

Field frac_laplacian(const Field& u, double s) {
  return apply_symbol(u, [s](double k2) { return k2 > 0.0 ? std::pow(k2, s) : 0.0; });
}

Field riesz_potential(const Field& u, double s) {
  return apply_symbol(u, [s](double k2) { return k2 > 0.0 ? std::pow(k2, -s) : 0.0; });
}

double hs_inner(const Field& u, const Field& v, double s) {
  if (u.grid != v.grid) computation_error("GridMismatch", "hs_inner on different grids");
  const auto a = forward(u);
  const auto b = forward(v);
  double acc = 0.0;
  for_each_mode(u.grid, [&](double k2, double mult, std::size_t idx) {
    if (k2 <= 0.0) return;
    const double re = a[idx].real() * b[idx].real() + a[idx].imag() * b[idx].imag();
    acc += mult * std::pow(k2, s) * re;
  });
  const double n_pts = static_cast<double>(u.grid.size());
  return acc * u.grid.cell_volume() / n_pts;
}

double frac_laplacian_at(const Field& u, double s, const double* x) {
  const Grid& g = u.grid;
  const auto spec = forward(u);
  const int N = g.N, H = N / 2 + 1;
  const double k0 = std::numbers::pi / g.L;
  auto sgn = [N](int m) { return m < N / 2 ? m : m - N; };
  double acc = 0.0;
  std::size_t idx = 0;
  int m[3] = {0, 0, 0};
  const std::size_t total = spec.size();
  for (idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    m[g.n - 1] = static_cast<int>(rem % H);
    rem /= H;
    for (int d = g.n - 2; d >= 0; --d) {
      m[d] = sgn(static_cast<int>(rem % N));
      rem /= N;
    }
    double k2 = 0.0, phase = 0.0;
    for (int d = 0; d < g.n; ++d) {
      const double kd = k0 * m[d];
      k2 += kd * kd;
      phase += kd * (x[d] + g.L);
    }
    if (k2 == 0.0) continue;
    const int last = m[g.n - 1];
    const double mult = (last == 0 || last == N / 2) ? 1.0 : 2.0;
    const std::complex<double> e(std::cos(phase), std::sin(phase));
    acc += mult * std::pow(k2, s) * (spec[idx] * e).real();
  }
  return acc / static_cast<double>(g.size());
}

}  // namespace fracbubble
