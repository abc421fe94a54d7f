#include <algorithm>
#include <cmath>
#include <limits>

#include "fracbubble/errors.hpp"
#include "fracbubble/landscape.hpp"

namespace fracbubble {

std::string to_string(CriticalKind k) { return k == CriticalKind::Max ? "max" : "min"; }

namespace {

struct Node {
  double mu;
  std::vector<double> xi;
};

double xi_norm(const std::vector<double>& xi) {
  double s = 0.0;
  for (double v : xi) s += v * v;
  return std::sqrt(s);
}

bool inside(const SlabSpec& S, double mu, const std::vector<double>& xi) {
  return mu > S.mu1 && mu < S.mu2 && xi_norm(xi) < S.R;
}

double grad_norm(const GammaSample& g, int n) {
  double s = 0.0;
  for (int i = 0; i <= n; ++i) s += g.grad[i] * g.grad[i];
  return std::sqrt(s);
}

// Barzilai–Borwein ascent (sign = +1) or descent (sign = -1) with a safeguarded
// Armijo test. Returns false if the iterate leaves the slab or stalls.
bool refine(const GammaFn& gamma, int n, const SlabSpec& S, double sign, const CriticalSearch& opts,
            CriticalPoint& cp) {
  std::vector<double> x(n + 1);
  x[0] = cp.mu;
  for (int i = 0; i < n; ++i) x[1 + i] = cp.xi[i];
  auto eval = [&](const std::vector<double>& y) {
    return gamma(y[0], std::span<const double>(y.data() + 1, n));
  };
  GammaSample g = eval(x);
  std::vector<double> prev_x, prev_g;
  double step = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    const double gn = grad_norm(g, n);
    cp.iterations = it;
    if (gn <= opts.grad_tol) {
      cp.mu = x[0];
      for (int i = 0; i < n; ++i) cp.xi[i] = x[1 + i];
      cp.gamma = g.gamma;
      cp.grad_norm = gn;
      return true;
    }
    std::vector<double> d(n + 1);
    for (int i = 0; i <= n; ++i) d[i] = sign * g.grad[i];
    if (prev_x.empty()) {
      step = 0.05 * x[0] / gn;
    } else {
      double ss = 0.0, sy = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double si = x[i] - prev_x[i];
        const double yi = -(sign * g.grad[i] - sign * prev_g[i]);
        ss += si * si;
        sy += si * yi;
      }
      step = sy > 0.0 ? ss / sy : 0.05 * x[0] / gn;
    }
    // Keep μ positive and the first move modest.
    while (x[0] + step * d[0] <= 0.5 * x[0]) step *= 0.5;
    std::vector<double> y(n + 1);
    GammaSample gy;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (int i = 0; i <= n; ++i) y[i] = x[i] + step * d[i];
      gy = eval(y);
      const double gain = sign * (gy.gamma - g.gamma);
      // Roundoff-level losses are tolerated so the last digits of the gradient can settle.
      if (gain >= 1e-4 * step * gn * gn || gain >= -1e-13 * std::abs(g.gamma)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return false;
    prev_x = x;
    prev_g.assign(g.grad.begin(), g.grad.begin() + n + 1);
    x = y;
    g = gy;
    std::vector<double> xi(x.begin() + 1, x.end());
    if (!inside(S, x[0], xi)) return false;
  }
  return false;
}

bool same_point(const CriticalPoint& a, const CriticalPoint& b) {
  if (a.kind != b.kind) return false;
  if (std::abs(std::log(a.mu / b.mu)) > 1e-6) return false;
  for (std::size_t i = 0; i < a.xi.size(); ++i) {
    if (std::abs(a.xi[i] - b.xi[i]) > 1e-6 * (1.0 + a.mu)) return false;
  }
  return true;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const GammaFn& gamma, int n, const SlabSpec& S, bool want_min,
                                                const CriticalSearch& opts) {
  const int nm = opts.mu_samples > 0 ? opts.mu_samples : (n == 1 ? 48 : (n == 2 ? 24 : 12));
  const int nx = opts.xi_samples > 0 ? opts.xi_samples : (n == 1 ? 241 : (n == 2 ? 21 : 9));
  // Scan strictly inside the slab: log-spaced μ, a lattice in the ξ-box masked to |ξ| < R.
  std::vector<double> mus(nm);
  for (int k = 0; k < nm; ++k) mus[k] = S.mu1 * std::pow(S.mu2 / S.mu1, (k + 0.5) / nm);
  std::vector<double> axis(nx);
  for (int k = 0; k < nx; ++k) axis[k] = -S.R + 2.0 * S.R * (k + 0.5) / nx;
  int nxi = 1;
  for (int i = 0; i < n; ++i) nxi *= nx;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> val(static_cast<std::size_t>(nm) * nxi, nan);
  auto xi_at = [&](int flat) {
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i) {
      xi[i] = axis[flat % nx];
      flat /= nx;
    }
    return xi;
  };
  for (int a = 0; a < nm; ++a) {
    for (int f = 0; f < nxi; ++f) {
      const auto xi = xi_at(f);
      if (xi_norm(xi) >= S.R) continue;
      val[static_cast<std::size_t>(a) * nxi + f] = gamma(mus[a], xi).gamma;
    }
  }
  // Discrete local extrema over the (μ, ξ) lattice, 3^{n+1} neighbourhood.
  std::vector<std::pair<double, std::size_t>> seeds_max, seeds_min;
  for (int a = 0; a < nm; ++a) {
    for (int f = 0; f < nxi; ++f) {
      const double v = val[static_cast<std::size_t>(a) * nxi + f];
      if (std::isnan(v)) continue;
      bool is_max = true, is_min = true;
      std::vector<int> idx(n);
      int r = f;
      for (int i = 0; i < n; ++i) {
        idx[i] = r % nx;
        r /= nx;
      }
      int nb_total = 1;
      for (int i = 0; i <= n; ++i) nb_total *= 3;
      for (int nb = 0; nb < nb_total; ++nb) {
        int c = nb;
        const int da = c % 3 - 1;
        c /= 3;
        const int a2 = a + da;
        if (a2 < 0 || a2 >= nm) continue;
        int f2 = 0, mul = 1;
        bool ok = true;
        for (int i = 0; i < n; ++i) {
          const int k2 = idx[i] + c % 3 - 1;
          c /= 3;
          if (k2 < 0 || k2 >= nx) ok = false;
          f2 += k2 * mul;
          mul *= nx;
        }
        if (!ok || (a2 == a && f2 == f)) continue;
        const double w = val[static_cast<std::size_t>(a2) * nxi + f2];
        if (std::isnan(w)) continue;
        if (w > v) is_max = false;
        if (w < v) is_min = false;
      }
      const std::size_t flat = static_cast<std::size_t>(a) * nxi + f;
      if (is_max) seeds_max.emplace_back(v, flat);
      if (is_min && want_min) seeds_min.emplace_back(v, flat);
    }
  }
  std::sort(seeds_max.begin(), seeds_max.end(), [](auto& l, auto& r) { return l.first > r.first || (l.first == r.first && l.second < r.second); });
  std::sort(seeds_min.begin(), seeds_min.end(), [](auto& l, auto& r) { return l.first < r.first || (l.first == r.first && l.second < r.second); });
  const std::size_t keep = 8;
  if (seeds_max.size() > keep) seeds_max.resize(keep);
  if (seeds_min.size() > keep) seeds_min.resize(keep);

  std::vector<CriticalPoint> found;
  auto run = [&](const std::vector<std::pair<double, std::size_t>>& seeds, CriticalKind kind) {
    for (const auto& [v, flat] : seeds) {
      CriticalPoint cp;
      cp.kind = kind;
      cp.mu = mus[flat / nxi];
      cp.xi = xi_at(static_cast<int>(flat % nxi));
      if (!refine(gamma, n, S, kind == CriticalKind::Max ? 1.0 : -1.0, opts, cp)) continue;
      bool dup = false;
      for (const auto& o : found) dup = dup || same_point(o, cp);
      if (!dup) found.push_back(cp);
    }
  };
  run(seeds_max, CriticalKind::Max);
  if (want_min) run(seeds_min, CriticalKind::Min);
  if (found.empty()) {
    computation_error("NoInteriorCriticalPoint", "every refined candidate left the slab");
  }
  // Best first within each kind; equal values go to the smaller μ, then lexicographic ξ.
  std::stable_sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.kind != b.kind) return a.kind == CriticalKind::Max;
    const double sa = a.kind == CriticalKind::Max ? a.gamma : -a.gamma;
    const double sb = b.kind == CriticalKind::Max ? b.gamma : -b.gamma;
    if (sa != sb) return sa > sb;
    if (a.mu != b.mu) return a.mu < b.mu;
    return lex_less(a.xi, b.xi);
  });
  return found;
}

std::vector<CriticalPoint> find_critical_points(const Landscape& land, const SlabSpec& slab,
                                                const CriticalSearch& opts) {
  GammaFn fn = [&land](double mu, std::span<const double> xi) { return land.eval(mu, xi); };
  return find_critical_points(fn, land.dim(), slab, slab.has_min, opts);
}

}  // namespace fracbubble
