#include "fracbubble/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracbubble/errors.hpp"

namespace fracbubble {

namespace {

[[noreturn]] void violated(std::size_t i, const std::string& what) {
  std::ostringstream os;
  os << "term " << i << ": " << what;
  config_error("HypothesisViolated", os.str());
}

}  // namespace

GrowthSpec derive_growth(const ProblemParams& params, const std::vector<GrowthTerm>& raw) {
  if (raw.empty()) config_error("HypothesisViolated", "no growth terms");
  const double c = params.crit_exp;
  const double inf = std::numeric_limits<double>::infinity();
  GrowthSpec spec;
  spec.crit_exp = c;
  spec.tau = inf;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const GrowthTerm& t = raw[i];
    DerivedTerm d;
    d.gamma = t.gamma;
    d.m = t.m;
    if (!(t.gamma >= 0.0 && t.gamma < c - 1.0)) violated(i, "gamma must lie in [0, 2*_s - 1)");
    d.m_under = t.gamma <= 1.0 ? c / (c - 2.0) : c / (c - 1.0 - t.gamma);
    if (!(t.m > d.m_under)) violated(i, "m must exceed m_under");
    const double inv_m = std::isinf(t.m) ? 0.0 : 1.0 / t.m;
    d.Theta = inv_m + (2.0 - c + t.gamma) / c;
    const double cap = t.gamma > 1.0 ? 1.0 / t.gamma : 1.0;  // min{1, 1/γ}
    if (!(d.Theta < t.gamma / c * cap)) violated(i, "Theta < (gamma/2*_s) min{1, 1/gamma}");
    d.a_lower = t.gamma == 0.0 ? 0.0 : std::max(0.0, c / t.gamma * d.Theta);
    d.a = std::isnan(t.a) ? cap : t.a;
    if (!(d.a > d.a_lower && d.a <= cap)) violated(i, "a outside (max{0, 2*_s Theta/gamma}, min{1, 1/gamma}]");
    if (!(d.a >= 0.0 && d.a <= 1.0 && t.gamma * d.a <= 1.0)) violated(i, "a in [0,1] with gamma a <= 1");
    if (!(t.gamma * d.a / c > d.Theta)) violated(i, "gamma a / 2*_s > Theta");
    d.xi_h = 1.0 - (1.0 + t.gamma) / c - inv_m;
    if (!(d.xi_h > 0.0 && d.xi_h < 1.0)) violated(i, "xi in (0, 1)");
    d.tau = (1.0 + d.a * t.gamma) / c + d.xi_h;
    if (!(d.tau > 2.0 / c)) violated(i, "tau > 2/2*_s");
    spec.tau = std::min(spec.tau, d.tau);
    spec.terms.push_back(d);
  }
  spec.theta = c * spec.tau / 2.0;
  return spec;
}

IterationTrace run_iteration(const Field& u, const GrowthSpec& spec, double delta, int levels) {
  const double c = spec.crit_exp;
  const double norm = lp_norm(u, c);
  if (!(norm > 0.0)) computation_error("ZeroField", "run_iteration needs ‖u‖_{2*} > 0");
  const double dv = u.grid.cell_volume();
  IterationTrace tr;
  tr.delta = delta;
  std::vector<double> phi(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) phi[i] = delta * u[i] / norm;
  std::vector<double> prev;
  for (int k = 0; k <= levels; ++k) {
    const double Ak = 1.0 - std::ldexp(1.0, -k);
    std::vector<double> w(u.size());
    double U = 0.0, meas = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      w[i] = std::max(phi[i] - Ak, 0.0);
      if (w[i] > 0.0) {
        U += std::pow(w[i], c);
        meas += 1.0;
      }
    }
    if (k > 0) {
      const double thr = std::ldexp(1.0, -k);  // 2^{-((k-1)+1)}
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (w[i] > prev[i]) tr.decreasing_w = false;
        if (w[i] > 0.0) {
          if (!(prev[i] > thr)) tr.subset_chain = false;
          if (!(phi[i] > 0.0 && phi[i] < std::ldexp(1.0, k) * prev[i])) tr.phi_bound = false;
        }
      }
    }
    tr.A.push_back(Ak);
    tr.U.push_back(U * dv);
    tr.measure.push_back(meas * dv);
    prev = std::move(w);
  }
  const double U0 = tr.U[0];
  if (U0 > std::pow(delta, c) * (1.0 + 1e-12)) tr.step0 = false;
  for (double U : tr.U) {
    if (U > U0) tr.step0 = false;
  }
  tr.converged = tr.U.back() <= 1e-12;
  const double th = spec.theta;
  double logC = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 1; k + 1 < tr.U.size(); ++k) {
    if (tr.U[k] > 0.0 && tr.U[k + 1] > 0.0) {
      logC = std::max(logC, (std::log(tr.U[k + 1]) - th * std::log(tr.U[k])) / static_cast<double>(k));
      any = true;
    }
  }
  tr.fitted_C = any ? std::exp(logC) : 0.0;
  if (any) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < tr.U.size(); ++k) {
      if (tr.U[k] > 0.0 && tr.U[k + 1] > 0.0 && tr.U[k] < 1.0) {
        best = std::min(best, (std::log(tr.U[k + 1]) - static_cast<double>(k) * logC) / std::log(tr.U[k]));
      }
    }
    if (std::isfinite(best)) tr.theta_hat = best;
  }
  return tr;
}

AuditResult recursion_audit(std::span<const double> U, double theta) {
  AuditResult r;
  for (double v : U) r.nonzero_levels += v > 0.0 ? 1 : 0;
  for (std::size_t k = 0; k + 1 < U.size(); ++k) {
    if (U[k] > 0.0 && U[k + 1] == 0.0) r.terminated = true;
  }
  std::vector<std::pair<double, double>> pts;  // (k, log U_{k+1} - ϑ log U_k)
  for (std::size_t k = 0; k + 1 < U.size(); ++k) {
    if (U[k] > 0.0 && U[k + 1] > 0.0) {
      pts.emplace_back(static_cast<double>(k), std::log(U[k + 1]) - theta * std::log(U[k]));
    }
  }
  if (r.nonzero_levels >= 5) {
    double num = 0.0, den = 0.0;
    for (auto [k, y] : pts) {
      num += k * y;
      den += k * k;
    }
    const double logC = den > 0.0 ? num / den : 0.0;
    r.C = std::exp(logC);
    for (auto [k, y] : pts) r.max_residual = std::max(r.max_residual, std::abs(y - k * logC));
    r.mode = "fit";
    r.pass = r.max_residual <= 0.1;
    return r;
  }
  if (!r.terminated) {
    config_error("InsufficientLevels", "the trace has " + std::to_string(r.nonzero_levels) +
                                           " nonzero levels and did not terminate");
  }
  // Terminated early: verify the inequality on the pairs that exist.
  r.mode = "terminated";
  r.pass = true;
  double logC = -std::numeric_limits<double>::infinity();
  for (auto [k, y] : pts) {
    if (k == 0.0) {
      if (y > 0.0) r.pass = false;
    } else {
      logC = std::max(logC, y / k);
    }
  }
  r.C = std::isfinite(logC) ? std::exp(logC) : 0.0;
  return r;
}

AuditResult recursion_audit(const IterationTrace& trace, const GrowthSpec& spec) {
  return recursion_audit(trace.U, spec.theta);
}

}  // namespace fracbubble
