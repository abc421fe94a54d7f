#include "fracbubble/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>

#include "fracbubble/bubble.hpp"
#include "fracbubble/checks.hpp"
#include "fracbubble/errors.hpp"
#include "fracbubble/landscape.hpp"
#include "fracbubble/parallel.hpp"
#include "fracbubble/quadrature.hpp"
#include "fracbubble/reduction.hpp"
#include "fracbubble/regularity.hpp"

namespace fracbubble {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Json params_json(const ProblemParams& p) {
  return {{"n", p.n}, {"s", p.s}, {"q", p.q}, {"eps", p.eps}, {"p", p.p}, {"crit_exp", p.crit_exp},
          {"dual_exp", p.dual_exp}, {"gamma_s", p.gamma_s}, {"supercritical_q", p.supercritical_q}};
}

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(format_number(v)); }

Json critical_json(const CriticalPoint& c) {
  return {{"kind", to_string(c.kind)}, {"mu", c.mu},           {"xi", c.xi},
          {"gamma", c.gamma},          {"grad_norm", c.grad_norm}, {"iterations", c.iterations}};
}

Json slab_json(const SlabSpec& s) {
  Json j{{"mu0", s.mu0}, {"xi0", s.xi0}, {"B", s.B},   {"mu1", s.mu1},
         {"mu2", s.mu2}, {"R", s.R},     {"boundary_max", s.boundary_max}, {"has_min", s.has_min}};
  if (s.has_min) {
    j["mu0_min"] = s.mu0_min;
    j["xi0_min"] = s.xi0_min;
    j["B_min"] = s.B_min;
    j["boundary_min"] = s.boundary_min;
  }
  return j;
}

// Lattice of `count` points per axis on [-w, w]^n, first axis slowest.
std::vector<std::vector<double>> lattice(int n, double w, int count) {
  int total = 1;
  for (int i = 0; i < n; ++i) total *= count;
  std::vector<std::vector<double>> pts(total, std::vector<double>(n));
  for (int f = 0; f < total; ++f) {
    int r = f;
    for (int d = n - 1; d >= 0; --d) {
      const int k = r % count;
      r /= count;
      pts[f][d] = count == 1 ? 0.0 : -w + 2.0 * w * k / (count - 1);
    }
  }
  return pts;
}

void finish(const RunConfig& c, OutputDir& out, const Json& checks, const Json& times) {
  out.write_manifest(config_digest(c), checks, times);
}

}  // namespace

int resolve_threads(int flag_threads) {
  if (const char* env = std::getenv("FRACBUBBLE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    config_error("ThreadsInvalid", "FRACBUBBLE_THREADS must be a positive integer");
  }
  if (flag_threads < 1) config_error("ThreadsInvalid", "--threads must be at least 1");
  return flag_threads;
}

int cmd_landscape(const RunConfig& c, OutputDir& out, int threads) {
  const auto t0 = Clock::now();
  const int n = c.params.n;
  Landscape land(c.params, c.weight);
  const LandscapeSweep& sw = c.landscape;
  const int xc = sw.xi_count > 0 ? sw.xi_count : (n == 1 ? 33 : (n == 2 ? 17 : 9));
  const auto xis = lattice(n, sw.xi_half_width, xc);
  std::vector<double> mus(sw.mu_count);
  for (int k = 0; k < sw.mu_count; ++k) {
    mus[k] = sw.mu_min * std::pow(sw.mu_max / sw.mu_min, static_cast<double>(k) / (sw.mu_count - 1));
  }
  std::vector<std::vector<double>> rows(mus.size() * xis.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const double mu = mus[i / xis.size()];
    const auto& xi = xis[i % xis.size()];
    const GammaSample g = land.eval(mu, xi);
    std::vector<double> r{mu};
    r.insert(r.end(), xi.begin(), xi.end());
    r.push_back(g.gamma);
    for (int d = 0; d <= n; ++d) r.push_back(g.grad[d]);
    rows[i] = std::move(r);
  });
  std::vector<std::string> header{"mu"};
  for (int d = 1; d <= n; ++d) header.push_back("xi_" + std::to_string(d));
  header.push_back("gamma");
  header.push_back("dgamma_dmu");
  for (int d = 1; d <= n; ++d) header.push_back("dgamma_dxi_" + std::to_string(d));
  out.write_csv("landscape.csv", header, rows);
  const double t_scan = seconds_since(t0);

  const SlabSpec slab = build_slab(land);
  out.write_json("slab.json", slab_json(slab));
  const auto cps = find_critical_points(land, slab);
  Json list = Json::array();
  for (const auto& cp : cps) list.push_back(critical_json(cp));
  out.write_json("critical_points.json", {{"params", params_json(c.params)}, {"critical_points", list}});
  finish(c, out, Json::array(), {{"scan", t_scan}, {"total", seconds_since(t0)}});
  return kExitOk;
}

int cmd_asymptotics(const RunConfig& c, OutputDir& out, int threads) {
  const auto t0 = Clock::now();
  const ProblemParams& pp = c.params;
  const int n = pp.n;
  Landscape land(pp, c.weight);
  const auto xi0 = most_positive_center(c.weight);
  const double tol = 0.02;
  Json records = Json::array();
  Json checks = Json::array();
  auto add = [&](Json r) {
    checks.push_back({{"name", r["check"]}, {"pass", r["pass"]}});
    records.push_back(std::move(r));
  };

  // Uniform decay as μ → 0: sup over a ξ-lattice covering the support and beyond.
  {
    const int last = pp.supercritical_q ? c.windows.mu_last : c.windows.mu_last_sublinear;
    const int first_fit = pp.supercritical_q ? c.windows.mu_first : c.windows.mu_first_sublinear;
    auto pts = lattice(n, c.weight.radius() + 2.0, n == 1 ? 81 : (n == 2 ? 21 : 9));
    for (const Bump& b : c.weight.bumps()) pts.push_back(b.c);
    const int js = last - c.small_mu_first + 1;
    std::vector<double> sup(js, 0.0);
    std::vector<std::vector<double>> vals(js, std::vector<double>(pts.size()));
    parallel_for(static_cast<std::size_t>(js) * pts.size(), threads, [&](std::size_t i) {
      const int j = static_cast<int>(i / pts.size());
      vals[j][i % pts.size()] = std::abs(land.value(std::ldexp(1.0, -(c.small_mu_first + j)), pts[i % pts.size()]));
    });
    bool monotone = true;
    for (int j = 0; j < js; ++j) {
      for (double v : vals[j]) sup[j] = std::max(sup[j], v);
      if (j > 0 && !(sup[j] < sup[j - 1])) monotone = false;
    }
    std::vector<double> lx, ly;
    for (int j = first_fit; j <= last; ++j) {
      lx.push_back(std::log(std::ldexp(1.0, -j)));
      ly.push_back(std::log(sup[j - c.small_mu_first]));
    }
    const LineFit lf = fit_line(lx, ly);
    const double expected = std::min(n - pp.gamma_s, pp.gamma_s);
    add({{"check", "uniform_small_mu_decay"},
         {"params", params_json(pp)},
         {"fitted_slope", lf.slope},
         {"expected_slope", expected},
         {"tolerance", tol},
         {"r2", lf.r2},
         {"monotone", monotone},
         {"pass", monotone && lf.r2 >= 0.999 && lf.slope >= expected * (1.0 - tol)}});
  }

  const auto [mu_fit, xi_fit] = tail_rates(land, c.windows);
  for (const auto& [name, f] : {std::pair<const char*, const RateFit*>{"small_mu_rate", &mu_fit},
                                std::pair<const char*, const RateFit*>{"far_center_rate", &xi_fit}}) {
    add({{"check", name},
         {"params", params_json(pp)},
         {"fitted_slope", f->slope},
         {"expected_slope", f->expected},
         {"tolerance", tol},
         {"r2", f->r2},
         {"pass", std::abs(f->slope - f->expected) <= tol * std::abs(f->expected) && f->r2 >= 0.999}});
  }

  const SmallMuLimit lim = small_mu_limit(land, xi0, c.small_mu_first, c.small_mu_last);
  if (lim.supercritical) {
    const double rel = std::abs(lim.A_hat - lim.A_pred) / std::abs(lim.A_pred);
    const double raw = lim.ratios.back() / lim.A_pred - 1.0;
    add({{"check", "small_mu_limit"},
         {"params", params_json(pp)},
         {"A_hat", lim.A_hat},
         {"A_predicted", lim.A_pred},
         {"relative_error", rel},
         {"raw_ratio_deviation", raw},
         {"correction_exponents", lim.exponents},
         {"tolerance", 1e-3},
         {"pass", rel <= 1e-3}});
  } else {
    add({{"check", "small_mu_divergence"},
         {"params", params_json(pp)},
         {"ratios", lim.ratios},
         {"monotone", lim.monotone},
         {"growth", lim.growth},
         {"status", lim.consistent_with_infinity ? "consistent with +infinity" : "not established"},
         {"pass", lim.consistent_with_infinity}});
  }
  out.write_json("asymptotics.json", {{"records", records}});
  finish(c, out, checks, {{"total", seconds_since(t0)}});
  return kExitOk;
}

int cmd_solve(const RunConfig& c, OutputDir& out, int threads) {
  const auto t0 = Clock::now();
  const ProblemParams& pp = c.params;
  if (pp.n > 2) config_error("DimensionUnsupported", "solve runs in dimensions 1 and 2 only");
  Landscape land(pp, c.weight);
  const SlabSpec slab = build_slab(land);
  const auto cps = find_critical_points(land, slab);
  std::vector<CriticalKind> kinds{CriticalKind::Max};
  if (slab.has_min) kinds.push_back(CriticalKind::Min);
  std::vector<CriticalPoint> picked;
  for (CriticalKind k : kinds) picked.push_back(pick_critical(cps, k));
  const double t_land = seconds_since(t0);

  // One job per (family, ε), plus the ε = 0 floor per family.
  std::vector<double> eps_all{0.0};
  eps_all.insert(eps_all.end(), c.eps_list.begin(), c.eps_list.end());
  const std::size_t ne = eps_all.size();
  std::vector<SolutionReport> reps(picked.size() * ne);
  parallel_for(reps.size(), threads, [&](std::size_t i) {
    ProblemParams p = pp;
    p.eps = eps_all[i % ne];
    reps[i] = construct_solution(picked[i / ne], p, c.weight, c.grid);
  });

  Json families = Json::array();
  for (std::size_t f = 0; f < picked.size(); ++f) {
    const std::string fam = to_string(picked[f].kind);
    const double floor = reps[f * ne].residual_sup;
    Json sols = Json::array();
    for (std::size_t e = 1; e < ne; ++e) {
      const SolutionReport& r = reps[f * ne + e];
      const std::string stem = "solutions/" + fam + "_eps" + std::to_string(e - 1);
      out.write_field(stem, r.u);
      std::vector<std::vector<double>> trace;
      for (const NewtonStep& s : r.state.trace) {
        std::vector<double> row{static_cast<double>(s.iter), s.residual, s.sup_w};
        row.insert(row.end(), s.alpha.begin(), s.alpha.end());
        trace.push_back(std::move(row));
      }
      std::vector<std::string> header{"iter", "residual", "sup_w"};
      for (int i = 1; i <= pp.n + 1; ++i) header.push_back("alpha_" + std::to_string(i));
      out.write_csv(stem + "_newton.csv", header, trace);
      sols.push_back({{"eps", r.eps},
                      {"snapshot", stem + ".bin"},
                      {"newton_trace", stem + "_newton.csv"},
                      {"newton_iters", r.state.newton_iters},
                      {"H_residual", r.state.residual_norm},
                      {"alpha", r.state.alpha},
                      {"w_norm", r.w_norm},
                      {"residual_sup", r.residual_sup},
                      {"residual_dual", r.residual_dual},
                      {"residual_over_floor", floor > 0.0 ? num(r.residual_sup / floor) : Json(nullptr)},
                      {"min_trusted", r.min_trusted},
                      {"positive", r.min_trusted > 0.0},
                      {"energy_error", r.energy_error},
                      {"max_orthogonality", r.state.max_orth_abs}});
    }
    families.push_back({{"kind", fam},
                        {"mu", picked[f].mu},
                        {"xi", picked[f].xi},
                        {"gamma", picked[f].gamma},
                        {"floor_residual_sup", floor},
                        {"solutions", sols}});
  }
  Json summary{{"params", params_json(pp)}, {"slab", slab_json(slab)}, {"families", families}};
  if (picked.size() == 2) {
    double d = std::abs(picked[0].mu - picked[1].mu);
    for (int i = 0; i < pp.n; ++i) d = std::max(d, std::abs(picked[0].xi[i] - picked[1].xi[i]));
    summary["distinct_concentration"] = d > 1e-6;
  }
  out.write_json("solve.json", summary);
  finish(c, out, Json::array(), {{"landscape", t_land}, {"total", seconds_since(t0)}});
  return kExitOk;
}

int cmd_regularity(const RunConfig& c, OutputDir& out, int threads) {
  const auto t0 = Clock::now();
  const ProblemParams& pp = c.params;
  const GrowthSpec spec = derive_growth(pp, c.growth);
  const std::vector<double> origin(pp.n, 0.0);
  const BubblePoint b = make_bubble(pp, 1.0, origin);
  const Field z = sample(c.grid, [&](const double* x) { return bubble_eval(b, x); });

  std::vector<IterationTrace> traces(c.deltas.size());
  parallel_for(traces.size(), threads, [&](std::size_t i) { traces[i] = run_iteration(z, spec, c.deltas[i]); });

  Json jterms = Json::array();
  for (const DerivedTerm& t : spec.terms) {
    jterms.push_back({{"gamma", t.gamma}, {"m", num(t.m)},   {"m_under", t.m_under}, {"Theta", t.Theta},
                      {"a", t.a},         {"a_lower", t.a_lower}, {"xi", t.xi_h},     {"tau", t.tau}});
  }
  Json jtr = Json::array();
  Json checks = Json::array();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const IterationTrace& tr = traces[i];
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < tr.U.size(); ++k) rows.push_back({double(k), tr.A[k], tr.U[k], tr.measure[k]});
    const std::string file = "regularity/trace_delta" + std::to_string(i) + ".csv";
    out.write_csv(file, {"k", "A_k", "U_k", "measure"}, rows);
    Json audit;
    try {
      const AuditResult a = recursion_audit(tr, spec);
      audit = {{"mode", a.mode},          {"C", a.C},       {"max_residual", a.max_residual},
               {"nonzero_levels", a.nonzero_levels}, {"pass", a.pass}};
    } catch (const Error& e) {
      audit = {{"mode", "error"}, {"code", e.code()}, {"pass", false}};
    }
    checks.push_back({{"name", "audit_delta" + std::to_string(i)}, {"pass", audit["pass"]}});
    jtr.push_back({{"delta", tr.delta},
                   {"trace", file},
                   {"U_last", tr.U.back()},
                   {"converged", tr.converged},
                   {"decreasing_w", tr.decreasing_w},
                   {"subset_chain", tr.subset_chain},
                   {"phi_bound", tr.phi_bound},
                   {"step0", tr.step0},
                   {"fitted_C", tr.fitted_C},
                   {"theta_hat", num(tr.theta_hat)},
                   {"audit", audit}});
  }
  // Constructed sequence U_{k+1} = 2^k U_k^ϑ as a calibration of the audit.
  std::vector<double> U{1e-4};
  while (U.size() < 41) {
    const double k = static_cast<double>(U.size() - 1);
    const double nxt = std::exp(k * std::log(2.0) + spec.theta * std::log(U.back()));
    U.push_back(nxt > 0.0 && std::isfinite(nxt) ? nxt : 0.0);
  }
  const AuditResult syn = recursion_audit(U, spec.theta);
  checks.push_back({{"name", "synthetic_audit"}, {"pass", syn.pass && std::abs(syn.C - 2.0) <= 1e-6}});
  out.write_json("regularity.json", {{"params", params_json(pp)},
                                     {"spec", {{"terms", jterms}, {"tau", spec.tau}, {"theta", spec.theta}}},
                                     {"field", "bubble mu=1 xi=0"},
                                     {"traces", jtr},
                                     {"synthetic", {{"C", syn.C}, {"max_residual", syn.max_residual}, {"pass", syn.pass}}}});
  finish(c, out, checks, {{"total", seconds_since(t0)}});
  return kExitOk;
}

int cmd_verify(const RunConfig& c, OutputDir& out, int threads, std::string* report) {
  const auto t0 = Clock::now();
  const auto results = run_checks(c, threads);
  Json list = Json::array();
  Json checks = Json::array();
  bool all = true;
  for (const CheckResult& r : results) {
    list.push_back({{"name", r.name},
                    {"pass", r.pass},
                    {"value", num(r.value)},
                    {"threshold", num(r.threshold)},
                    {"detail", r.detail}});
    checks.push_back({{"name", r.name}, {"pass", r.pass}});
    all = all && r.pass;
  }
  const Json rep{{"config_sha256", config_digest(c)}, {"all_pass", all}, {"checks", list}};
  out.write_json("verify.json", rep);
  if (report) *report = rep.dump(2);
  finish(c, out, checks, {{"total", seconds_since(t0)}});
  return all ? kExitOk : kExitVerifyFailed;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return e.kind() == ErrorKind::Config ? kExitConfig : kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace fracbubble
