// Acceptance harness: one PASS/FAIL line per criterion. Usage: acceptance <cli> <run dir>
#include <algorithm>
#include <chrono>
#include <random>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <sys/wait.h>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracbubble/bubble.hpp"
#include "fracbubble/config.hpp"
#include "fracbubble/energy.hpp"
#include "fracbubble/exterior.hpp"
#include "fracbubble/landscape.hpp"
#include "fracbubble/quadrature.hpp"
#include "fracbubble/reduction.hpp"
#include "fracbubble/regularity.hpp"
#include "fracbubble/riesz.hpp"

namespace fs = std::filesystem;
using namespace fracbubble;

namespace {

std::string cli_path;
fs::path run_dir;
int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = "\"" + cli_path + "\" " + args + " > \"" + stdout_file.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

RunConfig config_from(const std::string& text) { return parse_config(text); }

double bubble_residual(const ProblemParams& pp, const Grid& g) {
  const std::vector<double> xi(pp.n, 0.0);
  const BubblePoint b = make_bubble(pp, 1.0, xi);
  const Field lap = frac_laplacian_profile(g, pp.s, bubble_profile(b));
  const Field zp = sample(g, [&](const double* x) { return std::pow(bubble_eval(b, x), pp.p); });
  return sup_trusted(lap - zp) / sup_norm(zp);
}

void criterion1() {
  const RunConfig c = default_config();
  const double r = bubble_residual(c.params, c.grid);
  const double r_coarse = bubble_residual(c.params, make_grid(1, c.grid.L, c.grid.N / 2));
  const double ratio = r_coarse / r;
  report(1, r <= 1e-3 && ratio >= 4.0,
         "residual " + fmt(r) + " at N=" + std::to_string(c.grid.N) + ", reduction on halving dx " + fmt(ratio));
}

void criterion2() {
  bool pass = true;
  std::string detail;
  for (const char* text : {R"({"n":1,"s":0.2,"q":1.5,"weight":{"bumps":[{"c":[0],"r":1,"a":1,"k":2}]}})",
                           R"({"n":2,"s":0.4,"q":1.5,"weight":{"bumps":[{"c":[0,0],"r":1,"a":1,"k":2}]}})"}) {
    const RunConfig c = config_from(text);
    const ProblemParams& pp = c.params;
    const std::vector<double> xi(pp.n, 0.0);
    const BubblePoint b = make_bubble(pp, 1.0, xi);
    double worst = 0.0;
    for (int j = 1; j <= pp.n + 1; ++j) {
      const Field lap = frac_laplacian_profile(c.grid, pp.s, tangent_profile(b, j));
      const Field rhs = sample(c.grid, [&](const double* x) {
        return pp.p * std::pow(bubble_eval(b, x), pp.p - 1.0) * tangent_eval(b, j, x);
      });
      worst = std::max(worst, sup_trusted(lap - rhs) / sup_norm(rhs));
    }
    const GramReport gr = gram_constants(pp, b);
    const double iso = pp.n == 2 ? std::abs(gr.lambda[1] - gr.lambda[0]) / gr.lambda[0] : 0.0;
    pass = pass && worst <= 1e-3 && gr.max_offdiag_ratio <= 1e-6 && iso <= 1e-6;
    detail += "n=" + std::to_string(pp.n) + ": tangent " + fmt(worst) + ", offdiag " + fmt(gr.max_offdiag_ratio) +
              ", isotropy " + fmt(iso) + "; ";
  }
  report(2, pass, detail);
}

void criterion3() {
  bool pass = true;
  std::string detail;
  for (double a : {1.0, -1.0}) {
    const RunConfig c = config_from(R"({"n":1,"s":0.2,"q":1.5,"weight":{"bumps":[{"c":[0],"r":1,"a":)" +
                                    std::to_string(a) + R"(,"k":2},{"c":[5],"r":1,"a":0.5,"k":2}]}})");
    const Landscape land(c.params, c.weight);
    const std::vector<double> xi0{0.0};
    const SmallMuLimit lim = small_mu_limit(land, xi0, 4, 12);
    const double rel = std::abs(lim.A_hat - lim.A_pred) / std::abs(lim.A_pred);
    const double raw = lim.ratios.back() / lim.A_pred - 1.0;
    const bool sign_ok = (lim.A_hat > 0) == (a > 0) && (lim.A_pred > 0) == (a > 0);
    pass = pass && rel <= 1e-3 && sign_ok;
    detail += "h(ξ₀)=" + fmt(a) + ": rel " + fmt(rel) + " (raw single point " + fmt(raw) + "), sign " +
              (sign_ok ? "ok" : "wrong") + "; ";
  }
  report(3, pass, detail);
}

void criterion4() {
  const RunConfig sup = default_config();
  const RunConfig sub = config_from(R"({"n":1,"s":0.2,"q":0.5,"weight":{"bumps":[{"c":[0],"r":1,"a":1,"k":2}]}})");
  bool pass = true;
  std::string detail;
  for (const RunConfig* c : {&sup, &sub}) {
    const Landscape land(c->params, c->weight);
    const auto [mu, xi] = tail_rates(land, c->windows);
    const double emu = std::abs(mu.slope - mu.expected) / std::abs(mu.expected);
    const double exi = std::abs(xi.slope - xi.expected) / std::abs(xi.expected);
    pass = pass && emu <= 0.02 && exi <= 0.02 && mu.r2 >= 0.999 && xi.r2 >= 0.999;
    detail += "q=" + fmt(c->params.q) + ": μ-slope " + fmt(mu.slope) + " (" + fmt(mu.expected) + "), ξ-slope " +
              fmt(xi.slope) + " (" + fmt(xi.expected) + "); ";
  }
  report(4, pass, detail);
}

void criterion5() {
  const RunConfig c = config_from(R"({"n":1,"s":0.2,"q":0.5,"weight":{"bumps":[{"c":[0],"r":1,"a":1,"k":2}]}})");
  const Landscape land(c.params, c.weight);
  const std::vector<double> xi0{0.0};
  const SmallMuLimit lim = small_mu_limit(land, xi0, 4, 12);
  report(5, lim.monotone && lim.growth >= 2.0,
         std::string("monotone ") + (lim.monotone ? "yes" : "no") + ", terminal/initial " + fmt(lim.growth));
}

// Shared ε-sweep at the maximum of Γ for the default configuration.
struct Sweep {
  std::vector<double> eps, w_norm, B_norm, energy_err;
  double max_orth = 0.0;
};

Sweep eps_sweep() {
  const RunConfig c = default_config();
  const Landscape land(c.params, c.weight);
  const std::vector<CriticalPoint> cps = find_critical_points(land, build_slab(land));
  const CriticalPoint& cp = pick_critical(cps, CriticalKind::Max);
  Sweep sw;
  for (double e : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
    ProblemParams pp = c.params;
    pp.eps = e;
    const SolutionReport rep = construct_solution(cp, pp, c.weight, c.grid);
    const BubblePoint b = make_bubble(pp, cp.mu, cp.xi);
    const MultiplierMatrix mm = multiplier_matrix(b, pp, c.weight, c.grid);
    sw.eps.push_back(e);
    sw.w_norm.push_back(rep.w_norm);
    sw.B_norm.push_back(mm.norm_B);
    sw.energy_err.push_back(rep.energy_error);
    sw.max_orth = std::max(sw.max_orth, rep.state.max_orth_ratio);
  }
  return sw;
}

std::vector<double> logs(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(std::log(x));
  return out;
}

void criterion6_7(const Sweep& sw) {
  const LineFit fw = fit_line(logs(sw.eps), logs(sw.w_norm));
  bool mono = true;
  for (std::size_t i = 1; i < sw.B_norm.size(); ++i) mono = mono && sw.B_norm[i - 1] < sw.B_norm[i];
  report(6, std::abs(fw.slope - 1.0) <= 0.05 && sw.max_orth <= 1e-10 && mono,
         "slope " + fmt(fw.slope) + ", max orthogonality " + fmt(sw.max_orth) + ", ‖B‖ from " +
             fmt(sw.B_norm.back()) + " down to " + fmt(sw.B_norm.front()) + (mono ? " monotone" : " NOT monotone"));
  const LineFit fe = fit_line(logs(sw.eps), logs(sw.energy_err));
  report(7, fe.slope >= 1.5, "energy error slope " + fmt(fe.slope));
}

void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string text =
      R"({"n":1,"s":0.2,"q":1.5,"weight":{"bumps":[{"c":[-3],"r":1,"a":1,"k":2},{"c":[3],"r":1,"a":-1,"k":2}]},"solve":{"eps":[0.001,0.01]}})";
  const RunConfig c = config_from(text);
  const Landscape land(c.params, c.weight);
  const std::vector<CriticalPoint> cps = find_critical_points(land, build_slab(land));
  int maxes = 0, mins = 0;
  for (const CriticalPoint& cp : cps) (cp.kind == CriticalKind::Max ? maxes : mins)++;
  double sep = 0.0;
  if (maxes == 1 && mins == 1) {
    sep = std::abs(pick_critical(cps, CriticalKind::Max).xi[0] - pick_critical(cps, CriticalKind::Min).xi[0]);
  }
  const fs::path dir = run_dir / "two_bump";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "config.json") << text;
  }
  const int rc = run_cli("solve --config \"" + (dir / "config.json").string() + "\" --out \"" + (dir / "out").string() +
                             "\"",
                         dir / "stdout.txt");
  bool families_ok = false;
  if (rc == 0) {
    const auto j = nlohmann::json::parse(slurp(dir / "out" / "solve.json"));
    int positive = 0;
    for (const auto& f : j["families"]) {
      bool all = !f["solutions"].empty();
      for (const auto& s : f["solutions"]) all = all && s["positive"].get<bool>();
      positive += all;
    }
    families_ok = positive == 2 && j["distinct_concentration"].get<bool>();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(8, maxes == 1 && mins == 1 && sep >= 4.0 && families_ok && secs <= 600.0,
         std::to_string(maxes) + " max, " + std::to_string(mins) + " min, |ξ₁*-ξ₂*| = " + fmt(sep) +
             ", solve exit " + std::to_string(rc) + (families_ok ? ", two positive families" : ", families missing") +
             ", " + fmt(secs) + " s");
}

void criterion9() {
  const RunConfig c = default_config();
  const GrowthSpec spec = derive_growth(c.params, {GrowthTerm{}});
  const std::vector<double> xi(1, 0.0);
  const BubblePoint b = make_bubble(c.params, 1.0, xi);
  const Field z = sample(c.grid, [&](const double* x) { return bubble_eval(b, x); });
  const IterationTrace tr = run_iteration(z, spec, 0.1);
  const AuditResult audit = recursion_audit(tr, spec);
  std::vector<double> U{1e-4};
  while (U.size() < 41) {
    const double k = static_cast<double>(U.size() - 1);
    const double nxt = std::exp(k * std::log(2.0) + spec.theta * std::log(U.back()));
    U.push_back(nxt > 0.0 && std::isfinite(nxt) ? nxt : 0.0);
  }
  const AuditResult syn = recursion_audit(U, spec.theta);
  const bool pass = tr.U.back() <= 1e-12 && audit.pass && std::abs(spec.theta - 5.0 / 3.0) <= 1e-12 &&
                    std::abs(syn.C - 2.0) <= 1e-6;
  report(9, pass, "U_40 " + fmt(tr.U.back()) + ", ϑ " + fmt(spec.theta) + ", audit " + audit.mode +
                      (audit.pass ? " pass" : " fail") + ", synthetic C " + fmt(syn.C));
}

void criterion10() {
  const RunConfig c = default_config();
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> ctr(-c.grid.L / 4, c.grid.L / 4), rad(0.5, 3.0), amp(-1.0, 1.0);
  std::uniform_int_distribution<int> cnt(1, 4), kk(1, 3);
  const RieszFree J(c.grid, c.params.s);
  std::vector<double> hls, sob;
  for (int t = 0; t < 50; ++t) {
    std::vector<Bump> bumps;
    const int m = cnt(rng);
    for (int i = 0; i < m; ++i) bumps.push_back(Bump{{ctr(rng)}, rad(rng), amp(rng), kk(rng)});
    bumps[0].a = std::abs(bumps[0].a) + 0.1;
    const Field f = sample_weight(c.grid, CompactWeight(1, bumps));
    hls.push_back(lp_norm(J.apply(f), c.params.crit_exp) / lp_norm(f, c.params.dual_exp));
    sob.push_back(lp_norm(f, c.params.crit_exp) / std::sqrt(hs_inner(f, f, c.params.s)));
  }
  auto stats = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return std::pair{v.back(), 0.5 * (v[24] + v[25])};
  };
  const auto [hmax, hmed] = stats(hls);
  const auto [smax, smed] = stats(sob);
  report(10, std::isfinite(hmax) && std::isfinite(smax) && hmax <= 2 * hmed && smax <= 2 * smed,
         "HLS max " + fmt(hmax) + " median " + fmt(hmed) + "; Sobolev max " + fmt(smax) + " median " + fmt(smed));
}

void criterion11() {
  const fs::path a = run_dir / "verify_a", b = run_dir / "verify_b";
  const int ra = run_cli("verify --out \"" + a.string() + "\"", run_dir / "verify_a.txt");
  const int rb = run_cli("verify --out \"" + b.string() + "\"", run_dir / "verify_b.txt");
  const bool same_report = slurp(a / "verify.json") == slurp(b / "verify.json") && !slurp(a / "verify.json").empty();
  const bool same_stdout = slurp(run_dir / "verify_a.txt") == slurp(run_dir / "verify_b.txt");
  report(11, ra == 0 && rb == 0 && same_report && same_stdout,
         "exit codes " + std::to_string(ra) + "/" + std::to_string(rb) + ", reports " +
             (same_report ? "identical" : "differ") + ", stdout " + (same_stdout ? "identical" : "differs"));
}

template <class F>
void guarded(int id, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <cli> <run dir>\n");
    return 2;
  }
  cli_path = argv[1];
  run_dir = argv[2];
  fs::remove_all(run_dir);
  fs::create_directories(run_dir);

  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  try {
    criterion6_7(eps_sweep());
  } catch (const std::exception& e) {
    report(6, false, std::string("threw: ") + e.what());
    report(7, false, "sweep failed");
  }
  guarded(8, criterion8);
  guarded(9, criterion9);
  guarded(10, criterion10);
  guarded(11, criterion11);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
