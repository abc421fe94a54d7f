#include "fracbubble/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracbubble/energy.hpp"
#include "fracbubble/errors.hpp"
#include "fracbubble/krylov.hpp"

namespace fracbubble {

namespace {

double pos_pow(double u, double e) { return u > 0.0 ? std::pow(u, e) : 0.0; }

Eigen::Map<const Eigen::VectorXd> view(const Field& f) {
  return {f.values.data(), static_cast<Eigen::Index>(f.size())};
}

double vsup(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

BorderedOp::BorderedOp(const ProblemParams& params, const BubblePoint& b, const Grid& g)
    : params_(params), base_(b), grid_(g), J_(g, params.s) {
  if (b.n != g.n) config_error("DimensionMismatch", "bubble and grid dimensions differ");
  z_ = sample(g, [&](const double* x) { return bubble_eval(b, x); });
  const double dv = g.cell_volume();
  m_ = Field(g);
  for (std::size_t k = 0; k < g.size(); ++k) m_[k] = params.p * std::pow(z_[k], params.p - 1.0);
  for (int j = 1; j <= g.n + 1; ++j) {
    Field qj = sample(g, [&](const double* x) { return tangent_eval(b, j, x); });
    Field row(g);
    for (std::size_t k = 0; k < g.size(); ++k) row[k] = m_[k] * qj[k] * dv;
    col_scale_.push_back(1.0 / view(qj).norm());
    row_scale_.push_back(1.0 / view(row).norm());
    q_.push_back(std::move(qj));
    rows_.push_back(std::move(row));
  }
}

double BorderedOp::pair(const Field& v, int i) const { return view(v).dot(view(rows_[i])); }

Field BorderedOp::apply_T(const Field& v) const {
  Field mv(grid_);
  for (std::size_t k = 0; k < grid_.size(); ++k) mv[k] = m_[k] * v[k];
  Field out = J_.apply(mv);
  for (std::size_t k = 0; k < grid_.size(); ++k) out[k] = v[k] - out[k];
  return out;
}

Field BorderedOp::apply_T_transpose(const Field& v) const {
  Field jt = J_.apply_transpose(v);
  for (std::size_t k = 0; k < grid_.size(); ++k) jt[k] = v[k] - m_[k] * jt[k];
  return jt;
}

Eigen::VectorXd BorderedOp::apply(const Eigen::VectorXd& x) const {
  const std::size_t N = grid_.size();
  Field v(grid_, std::vector<double>(x.data(), x.data() + N));
  Field tv = apply_T(v);
  Eigen::VectorXd y(size());
  for (std::size_t k = 0; k < N; ++k) y(k) = tv[k];
  for (int i = 0; i < border(); ++i) {
    const double c = x(N + i) * col_scale_[i];
    y.head(N) -= c * view(q_[i]);
    y(N + i) = row_scale_[i] * pair(v, i);
  }
  return y;
}

Eigen::VectorXd BorderedOp::apply_transpose(const Eigen::VectorXd& x) const {
  const std::size_t N = grid_.size();
  Field r(grid_, std::vector<double>(x.data(), x.data() + N));
  Field tr = apply_T_transpose(r);
  Eigen::VectorXd y(size());
  for (std::size_t k = 0; k < N; ++k) y(k) = tr[k];
  for (int i = 0; i < border(); ++i) {
    y.head(N) += row_scale_[i] * x(N + i) * view(rows_[i]);
    y(N + i) = -col_scale_[i] * view(q_[i]).dot(x.head(N));
  }
  return y;
}

Eigen::VectorXd BorderedOp::pack_unknown(const Field& v, std::span<const double> beta) const {
  Eigen::VectorXd x(size());
  x.head(v.size()) = view(v);
  for (int i = 0; i < border(); ++i) x(v.size() + i) = beta[i] / col_scale_[i];
  return x;
}

void BorderedOp::unpack_unknown(const Eigen::VectorXd& x, Field& v, std::vector<double>& beta) const {
  const std::size_t N = grid_.size();
  v = Field(grid_, std::vector<double>(x.data(), x.data() + N));
  beta.resize(border());
  for (int i = 0; i < border(); ++i) beta[i] = x(N + i) * col_scale_[i];
}

Eigen::VectorXd BorderedOp::pack_image(const Field& f, std::span<const double> pairs) const {
  Eigen::VectorXd y(size());
  y.head(f.size()) = view(f);
  for (int i = 0; i < border(); ++i) y(f.size() + i) = pairs[i] * row_scale_[i];
  return y;
}

void BorderedOp::unpack_image(const Eigen::VectorXd& y, Field& f, std::vector<double>& pairs) const {
  const std::size_t N = grid_.size();
  f = Field(grid_, std::vector<double>(y.data(), y.data() + N));
  pairs.resize(border());
  for (int i = 0; i < border(); ++i) pairs[i] = y(N + i) / row_scale_[i];
}

BorderedSolution solve_bordered(const BorderedOp& op, const Field& rhs_v, std::span<const double> rhs_beta,
                                double rel_tol) {
  if (rhs_v.grid != op.grid()) computation_error("GridMismatch", "right-hand side on a different grid");
  const Eigen::VectorXd b = op.pack_image(rhs_v, rhs_beta);
  const LinearMap A = [&op](const Eigen::VectorXd& x) { return op.apply(x); };
  GmresResult r = gmres(A, b, Eigen::VectorXd::Zero(b.size()), rel_tol, 60, 1200);
  if (!r.converged) {
    computation_error("BorderedSolveStalled",
                      "GMRES stopped at relative residual " + std::to_string(r.rel_residual));
  }
  BorderedSolution out;
  op.unpack_unknown(r.x, out.v, out.beta);
  out.rel_residual = r.rel_residual;
  out.iterations = r.iterations;
  return out;
}

ConditionEstimate bordered_condition(const BorderedOp& op, int steps) {
  const LinearMap AtA = [&op](const Eigen::VectorXd& x) { return op.apply_transpose(op.apply(x)); };
  const Eigen::VectorXd ev = lanczos_eigenvalues(AtA, op.size(), steps, 7u);
  ConditionEstimate c;
  c.sigma_min = std::sqrt(std::max(ev(0), 0.0));
  c.sigma_max = std::sqrt(std::max(ev(ev.size() - 1), 0.0));
  c.cond = c.sigma_max / c.sigma_min;
  return c;
}

KernelCertificate kernel_certificate(const BorderedOp& op, int steps) {
  const Grid& g = op.grid();
  const LinearMap TtT = [&op, &g](const Eigen::VectorXd& x) {
    Field v(g, std::vector<double>(x.data(), x.data() + x.size()));
    const Field tv = op.apply_T_transpose(op.apply_T(v));
    return Eigen::VectorXd(view(tv));
  };
  const Eigen::VectorXd ev = lanczos_eigenvalues(TtT, static_cast<Eigen::Index>(g.size()), steps, 11u);
  KernelCertificate k;
  const int m = std::min<int>(g.n + 3, static_cast<int>(ev.size()));
  for (int i = 0; i < m; ++i) k.sigma.push_back(std::sqrt(std::max(ev(i), 0.0)));
  const int nb = op.border();
  k.gap = k.sigma[nb - 1] > 0.0 ? k.sigma[nb] / k.sigma[nb - 1] : std::numeric_limits<double>::infinity();
  return k;
}

double xs_norm(const Field& w, double s) { return std::sqrt(std::max(hs_inner(w, w, s), 0.0)) + vsup(w); }

ReductionState solve_auxiliary(const BubblePoint& b, const ProblemParams& params, const CompactWeight& h,
                               const Grid& g, const NewtonOptions& opts) {
  BorderedOp op(params, b, g);
  const Field hw = sample_weight(g, h);
  const Field& z = op.z();
  const int nb = op.border();
  const std::size_t N = g.size();
  const double eps = params.eps;

  double a = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < N; ++k) {
    if (hw[k] != 0.0) a = std::min(a, z[k]);
  }
  std::vector<double> qnorm(nb);
  for (int i = 0; i < nb; ++i) qnorm[i] = std::sqrt(op.lambda(i));

  ReductionState st;
  st.w = Field(g);
  st.alpha.assign(nb, 0.0);

  auto residual = [&](Field& H1, std::vector<double>& H2) {
    Field src(g);
    for (std::size_t k = 0; k < N; ++k) {
      const double u = z[k] + st.w[k];
      src[k] = pos_pow(u, params.p) - std::pow(z[k], params.p);
      if (hw[k] != 0.0 && eps != 0.0) src[k] += eps * hw[k] * pos_pow(u, params.q);
    }
    H1 = op.riesz().apply(src);
    for (std::size_t k = 0; k < N; ++k) H1[k] = st.w[k] - H1[k];
    for (int i = 0; i < nb; ++i) axpy(-st.alpha[i], op.q(i), H1);
    H2.resize(nb);
    double r = vsup(H1);
    for (int i = 0; i < nb; ++i) {
      H2[i] = op.pair(st.w, i);
      r = std::max(r, std::abs(H2[i]) / qnorm[i]);
    }
    return r;
  };
  auto record_orth = [&](const std::vector<double>& H2) {
    double wn = 0.0;
    for (std::size_t k = 0; k < N; ++k) wn += op.multiplier()[k] * st.w[k] * st.w[k];
    wn = std::sqrt(wn * g.cell_volume());
    for (int i = 0; i < nb; ++i) {
      st.max_orth_abs = std::max(st.max_orth_abs, std::abs(H2[i]));
      if (wn > 0.0) st.max_orth_ratio = std::max(st.max_orth_ratio, std::abs(H2[i]) / (wn * qnorm[i]));
    }
  };

  Field H1;
  std::vector<double> H2;
  const Field T_multiplier = op.multiplier();
  for (int it = 0;; ++it) {
    st.residual_norm = residual(H1, H2);
    record_orth(H2);
    st.trace.push_back({it, st.residual_norm, vsup(st.w), st.alpha});
    st.newton_iters = it;
    if (st.residual_norm <= opts.tol) break;
    if (it >= opts.max_iter) {
      computation_error("NewtonDiverged", "no convergence after " + std::to_string(opts.max_iter) +
                                              " Newton steps (residual " + std::to_string(st.residual_norm) +
                                              ")");
    }
    if (!std::isfinite(st.residual_norm)) computation_error("NewtonDiverged", "non-finite residual");
    // Jacobian multiplier A'_ε(z+w).
    Field m(g);
    for (std::size_t k = 0; k < N; ++k) {
      const double u = z[k] + st.w[k];
      m[k] = params.p * pos_pow(u, params.p - 1.0);
      if (hw[k] != 0.0 && eps != 0.0 && u > 0.0) m[k] += eps * hw[k] * params.q * std::pow(u, params.q - 1.0);
    }
    op.set_multiplier(std::move(m));
    std::vector<double> rhs_b(nb);
    for (int i = 0; i < nb; ++i) rhs_b[i] = -H2[i];
    BorderedSolution d = solve_bordered(op, (-1.0) * H1, rhs_b, opts.gmres_tol);
    op.set_multiplier(T_multiplier);
    axpy(1.0, d.v, st.w);
    for (int i = 0; i < nb; ++i) st.alpha[i] += d.beta[i];
    if (params.q < 1.0) {
      for (std::size_t k = 0; k < N; ++k) {
        if (hw[k] != 0.0 && z[k] + st.w[k] <= 0.5 * a) {
          computation_error("PositivityLost", "z + w fell below a/2 on the support of h");
        }
      }
    }
  }
  return st;
}

MultiplierMatrix multiplier_matrix(const BubblePoint& b, const ProblemParams& params, const CompactWeight& h,
                                   const Grid& g) {
  const int n = g.n;
  BorderedOp op(params, b, g);
  MultiplierMatrix M;
  M.B = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) M.lambda.push_back(op.lambda(i));
  if (params.eps != 0.0) {
    ProblemParams base = params;
    auto solve_at = [&](int j, double delta) {
      double mu = b.mu;
      std::array<double, 3> xi = b.xi;
      if (j < n) xi[j] += delta;
      else mu += delta;
      const BubblePoint bp = make_bubble(base, mu, std::span<const double>(xi.data(), n));
      return solve_auxiliary(bp, base, h, g).w;
    };
    const double delta = 1e-4 * std::max(b.mu, 1.0);
    for (int j = 0; j <= n; ++j) {
      const Field wp = solve_at(j, delta), wm = solve_at(j, -delta);
      Field dw = (1.0 / (2.0 * delta)) * (wp - wm);
      for (int i = 0; i <= n; ++i) M.B(i, j) = op.pair(dw, i);
    }
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n + 1, n + 1);
  M.det_lambda = 1.0;
  for (int i = 0; i <= n; ++i) {
    L(i, i) = M.lambda[i];
    M.det_lambda *= M.lambda[i];
  }
  M.det = (L + M.B).determinant();
  M.norm_B = M.B.norm();
  return M;
}

double epsilon_one(const BubblePoint& b, const ProblemParams& params, const CompactWeight& h, const Grid& g,
                   double eps_hi, int steps) {
  auto ok = [&](double eps) {
    ProblemParams p = params;
    p.eps = eps;
    try {
      const MultiplierMatrix M = multiplier_matrix(b, p, h, g);
      return M.det >= 0.5 * M.det_lambda;
    } catch (const Error&) {
      return false;
    }
  };
  if (ok(eps_hi)) return eps_hi;
  // Bisection in log ε between a passing lower end and the failing upper end.
  double lo = eps_hi * 1e-6, hi = eps_hi;
  if (!ok(lo)) return 0.0;
  for (int k = 0; k < steps; ++k) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

const CriticalPoint& pick_critical(const std::vector<CriticalPoint>& cps, CriticalKind kind) {
  for (const CriticalPoint& c : cps) {
    if (c.kind == kind) return c;
  }
  computation_error("NotRequestedKind", "no critical point of kind " + to_string(kind));
}

SolutionReport construct_solution(const CriticalPoint& cp, const ProblemParams& params, const CompactWeight& h,
                                  const Grid& g, const NewtonOptions& opts) {
  SolutionReport rep;
  rep.point = cp;
  rep.eps = params.eps;
  const BubblePoint b = make_bubble(params, cp.mu, cp.xi);
  rep.state = solve_auxiliary(b, params, h, g, opts);
  const Field z = sample(g, [&](const double* x) { return bubble_eval(b, x); });
  rep.u = z + rep.state.w;
  rep.w_norm = xs_norm(rep.state.w, params.s);

  // J-form residual r = u - J A_ε(u); (-Δ)^s r is the equation residual.
  const Field hw = sample_weight(g, h);
  Field A(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    A[k] = pos_pow(rep.u[k], params.p);
    if (hw[k] != 0.0) A[k] += params.eps * hw[k] * pos_pow(rep.u[k], params.q);
  }
  Field r = rep.u - riesz_free(A, params.s);
  rep.residual_sup = sup_trusted(r) / vsup(z);
  const Field lr = frac_laplacian(r, params.s);
  double acc = 0.0, mn = std::numeric_limits<double>::infinity();
  std::vector<double> x(g.n);
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.coords(k, x.data());
    if (!g.trusted(x.data())) continue;
    acc += std::pow(std::abs(lr[k]), params.dual_exp);
    mn = std::min(mn, rep.u[k]);
  }
  rep.residual_dual = std::pow(acc * g.cell_volume(), 1.0 / params.dual_exp);
  rep.min_trusted = mn;

  EnergyAnchor anchor;
  anchor.z = z;
  anchor.lap_z = Field(g);
  for (std::size_t k = 0; k < g.size(); ++k) anchor.lap_z[k] = std::pow(z[k], params.p);
  anchor.f0 = bubble_energy(params);
  anchor.G = cp.gamma;
  const EnergyReport e = energy_near(anchor, rep.state.w, params, h);
  rep.energy_error = std::abs(e.feps - bubble_energy(params) + params.eps * cp.gamma);
  return rep;
}

}  // namespace fracbubble
