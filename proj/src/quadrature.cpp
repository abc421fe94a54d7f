#include "fracbubble/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace {
constexpr int kMaxDimQuad = 3;
}

namespace fracbubble {

namespace {

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& ax = G::abscissa();
  const auto& wt = G::weights();
  Rule r;
  for (std::size_t i = ax.size(); i-- > 0;) {
    if (ax[i] == 0.0) continue;
    r.x.push_back(-ax[i]);
    r.w.push_back(wt[i]);
  }
  for (std::size_t i = 0; i < ax.size(); ++i) {
    r.x.push_back(ax[i]);
    r.w.push_back(wt[i]);
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int order) {
  static const Rule r4 = make_rule<4>();
  static const Rule r8 = make_rule<8>();
  static const Rule r12 = make_rule<12>();
  static const Rule r16 = make_rule<16>();
  static const Rule r20 = make_rule<20>();
  static const Rule r24 = make_rule<24>();
  static const Rule r32 = make_rule<32>();
  static const Rule r48 = make_rule<48>();
  static const Rule r64 = make_rule<64>();
  switch (order) {
    case 4: return r4;
    case 8: return r8;
    case 12: return r12;
    case 16: return r16;
    case 20: return r20;
    case 24: return r24;
    case 32: return r32;
    case 48: return r48;
    case 64: return r64;
    default: throw std::invalid_argument("unsupported Gauss-Legendre order");
  }
}

std::vector<double> graded_breakpoints(double a, double b, double center, double scale) {
  std::vector<double> bp{a};
  if (center > a && center < b) {
    std::vector<double> left;
    for (double d = scale / 8.0; center - d > a; d *= 2.0) left.push_back(center - d);
    for (auto it = left.rbegin(); it != left.rend(); ++it) bp.push_back(*it);
    bp.push_back(center);
    for (double d = scale / 8.0; center + d < b; d *= 2.0) bp.push_back(center + d);
  } else {
    // Peak outside [a,b]: the integrand varies on the scale max(scale, distance),
    // so panels grow geometrically away from the nearer end.
    const bool from_left = center <= a;
    const double dmin = from_left ? a - center : center - b;
    const double s = std::max(scale, dmin) / 4.0;
    const double len = b - a;
    std::vector<double> offs;
    for (double d = s; d < len; d *= 2.0) offs.push_back(d);
    if (from_left) {
      for (double d : offs) bp.push_back(a + d);
    } else {
      for (auto it = offs.rbegin(); it != offs.rend(); ++it) bp.push_back(b - *it);
    }
  }
  bp.push_back(b);
  return bp;
}

std::vector<double> halve_panels(const std::vector<double>& bp) {
  std::vector<double> out;
  out.reserve(2 * bp.size());
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    out.push_back(bp[i]);
    out.push_back(0.5 * (bp[i] + bp[i + 1]));
  }
  out.push_back(bp.back());
  return out;
}

void composite_nodes(const std::vector<double>& bp, const Rule& rule, std::vector<double>& x,
                     std::vector<double>& w) {
  x.clear();
  w.clear();
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double h = 0.5 * (bp[i + 1] - bp[i]);
    const double m = 0.5 * (bp[i + 1] + bp[i]);
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      x.push_back(m + h * rule.x[j]);
      w.push_back(h * rule.w[j]);
    }
  }
}

ChebyshevAxis::ChebyshevAxis(double a, double b, int count) : a_(a), b_(b) {
  nodes_.resize(count);
  bw_.resize(count);
  for (int j = 0; j < count; ++j) {
    const double th = (2.0 * j + 1.0) * std::numbers::pi / (2.0 * count);
    nodes_[j] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(th);
    bw_[j] = ((j % 2) ? -1.0 : 1.0) * std::sin(th);
  }
}

void ChebyshevAxis::basis(double x, std::vector<double>& out) const {
  const int m = size();
  out.assign(m, 0.0);
  for (int j = 0; j < m; ++j) {
    if (x == nodes_[j]) {
      out[j] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < m; ++j) {
    out[j] = bw_[j] / (x - nodes_[j]);
    denom += out[j];
  }
  for (int j = 0; j < m; ++j) out[j] /= denom;
}

ChebyshevCube::ChebyshevCube(int n, double a, double b, int count) : n_(n), axis_(a, b, count) {}

int ChebyshevCube::points() const {
  int p = 1;
  for (int i = 0; i < n_; ++i) p *= axis_.size();
  return p;
}

void ChebyshevCube::node(int index, double* x) const {
  const int m = axis_.size();
  for (int i = 0; i < n_; ++i) {
    x[i] = axis_.nodes()[index % m];
    index /= m;
  }
}

double ChebyshevCube::operator()(const double* x) const {
  const int m = axis_.size();
  thread_local std::vector<double> b0, b1, b2;
  axis_.basis(x[0], b0);
  if (n_ == 1) {
    double v = 0.0;
    for (int i = 0; i < m; ++i) v += b0[i] * values_[i];
    return v;
  }
  axis_.basis(x[1], b1);
  if (n_ == 2) {
    double v = 0.0;
    for (int j = 0; j < m; ++j) {
      double row = 0.0;
      for (int i = 0; i < m; ++i) row += b0[i] * values_[i + m * j];
      v += b1[j] * row;
    }
    return v;
  }
  axis_.basis(x[2], b2);
  double v = 0.0;
  for (int k = 0; k < m; ++k) {
    double plane = 0.0;
    for (int j = 0; j < m; ++j) {
      double row = 0.0;
      for (int i = 0; i < m; ++i) row += b0[i] * values_[i + m * (j + m * k)];
      plane += b1[j] * row;
    }
    v += b2[k] * plane;
  }
  return v;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace fracbubble

namespace fracbubble {

void visit_cube(int n, const double* c, double R, const double* peak, double scale, int order,
                const NodeVisitor& visit) {
  const Rule& rule = gauss_legendre(order);
  std::vector<double> ax[kMaxDimQuad], aw[kMaxDimQuad];
  for (int i = 0; i < n; ++i) {
    auto bp = graded_breakpoints(c[i] - R, c[i] + R, peak[i], scale);
    composite_nodes(bp, rule, ax[i], aw[i]);
  }
  double x[kMaxDimQuad];
  if (n == 1) {
    for (std::size_t i = 0; i < ax[0].size(); ++i) {
      x[0] = ax[0][i];
      visit(x, aw[0][i]);
    }
  } else if (n == 2) {
    for (std::size_t j = 0; j < ax[1].size(); ++j) {
      x[1] = ax[1][j];
      for (std::size_t i = 0; i < ax[0].size(); ++i) {
        x[0] = ax[0][i];
        visit(x, aw[0][i] * aw[1][j]);
      }
    }
  } else {
    for (std::size_t k = 0; k < ax[2].size(); ++k) {
      x[2] = ax[2][k];
      for (std::size_t j = 0; j < ax[1].size(); ++j) {
        x[1] = ax[1][j];
        for (std::size_t i = 0; i < ax[0].size(); ++i) {
          x[0] = ax[0][i];
          visit(x, aw[0][i] * aw[1][j] * aw[2][k]);
        }
      }
    }
  }
}

void visit_cube_exterior(int n, const double* c, double R, int order, const NodeVisitor& visit,
                         int w_panels, int depth) {
  const Rule& rule = gauss_legendre(order);
  std::vector<double> vb{0.0};
  for (int j = depth; j >= 1; --j) vb.push_back(std::ldexp(1.0, -j));
  vb.push_back(1.0);
  std::vector<double> vx, vw;
  composite_nodes(vb, rule, vx, vw);
  std::vector<double> wx, ww;
  std::vector<double> wb(w_panels + 1);
  for (int i = 0; i <= w_panels; ++i) wb[i] = -1.0 + 2.0 * i / w_panels;
  composite_nodes(wb, rule, wx, ww);
  const std::size_t nw = wx.size();
  double y[kMaxDimQuad];
  for (int face = 0; face < n; ++face) {
    for (int sign = -1; sign <= 1; sign += 2) {
      for (std::size_t iv = 0; iv < vx.size(); ++iv) {
        const double v = vx[iv];
        const double rad = R / v;
        const double jac = std::pow(R, n) / std::pow(v, n + 1) * vw[iv];
        y[face] = c[face] + sign * rad;
        const int others = n - 1;
        std::size_t total = 1;
        for (int o = 0; o < others; ++o) total *= nw;
        for (std::size_t t = 0; t < total; ++t) {
          double wt = jac;
          std::size_t rem = t;
          for (int d = 0, o = 0; d < n; ++d) {
            if (d == face) continue;
            const std::size_t iw = rem % nw;
            rem /= nw;
            y[d] = c[d] + wx[iw] * rad;
            wt *= ww[iw];
            ++o;
          }
          visit(y, wt);
        }
      }
    }
  }
}

}  // namespace fracbubble
