#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fracbubble {

// Gauss–Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Supported orders: 4, 8, 12, 16, 20, 24, 32, 48, 64.
const Rule& gauss_legendre(int order);

// Breakpoints a = t0 < t1 < ... = b refined geometrically around `center`,
// at distances scale·2^j, so that a peak of width `scale` is resolved.
std::vector<double> graded_breakpoints(double a, double b, double center, double scale);

// Every panel split in two.
std::vector<double> halve_panels(const std::vector<double>& bp);

// Composite Gauss–Legendre nodes and weights over consecutive breakpoints.
void composite_nodes(const std::vector<double>& bp, const Rule& rule, std::vector<double>& x,
                     std::vector<double>& w);

// Chebyshev points of the first kind on [a, b] with barycentric interpolation.
class ChebyshevAxis {
 public:
  ChebyshevAxis() = default;
  ChebyshevAxis(double a, double b, int count);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  // Barycentric basis weights ℓ_j(x), summing to one.
  void basis(double x, std::vector<double>& out) const;

 private:
  double a_ = -1.0, b_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> bw_;
};

// Tensor-product Chebyshev interpolant on a cube [a,b]^n, values stored with the
// first axis fastest.
class ChebyshevCube {
 public:
  ChebyshevCube() = default;
  ChebyshevCube(int n, double a, double b, int count);

  int dim() const { return n_; }
  int points() const;
  // Coordinates of tensor node `index`.
  void node(int index, double* x) const;
  void set_values(std::vector<double> v) { values_ = std::move(v); }
  const std::vector<double>& values() const { return values_; }
  const ChebyshevAxis& axis() const { return axis_; }
  double operator()(const double* x) const;

 private:
  int n_ = 1;
  ChebyshevAxis axis_;
  std::vector<double> values_;
};

// Least-squares line through (x_i, y_i): slope, intercept and r².
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace fracbubble

namespace fracbubble {

// Callback receiving a node and its weight; used by the tensor integrators below.
using NodeVisitor = std::function<void(const double* x, double w)>;

// Tensor composite Gauss–Legendre over [c-R, c+R]^n, graded around `peak` at `scale`.
void visit_cube(int n, const double* c, double R, const double* peak, double scale, int order,
                const NodeVisitor& visit);

// Nodes for ∫_{|y-c|∞ > R} f(y) dy. Each face is mapped by y_j = c_j ± R/v with the
// remaining coordinates c_k + w_k R/v, w ∈ (-1,1); v-panels are graded toward 0 so
// algebraic decay of the integrand is handled. `w_panels` splits each face coordinate;
// the v-panels are dyadic down to 2^-depth.
void visit_cube_exterior(int n, const double* c, double R, int order, const NodeVisitor& visit,
                         int w_panels = 4, int depth = 40);

}  // namespace fracbubble
