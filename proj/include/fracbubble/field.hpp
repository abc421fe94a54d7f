#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "fracbubble/model.hpp"

namespace fracbubble {

// Periodic box [-L, L)^n with N points per axis; the last axis varies fastest.
struct Grid {
  int n = 1;
  double L = 40.0;
  int N = 4096;

  double dx() const { return 2.0 * L / N; }
  double cell_volume() const;
  std::size_t size() const;
  // Coordinates of flat index `idx`.
  void coords(std::size_t idx, double* x) const;
  // Flat index of the multi-index (i_0, ..., i_{n-1}).
  std::size_t index(const int* i) const;
  bool operator==(const Grid& o) const { return n == o.n && L == o.L && N == o.N; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
  // True for samples with |x|∞ ≤ L/2: the outer quarter on each side is excluded
  // from sup-norm comparisons.
  bool trusted(const double* x) const;
};

Grid make_grid(int n, double L, int N);

struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  Field(const Grid& g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

Field sample(const Grid& g, const std::function<double(const double*)>& f);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& a);
// a += c·b
void axpy(double c, const Field& b, Field& a);

double integrate(const Field& u);
// ∫ u v by the periodic trapezoid rule
double dot(const Field& u, const Field& v);

struct Norms {
  double sup = 0.0;
  double hs = 0.0;               // [u]_{Ḣ^s} from hs_inner
  std::vector<double> lp;        // one entry per requested exponent
};
Norms norms(const Field& u, double s, const std::vector<double>& exponents = {});
double lp_norm(const Field& u, double r);
double sup_norm(const Field& u);
// sup over the trusted region only
double sup_trusted(const Field& u);

// Spectral operators with symbols |k|^{2s} and |k|^{-2s} (zero mode sent to 0).
Field frac_laplacian(const Field& u, double s);
Field riesz_potential(const Field& u, double s);
double hs_inner(const Field& u, const Field& v, double s);
// Value of the trigonometric interpolant of (-Δ)^s u at an arbitrary point.
double frac_laplacian_at(const Field& u, double s, const double* x);

// Export: CSV rows "x_1,...,x_n,value" and raw little-endian float64 with a JSON
// sidecar {n, L, N}. Returns the written paths.
std::string export_csv(const Field& u, const std::string& path);
std::vector<std::string> export_raw(const Field& u, const std::string& stem);

}  // namespace fracbubble
