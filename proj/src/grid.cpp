#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "fracbubble/errors.hpp"
#include "fracbubble/field.hpp"

namespace fracbubble {

double Grid::cell_volume() const { return std::pow(dx(), n); }

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < n; ++i) s *= static_cast<std::size_t>(N);
  return s;
}

void Grid::coords(std::size_t idx, double* x) const {
  const double h = dx();
  for (int d = n - 1; d >= 0; --d) {
    x[d] = -L + h * static_cast<double>(idx % N);
    idx /= N;
  }
}

std::size_t Grid::index(const int* i) const {
  std::size_t idx = 0;
  for (int d = 0; d < n; ++d) idx = idx * N + static_cast<std::size_t>(i[d]);
  return idx;
}

bool Grid::trusted(const double* x) const {
  for (int d = 0; d < n; ++d) {
    if (std::abs(x[d]) > 0.5 * L + 1e-12) return false;
  }
  return true;
}

Grid make_grid(int n, double L, int N) {
  if (n < 1 || n > kMaxDim) config_error("GridInvalid", "grid dimension must be 1..3");
  if (!(L > 0.0)) config_error("GridInvalid", "grid half-width L must be positive");
  if (N < 64 || !std::has_single_bit(static_cast<unsigned>(N))) {
    config_error("GridInvalid", "N must be a power of two and at least 64");
  }
  return Grid{n, L, N};
}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) computation_error("GridMismatch", "sample count does not match grid");
}

Field sample(const Grid& g, const std::function<double(const double*)>& f) {
  Field u(g);
  double x[kMaxDim];
  for (std::size_t i = 0; i < u.size(); ++i) {
    g.coords(i, x);
    u[i] = f(x);
  }
  return u;
}

namespace {
void require_same(const Field& a, const Field& b) {
  if (a.grid != b.grid) computation_error("GridMismatch", "fields live on different grids");
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
  require_same(a, b);
  Field r(a.grid);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Field operator-(const Field& a, const Field& b) {
  require_same(a, b);
  Field r(a.grid);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Field operator*(double c, const Field& a) {
  Field r(a.grid);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = c * a[i];
  return r;
}

void axpy(double c, const Field& b, Field& a) {
  require_same(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

double integrate(const Field& u) {
  double s = 0.0;
  for (double v : u.values) s += v;
  return s * u.grid.cell_volume();
}

double dot(const Field& u, const Field& v) {
  require_same(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s * u.grid.cell_volume();
}

double lp_norm(const Field& u, double r) {
  double s = 0.0;
  for (double v : u.values) s += std::pow(std::abs(v), r);
  return std::pow(s * u.grid.cell_volume(), 1.0 / r);
}

double sup_norm(const Field& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

double sup_trusted(const Field& u) {
  double m = 0.0;
  double x[kMaxDim];
  for (std::size_t i = 0; i < u.size(); ++i) {
    u.grid.coords(i, x);
    if (u.grid.trusted(x)) m = std::max(m, std::abs(u[i]));
  }
  return m;
}

Norms norms(const Field& u, double s, const std::vector<double>& exponents) {
  Norms out;
  out.sup = sup_norm(u);
  out.hs = std::sqrt(std::max(0.0, hs_inner(u, u, s)));
  for (double r : exponents) out.lp.push_back(lp_norm(u, r));
  return out;
}

std::string export_csv(const Field& u, const std::string& path) {
  std::ofstream os(path);
  if (!os) computation_error("IoError", "cannot write " + path);
  const int n = u.grid.n;
  for (int d = 0; d < n; ++d) os << "x_" << d + 1 << ",";
  os << "value\n";
  os << std::setprecision(17);
  double x[kMaxDim];
  for (std::size_t i = 0; i < u.size(); ++i) {
    u.grid.coords(i, x);
    for (int d = 0; d < n; ++d) os << x[d] << ",";
    os << u[i] << "\n";
  }
  return path;
}

std::vector<std::string> export_raw(const Field& u, const std::string& stem) {
  static_assert(std::endian::native == std::endian::little, "raw export assumes a little-endian host");
  const std::string bin = stem + ".bin";
  const std::string side = stem + ".json";
  {
    std::ofstream os(bin, std::ios::binary);
    if (!os) computation_error("IoError", "cannot write " + bin);
    os.write(reinterpret_cast<const char*>(u.values.data()),
             static_cast<std::streamsize>(u.values.size() * sizeof(double)));
  }
  nlohmann::ordered_json j;
  j["n"] = u.grid.n;
  j["L"] = u.grid.L;
  j["N"] = u.grid.N;
  std::ofstream os(side);
  os << j.dump(2) << "\n";
  return {bin, side};
}

}  // namespace fracbubble
