#include "dirac/quadrature.hpp"

#include <cmath>

namespace dirac {

namespace {

template <typename T>
T simpson_impl(const std::vector<T>& v) {
  const std::size_t n = v.size();
  if (n < 3 || n % 2 == 0) {
    throw SpectralError(ErrorKind::InvalidArgument, "Simpson rule needs an odd number (>= 3) of samples");
  }
  const double h = 1.0 / static_cast<double>(n - 1);
  T acc = v.front() + v.back();
  for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
  return acc * (h / 3.0);
}

}  // namespace

std::vector<double> uniform_grid(int m) {
  if (m < 2) throw SpectralError(ErrorKind::InvalidArgument, "grid needs at least two points");
  if (m % 2 == 0) ++m;
  std::vector<double> x(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] = static_cast<double>(i) / (m - 1);
  return x;
}

Complex simpson(const std::vector<Complex>& values) { return simpson_impl(values); }
double simpson(const std::vector<double>& values) { return simpson_impl(values); }

Complex inner(const VectorField& f, const VectorField& g) {
  if (f.size() != g.size()) throw SpectralError(ErrorKind::InvalidArgument, "grid mismatch");
  std::vector<Complex> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = g[i].dot(f[i]);  // dot conjugates its left side
  return simpson(v);
}

double norm(const VectorField& f) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = f[i].squaredNorm();
  return std::sqrt(simpson(v));
}

}  // namespace dirac
