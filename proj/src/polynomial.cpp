#include "dirac/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace dirac::poly {

namespace {

double max_abs(const std::vector<Complex>& coeffs) {
  double m = 0.0;
  for (const auto& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

std::vector<Complex> normalized(std::vector<Complex> coeffs) {
  const double m = max_abs(coeffs);
  if (m > 0.0) {
    for (auto& c : coeffs) c /= m;
  }
  return coeffs;
}

// Remainder of lhs / rhs; rhs must have a nonzero leading coefficient.
std::vector<Complex> remainder(std::vector<Complex> lhs, const std::vector<Complex>& rhs) {
  const std::size_t m = rhs.size();
  const Complex lead = rhs.back();
  while (lhs.size() >= m) {
    const Complex q = lhs.back() / lead;
    const std::size_t shift = lhs.size() - m;
    for (std::size_t k = 0; k < m; ++k) lhs[shift + k] -= q * rhs[k];
    lhs.pop_back();
  }
  return lhs;
}

}  // namespace

Complex evaluate(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc{0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> derivative(const std::vector<Complex>& coeffs) {
  std::vector<Complex> out;
  for (std::size_t k = 1; k < coeffs.size(); ++k) out.push_back(static_cast<double>(k) * coeffs[k]);
  return out;
}

std::vector<Complex> trimmed(std::vector<Complex> coeffs, double rel_tol) {
  const double cut = rel_tol * max_abs(coeffs);
  while (!coeffs.empty() && std::abs(coeffs.back()) <= cut) coeffs.pop_back();
  return coeffs;
}

std::vector<Root> roots(const std::vector<Complex>& input, double cluster_tol) {
  const auto coeffs = trimmed(input);
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree < 1) return {};

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / coeffs[degree];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<Complex> raw(solver.eigenvalues().data(), solver.eigenvalues().data() + degree);

  // Single-linkage clustering of numerically split multiple roots.
  std::vector<int> label(raw.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const auto k = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < raw.size(); ++j) {
        if (label[j] < 0 && std::abs(raw[j] - raw[k]) <= cluster_tol * (1.0 + std::abs(raw[k]))) {
          label[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }

  const auto dcoeffs = derivative(coeffs);
  std::vector<Root> out;
  for (int l = 0; l < next; ++l) {
    Complex sum{0.0};
    int count = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (label[i] == l) {
        sum += raw[i];
        ++count;
      }
    }
    Complex z = sum / static_cast<double>(count);
    if (count == 1) {
      for (int it = 0; it < 8; ++it) {
        const Complex dp = evaluate(dcoeffs, z);
        if (dp == Complex{0.0}) break;
        const Complex step = evaluate(coeffs, z) / dp;
        z -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
      }
    }
    out.push_back({z, count});
  }
  return out;
}

std::vector<Complex> gcd(std::vector<Complex> lhs, std::vector<Complex> rhs, double rem_tol) {
  lhs = normalized(trimmed(std::move(lhs), 1e-14));
  rhs = normalized(trimmed(std::move(rhs), 1e-14));
  if (lhs.size() < rhs.size()) std::swap(lhs, rhs);
  while (!rhs.empty()) {
    auto r = remainder(lhs, rhs);
    if (r.empty() || max_abs(r) <= rem_tol) return rhs;
    lhs = std::move(rhs);
    rhs = normalized(trimmed(std::move(r), 1e-12));
  }
  return lhs;
}

bool has_multiple_root(const std::vector<Complex>& coeffs, double rem_tol) {
  const auto p = trimmed(coeffs);
  if (p.size() < 3) return false;
  return gcd(p, derivative(p), rem_tol).size() >= 2;
}

std::vector<Complex> characteristic_polynomial(Complex a, Complex b, Complex c, Complex d, int n1,
                                               int n2) {
  std::vector<Complex> p(static_cast<std::size_t>(n1 + n2) + 1, Complex{0.0});
  p[n1 + n2] += 1.0;
  p[n2] += a;
  p[n1] += d;
  p[0] += a * d - b * c;
  return p;
}

}  // namespace dirac::poly
