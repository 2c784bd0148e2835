// Complex polynomial helpers used by the rational-ratio reduction.
// Coefficients are stored in ascending order: p(z) = sum_k coeffs[k] z^k.

#pragma once

#include <vector>

#include "dirac/core.hpp"

namespace dirac::poly {

struct Root {
  Complex value;
  int multiplicity = 1;
};

Complex evaluate(const std::vector<Complex>& coeffs, Complex z);

std::vector<Complex> derivative(const std::vector<Complex>& coeffs);

/// Drops leading coefficients below rel_tol * max |coeff|.
std::vector<Complex> trimmed(std::vector<Complex> coeffs, double rel_tol = 0.0);

/// Roots from the eigenvalues of the companion matrix, clustered within
/// cluster_tol (relative to 1 + |root|) and polished by Newton.
std::vector<Root> roots(const std::vector<Complex>& coeffs, double cluster_tol = 1e-6);

/// Numeric gcd via the Euclidean algorithm on max-normalized polynomials.
/// A remainder with norm <= rem_tol is treated as zero.
std::vector<Complex> gcd(std::vector<Complex> lhs, std::vector<Complex> rhs, double rem_tol = 1e-10);

/// True when gcd(p, p') has positive degree.
bool has_multiple_root(const std::vector<Complex>& coeffs, double rem_tol = 1e-10);

/// Delta0(lambda) e^{-i b1 lambda} as a polynomial in zeta = e^{i b0 lambda}:
///   zeta^{n1+n2} + a zeta^{n2} + d zeta^{n1} + (ad - bc).
std::vector<Complex> characteristic_polynomial(Complex a, Complex b, Complex c, Complex d,
                                               int n1, int n2);

}  // namespace dirac::poly
