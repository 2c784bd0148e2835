// Fundamental matrix of y' = i B (lambda - Q(x)) y, the perturbed
// characteristic determinant, eigenvalue localization near the unperturbed
// zeros, and eigenfunctions of the problem and of its adjoint.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dirac/bc_algebra.hpp"
#include "dirac/det0_solver.hpp"
#include "dirac/quadrature.hpp"

namespace dirac {

using Mat2 = Eigen::Matrix<Complex, 2, 2>;

enum class PotentialKind { Zero, Callable, Sampled };

/// Off-diagonal potential Q = (0, q12; q21, 0).
class Potential {
 public:
  using Profile = std::function<Complex(double)>;

  static Potential zero();
  static Potential callable(Profile q12, Profile q21, double p_class = 2.0);
  static Potential constant(Complex q12, Complex q21);
  /// Samples on the uniform grid x_i = i/(m-1), interpolated piecewise linearly.
  static Potential sampled(std::vector<Complex> q12, std::vector<Complex> q21, double p_class = 2.0);

  PotentialKind kind() const noexcept { return kind_; }
  double p_class() const noexcept { return p_class_; }
  bool is_zero() const noexcept { return kind_ == PotentialKind::Zero; }
  /// True when q12 and q21 do not depend on x (the integrator is then exact).
  bool is_constant() const noexcept { return constant_; }

  Complex q12(double x) const;
  Complex q21(double x) const;

  /// Q* = (0, conj q21; conj q12, 0).
  Potential adjoint() const;

  /// Sample points when sampled, else empty.
  const std::vector<Complex>& samples12() const noexcept { return s12_; }
  const std::vector<Complex>& samples21() const noexcept { return s21_; }

  /// (int_0^1 |q12|^2 + |q21|^2)^{1/2} by Simpson on 2049 points.
  double l2_norm() const;

 private:
  PotentialKind kind_ = PotentialKind::Zero;
  double p_class_ = 2.0;
  bool constant_ = true;
  Profile f12_;
  Profile f21_;
  std::vector<Complex> s12_;
  std::vector<Complex> s21_;
};

struct FundamentalMatrix {
  Complex lambda;
  std::vector<double> grid;
  std::vector<Mat2> values;
  Mat2 phi_at_1;
  int steps = 0;  // integration steps per unit interval actually used
};

/// Phi(x, lambda) on a uniform grid of m points (bumped to odd), with
/// Phi(0) = I. Fourth-order Magnus steps, halved until two successive
/// solutions differ by less than ode_tol (relative to |Phi|).
FundamentalMatrix fundamental_matrix(const Potential& q, const DiracWeights& w, Complex lambda,
                                     int m, const Tolerances& tol = {});

/// Phi(1, lambda) only.
Mat2 transfer_matrix(const Potential& q, const DiracWeights& w, Complex lambda,
                     const Tolerances& tol = {});

/// d + a det Phi + u phi11 + phi22 + c phi12 - b phi21, the determinant of
/// the boundary matrix of the canonical conditions.
Complex delta_q(Complex lambda, const CanonicalBC& bc, const DiracWeights& w, const Potential& q,
                const Tolerances& tol = {});

/// det [U_j(Phi_k)] for general boundary rows.
Complex delta_raw(Complex lambda, const RawBC& bc, const DiracWeights& w, const Potential& q,
                  const Tolerances& tol = {});

struct PerturbedSpectrum {
  Spectrum zeros;                    // inherited indices; ZeroMethod::Localized
  Spectrum unperturbed;              // lambda_n^0 for the same indices
  std::vector<int> failed_indices;   // LocalizationFailure, reported not thrown
};

PerturbedSpectrum perturbed_zeros(const CanonicalBC& bc, const DiracWeights& w, const Potential& q,
                                  const SpectrumWindow& win, const Tolerances& tol = {});

struct EigenFunction {
  Complex lambda;
  std::vector<double> grid;
  VectorField f;
  double bc_residual = 0.0;
  bool degenerate_nullspace = false;
};

/// Unit L2 norm; phase fixed so that the first component is real positive
/// at the leftmost grid point where |f| > 1e-6 (the second component is
/// used there if the first is below 1e-6).
EigenFunction eigenfunction(Complex lambda, const RawBC& bc, const DiracWeights& w,
                            const Potential& q, int m, const Tolerances& tol = {});
EigenFunction eigenfunction(Complex lambda, const CanonicalBC& bc, const DiracWeights& w,
                            const Potential& q, int m, const Tolerances& tol = {});

/// Eigenfunction of the adjoint problem (adjoint rows, potential Q*) at
/// conj(lambda), where lambda is an eigenvalue of the original problem.
EigenFunction adjoint_eigenfunction(Complex lambda, const CanonicalBC& bc, const DiracWeights& w,
                                    const Potential& q, int m, const Tolerances& tol = {});

}  // namespace dirac
