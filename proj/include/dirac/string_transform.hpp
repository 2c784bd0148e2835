// Reduction of the damped string
//
//   u_tt - (beta1 + beta2) u_xt + beta1 beta2 u_xx + a1(x) u_x + a2(x) u_t = 0,
//   u(0, t) = 0,  h0 u_x(0, t) + h1 u_x(1, t) + h2 u_t(1, t) = 0,
//
// to a Dirac-type problem with B = diag(1/beta1, 1/beta2), an off-diagonal
// potential and boundary rows (1, 1, 0, 0), (b1 h0, b2 h0, ., .).

#pragma once

#include <functional>
#include <vector>

#include "dirac/bc_algebra.hpp"
#include "dirac/perturbed_solver.hpp"

namespace dirac {

struct StringProblem {
  using Profile = std::function<Complex(double)>;

  double beta1 = -1.0;
  double beta2 = 1.0;
  Profile a1;  // empty means identically zero
  Profile a2;
  Complex h0{0.0};
  Complex h1{0.0};
  Complex h2{1.0};

  /// Throws InvalidArgument unless beta1 < 0 < beta2 and |h1| + |h2| > 0.
  void validate() const;
  Complex eval_a1(double x) const { return a1 ? a1(x) : Complex{0.0}; }
  Complex eval_a2(double x) const { return a2 ? a2(x) : Complex{0.0}; }
};

struct DiracReduction {
  DiracWeights weights = DiracWeights::dirac();
  Potential q;
  RawBC raw_bc = CanonicalBC{}.to_raw();
  CanonicalBC canonical_bc;
  std::vector<double> grid;
  std::vector<Complex> w1;  // w_1 on the grid
  std::vector<Complex> w2;
  Complex w1_at_1{1.0};
  Complex w2_at_1{1.0};
  Complex w_at_1{1.0};
  double quadrature_change = 0.0;  // |w(1)| change under grid halving
  bool c_small = false;            // |b1 h1 + h2| <= tol_det: c = 0, conditions not regular
};

/// Throws DegenerateBoundary when |b2 h1 + h2| <= tol_det.
DiracReduction reduce(const StringProblem& sp, int m, const Tolerances& tol = {});

/// h0 = 0, beta1 = -beta2 and int_0^1 Re a2 = beta2 log |(beta2 h2 + h1)/(beta2 h2 - h1)|.
/// Inapplicable unless the reduced conditions are strictly regular; the
/// answer is cross-checked against self-adjointness of the reduced conditions.
bool string_bari_condition(const StringProblem& sp, int m = 2049, const Tolerances& tol = {});

/// Maps a Dirac eigenfunction back to the string variables and returns the
/// largest residual of the first-order string system and its boundary
/// conditions, relative to max |y| (1 + |lambda|).
double similarity_residual(const StringProblem& sp, const DiracReduction& red,
                           const EigenFunction& eigen);

/// Fourth-order cumulative integral of samples on a uniform grid, starting at 0.
std::vector<Complex> cumulative_integral(const std::vector<Complex>& values);

/// Fourth-order finite-difference derivative on a uniform grid on [0, 1].
std::vector<Complex> grid_derivative(const std::vector<Complex>& values);

}  // namespace dirac
