// Zeros of the unperturbed characteristic determinant
//
//   Delta0(lambda) = d + a e^{i(b1+b2) lambda} + u e^{i b1 lambda} + e^{i b2 lambda},
//
// by closed form (b = c = 0), by reduction to a polynomial in e^{i b0 lambda}
// (declared rational ratio), or by the argument principle on a strip.
//
// Ordering: nondecreasing Re, ties (within 1e-9) by nondecreasing Im. Index 0
// goes to the zero with the smallest |Re|; there is one record per distinct
// zero and its multiplicity is stored alongside.

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dirac/bc_algebra.hpp"
#include "dirac/core.hpp"

namespace dirac {

struct SpectrumWindow {
  std::optional<int> n_side;
  std::optional<std::pair<double, double>> re_range;

  static SpectrumWindow symmetric(int n_side);
  static SpectrumWindow range(double lo, double hi);
  /// Throws InvalidArgument unless exactly one form is set and valid.
  void validate() const;
};

enum class ZeroMethod { ClosedForm, PolynomialReduction, Contour, Localized };

const char* to_string(ZeroMethod method);

struct Eigenvalue {
  int index = 0;
  Complex value;
  int multiplicity = 1;
  double residual = 0.0;
  ZeroMethod method = ZeroMethod::Contour;
};

using Spectrum = std::vector<Eigenvalue>;

Complex delta0(Complex lambda, const CanonicalBC& bc, const DiracWeights& w);
Complex delta0_derivative(Complex lambda, const CanonicalBC& bc, const DiracWeights& w);

/// res_tol = residual_rel * (2 + |a| + |d| + |u|).
double residual_tolerance(const CanonicalBC& bc, const Tolerances& tol = {});

/// h with all zeros of Delta0 in |Im lambda| <= h, certified by the
/// dominant-term inequalities on both sides of the strip.
double strip_height(const CanonicalBC& bc, const DiracWeights& w, const Tolerances& tol = {});

Spectrum zeros_closed_form(const CanonicalBC& bc, const DiracWeights& w, const SpectrumWindow& win,
                           const Tolerances& tol = {});
Spectrum zeros_polynomial(const CanonicalBC& bc, const DiracWeights& w, const SpectrumWindow& win,
                          const Tolerances& tol = {});
Spectrum zeros_contour(const CanonicalBC& bc, const DiracWeights& w, const SpectrumWindow& win,
                       const Tolerances& tol = {});

/// Closed form when b = c = 0, else polynomial when the ratio is declared
/// rational, else contour.
Spectrum unperturbed_zeros(const CanonicalBC& bc, const DiracWeights& w, const SpectrumWindow& win,
                           const Tolerances& tol = {});

/// Sorts, assigns indices and cuts the window. `compute(R)` must return
/// every zero with |Re| <= R; R is enlarged until the window is covered.
Spectrum windowed(const std::function<Spectrum(double)>& compute, const DiracWeights& w,
                  const SpectrumWindow& win);

/// Sorting and index assignment for an already computed set.
void order_and_index(Spectrum& zeros);

struct ZeroSequences {
  std::vector<Complex> e1;  // e^{i b1 lambda}
  std::vector<Complex> e2;  // e^{-i b2 lambda}
  std::vector<Complex> z;   // (1 + d e2) conj(1 + a e1)
};

ZeroSequences derive_sequences(const Spectrum& zeros, const CanonicalBC& bc, const DiracWeights& w,
                               const Tolerances& tol = {});

struct SeparationStats {
  double min_gap = 0.0;  // over the outer half of the window
  int incompressibility_d = 0;
  bool is_asymptotically_separated = false;
};

/// sep_tol = separation_rel * mean gap.
double default_separation_tolerance(const DiracWeights& w, const Tolerances& tol = {});

SeparationStats separation_stats(const Spectrum& zeros, double sep_tol);

/// Number of occupied cells of the dyadic grid with side 2^{-k} <= eps,
/// over the outer half (first and last quarters) of `seq`.
int limit_point_census(const std::vector<Complex>& seq, double eps);

/// Counts of m in [-M, M] with frac(beta m) in each closed interval.
std::vector<long> weyl_census(double beta, long M,
                              const std::vector<std::pair<double, double>>& intervals);

}  // namespace dirac
