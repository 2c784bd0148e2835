// Diagnostics for the Bari property of eigenfunction systems: the factors
// E_j^{+-}, the ratio alpha_n = |f_n| |g_n| / |(f_n, g_n)|, the tau terms of
// the unperturbed pairs, the c0 criterion and truncated closeness sums.

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "dirac/bc_algebra.hpp"
#include "dirac/det0_solver.hpp"
#include "dirac/quadrature.hpp"

namespace dirac {

/// E_j^{+-}(lambda) = int_0^1 |e^{+-2 i b_j lambda x}| dx = (e^t - 1)/t,
/// t = -+2 b_j Im lambda. `sign` is +1 or -1, `j` is 1 or 2.
double e_factor(Complex lambda, int j, int sign, const DiracWeights& w);

struct EigenPair {
  int index = 0;
  Complex lambda;
  std::vector<double> grid;
  VectorField f;  // eigenfunction of the problem at lambda
  VectorField g;  // eigenfunction of the adjoint problem at conj(lambda)
};

enum class PairBranch { General, Mirror, QuasiPeriodic1, QuasiPeriodic2 };

const char* to_string(PairBranch branch);

/// Which analytic formula describes the unperturbed pair at this zero.
PairBranch pair_branch(Complex lambda, const CanonicalBC& bc, const DiracWeights& w);

/// Unnormalized analytic pair for Q = 0, sampled on m grid points.
/// For b = 0 != c the components and the ends of [0, 1] are exchanged.
EigenPair unperturbed_pair(const Eigenvalue& zero, const CanonicalBC& bc, const DiracWeights& w,
                           int m);

struct PairClosedForm {
  double norm_f_sq = 0.0;
  double norm_g_sq = 0.0;
  Complex inner_fg;
  std::array<double, 4> tau{};  // tau1, tau2, tau3, tau4
  Complex z;
};

/// Closed forms for the analytic pair (b != 0, or b = 0 != c via the mirror).
PairClosedForm pair_closed_form(Complex lambda, const CanonicalBC& bc, const DiracWeights& w);

struct PairDiagnostic {
  int n = 0;
  Complex lambda;
  double norm_f = 0.0;
  double norm_g = 0.0;
  Complex inner_fg;
  double alpha = 1.0;
  double defect = 0.0;            // alpha^2 - 1
  double rescaled_distance = 0.0; // |f' - g'|^2 by quadrature
  bool tau_available = false;
  std::array<double, 4> tau{};
  Complex z;
};

/// Norms and inner product by Simpson quadrature. tau terms come from the
/// closed forms and are only filled for analytic Q = 0 pairs
/// (`analytic_pair` set) with |b| + |c| > 0.
PairDiagnostic pair_diagnostic(const EigenPair& pair, const CanonicalBC& bc, const DiracWeights& w,
                               bool analytic_pair, const Tolerances& tol = {});

enum class BariKind { SelfAdjointBari, NotBari, Inconclusive };

const char* to_string(BariKind kind);

struct BariVerdict {
  std::string route;          // "quasi-periodic" or "general"
  bool ratio_ok = false;      // |c| = beta |b|, or |a| = |d| = 1 on the quasi-periodic route
  double im_trend = 0.0;      // max |Im lambda_n| over the outer half
  double im_trend_quarter = 0.0;
  double z_trend = 0.0;       // max |z_n - |bc|| over the outer half
  double z_trend_quarter = 0.0;
  bool flags_pass = false;
  bool self_adjoint = false;
  BariKind verdict = BariKind::Inconclusive;
};

BariVerdict bari_c0_check(const CanonicalBC& bc, const DiracWeights& w, const Spectrum& zeros,
                          const ZeroSequences& sequences, const Tolerances& tol = {});

struct ClosenessSums {
  std::vector<int> order;            // indices n by increasing |n|
  std::vector<double> terms;         // |f_n' - g_n'| in that order
  std::vector<double> partial_sums;  // cumulative p'-power sums (running max when p = 1)
  double tail_sup = 0.0;             // sup over the outer half
};

/// p in [1, 2], p' = p / (p - 1).
ClosenessSums closeness_sums(const std::vector<std::pair<int, double>>& terms, double p);
ClosenessSums closeness_sums(const std::vector<PairDiagnostic>& diags, double p);

}  // namespace dirac
