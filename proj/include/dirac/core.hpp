// Shared value types for the Dirac-type spectral toolkit.
//
// The system under study is
//
//   -i B^{-1} y' + Q(x) y = lambda y,   x in [0, 1],
//
// with B = diag(b1, b2), b1 < 0 < b2, and an off-diagonal potential Q.

#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace dirac {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind {
  InvalidArgument,
  NotCanonicalizable,
  NotRegular,
  WrongCase,
  ContourThroughZero,
  StepUnderflow,
  LocalizationFailure,
  NotAnEigenvalue,
  DegenerateNullspace,
  ZeroInnerProduct,
  MultipleEigenvalue,
  UnsupportedBranch,
  DegenerateBoundary,
  Inapplicable,
  InternalInconsistency,
};

const char* to_string(ErrorKind kind);

class SpectralError : public std::runtime_error {
 public:
  SpectralError(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numeric thresholds. Every "!= 0" condition of the theory is decided
/// against one of these.
struct Tolerances {
  double det_rel = 1e-12;         // tol_det = det_rel * (1 + max |entry|)
  double self_adjoint = 1e-10;    // absolute, per self-adjointness relation
  double residual_rel = 1e-10;    // res_tol = residual_rel * (2 + |a| + |d| + |u|)
  double multiplicity = 1e-6;     // boxes below this diameter hold one multiple zero
  double separation_rel = 1e-3;   // sep_tol = separation_rel * 2 pi / (b2 - b1)
  double ode = 1e-10;             // per unit interval
  double quadrature = 1e-8;       // relative
  int max_ode_steps = 1 << 20;
  int max_contour_retries = 6;
};

struct Rationality {
  int n1 = 1;
  int n2 = 1;
  double b0 = 1.0;
};

/// B = diag(b1, b2) with b1 < 0 < b2. A rational ratio is only ever used
/// when declared through `rational`; it is never inferred.
class DiracWeights {
 public:
  DiracWeights(double b1, double b2);
  DiracWeights(double b1, double b2, Rationality rationality);

  static DiracWeights dirac();
  static DiracWeights rational(int n1, int n2, double b0);

  double b1() const noexcept { return b1_; }
  double b2() const noexcept { return b2_; }
  double beta() const noexcept { return -b2_ / b1_; }
  const std::optional<Rationality>& rationality() const noexcept { return rationality_; }

  /// b1 == -b2 (the Dirac case up to rescaling of lambda).
  bool is_symmetric() const noexcept;

  /// Asymptotic spacing 2 pi / (b2 - b1) of the real parts of the zeros.
  double mean_gap() const noexcept { return 2.0 * kPi / (b2_ - b1_); }

 private:
  double b1_;
  double b2_;
  std::optional<Rationality> rationality_;
};

}  // namespace dirac
