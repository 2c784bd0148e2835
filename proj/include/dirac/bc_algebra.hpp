// Two-point boundary conditions for the 2x2 Dirac-type system.
//
// A general pair of conditions is a 2x4 matrix acting on the column
// (y1(0), y2(0), y1(1), y2(1)). When the minor on columns 1 and 4 is
// invertible the conditions reduce to the canonical form
//
//   y1(0) + b y2(0) + a y1(1) = 0,
//   d y2(0) + c y1(1) + y2(1) = 0,
//
// which is regular iff u = ad - bc != 0.

#pragma once

#include <string>

#include <Eigen/Core>

#include "dirac/core.hpp"

namespace dirac {

using BoundaryMatrix = Eigen::Matrix<Complex, 2, 4>;

class RawBC {
 public:
  /// Throws InvalidArgument when the two rows are linearly dependent.
  explicit RawBC(const BoundaryMatrix& rows);

  const BoundaryMatrix& matrix() const noexcept { return rows_; }

  /// J_jk = det of columns j, k (1-based).
  Complex minor(int j, int k) const;

  double max_entry() const;

 private:
  BoundaryMatrix rows_;
};

struct CanonicalBC {
  Complex a{0.0};
  Complex b{0.0};
  Complex c{0.0};
  Complex d{0.0};

  Complex u() const { return a * d - b * c; }
  double max_entry() const;
  RawBC to_raw() const;
};

/// tol_det = det_rel * (1 + scale).
double det_tolerance(double scale, const Tolerances& tol = {});

CanonicalBC canonicalize(const RawBC& raw, const Tolerances& tol = {});

bool is_regular(const CanonicalBC& bc, const Tolerances& tol = {});

enum class StrictKind { YesAnalytic, NoAnalytic, YesNumeric, NoNumeric, Unknown };

struct StrictVerdict {
  StrictKind kind = StrictKind::Unknown;
  std::string case_label;

  bool yes() const { return kind == StrictKind::YesAnalytic || kind == StrictKind::YesNumeric; }
  /// "Yes-analytic/separated", "No-numeric/numeric", ...
  std::string to_string() const;
};

const char* to_string(StrictKind kind);

/// Strict regularity: the most specific closed-form criterion that applies,
/// otherwise a numeric separation test on the zeros of the unperturbed
/// determinant.
StrictVerdict classify_strict(const CanonicalBC& bc, const DiracWeights& w,
                              const Tolerances& tol = {});

/// Boundary functionals of the adjoint operator, rows
///   conj(a) y1(0) + y1(1) + conj(c)/beta y2(1),
///   beta conj(b) y1(0) + y2(0) + conj(d) y2(1).
RawBC adjoint_bc(const CanonicalBC& bc, const DiracWeights& w);

/// True when both matrices describe the same set of admissible boundary
/// values (equal row spaces).
bool equivalent_bc(const RawBC& lhs, const RawBC& rhs, double rel_tol = 1e-9);

struct SelfAdjointReport {
  double relation_1 = 0.0;  // |a|^2 + beta |b|^2 - 1
  double relation_2 = 0.0;  // |c|^2 + beta |d|^2 - beta
  double relation_3 = 0.0;  // |a conj(c) + beta b conj(d)|
  bool relations_hold = false;
  double matrix_defect = 0.0;  // ||C B C^* - D B D^*||_F / |b1|
  bool matrix_identity_holds = false;
};

SelfAdjointReport self_adjoint_report(const CanonicalBC& bc, const DiracWeights& w,
                                      const Tolerances& tol = {});

/// Self-adjointness of the unperturbed operator. Evaluates both the
/// coefficient relations and C B C^* = D B D^*; throws InternalInconsistency
/// if they disagree outside the tolerance band.
bool is_self_adjoint(const CanonicalBC& bc, const DiracWeights& w, const Tolerances& tol = {});

struct Classification {
  bool regular = false;
  StrictVerdict strict;
  bool self_adjoint = false;
};

Classification classify(const CanonicalBC& bc, const DiracWeights& w, const Tolerances& tol = {});

}  // namespace dirac
