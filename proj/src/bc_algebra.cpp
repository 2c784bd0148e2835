#include "dirac/bc_algebra.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "dirac/det0_solver.hpp"
#include "dirac/polynomial.hpp"

namespace dirac {

namespace {

Complex det2(Complex m00, Complex m01, Complex m10, Complex m11) { return m00 * m11 - m01 * m10; }

// Distance from x to the nearest integer.
double integer_distance(double x) { return std::abs(x - std::round(x)); }

StrictVerdict verdict(bool yes, bool analytic, const char* label) {
  StrictVerdict v;
  if (analytic) {
    v.kind = yes ? StrictKind::YesAnalytic : StrictKind::NoAnalytic;
  } else {
    v.kind = yes ? StrictKind::YesNumeric : StrictKind::NoNumeric;
  }
  v.case_label = label;
  return v;
}

}  // namespace

RawBC::RawBC(const BoundaryMatrix& rows) : rows_(rows) {
  double biggest = 0.0;
  for (int j = 1; j <= 4; ++j) {
    for (int k = j + 1; k <= 4; ++k) biggest = std::max(biggest, std::abs(minor(j, k)));
  }
  const double m = max_entry();
  if (!(biggest > Tolerances{}.det_rel * (1.0 + m * m))) {
    throw SpectralError(ErrorKind::InvalidArgument, "boundary functionals are linearly dependent");
  }
}

Complex RawBC::minor(int j, int k) const {
  if (j < 1 || j > 4 || k < 1 || k > 4) {
    throw SpectralError(ErrorKind::InvalidArgument, "minor columns must be in 1..4");
  }
  return det2(rows_(0, j - 1), rows_(0, k - 1), rows_(1, j - 1), rows_(1, k - 1));
}

double RawBC::max_entry() const { return rows_.cwiseAbs().maxCoeff(); }

double CanonicalBC::max_entry() const {
  return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

RawBC CanonicalBC::to_raw() const {
  BoundaryMatrix m;
  m << 1.0, b, a, 0.0, 0.0, d, c, 1.0;
  return RawBC(m);
}

double det_tolerance(double scale, const Tolerances& tol) { return tol.det_rel * (1.0 + scale); }

CanonicalBC canonicalize(const RawBC& raw, const Tolerances& tol) {
  const auto& A = raw.matrix();
  const Complex j14 = raw.minor(1, 4);
  if (std::abs(j14) <= det_tolerance(raw.max_entry(), tol)) {
    throw SpectralError(ErrorKind::NotCanonicalizable, "minor J14 vanishes");
  }
  Eigen::Matrix<Complex, 2, 2> a14;
  a14 << A(0, 0), A(0, 3), A(1, 0), A(1, 3);
  const BoundaryMatrix m = a14.inverse() * A;
  CanonicalBC bc;
  bc.b = m(0, 1);
  bc.a = m(0, 2);
  bc.d = m(1, 1);
  bc.c = m(1, 2);
  return bc;
}

bool is_regular(const CanonicalBC& bc, const Tolerances& tol) {
  return std::abs(bc.u()) > det_tolerance(bc.max_entry(), tol);
}

const char* to_string(StrictKind kind) {
  switch (kind) {
    case StrictKind::YesAnalytic: return "Yes-analytic";
    case StrictKind::NoAnalytic: return "No-analytic";
    case StrictKind::YesNumeric: return "Yes-numeric";
    case StrictKind::NoNumeric: return "No-numeric";
    case StrictKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string StrictVerdict::to_string() const {
  return std::string(dirac::to_string(kind)) + "/" + case_label;
}

StrictVerdict classify_strict(const CanonicalBC& bc, const DiracWeights& w, const Tolerances& tol) {
  if (!is_regular(bc, tol)) {
    throw SpectralError(ErrorKind::NotRegular, "strict regularity needs regular conditions");
  }
  const Complex a = bc.a;
  const Complex b = bc.b;
  const Complex c = bc.c;
  const Complex d = bc.d;
  const double m = bc.max_entry();
  const double tol_det = det_tolerance(m, tol);
  auto nonzero = [&](Complex z) { return std::abs(z) > tol_det; };
  const bool bc_zero = !nonzero(b * c);

  if (!nonzero(a) && !nonzero(d) && !bc_zero) return verdict(true, true, "separated");

  if (w.is_symmetric()) {
    const Complex gap = (a - d) * (a - d) + 4.0 * b * c;
    return verdict(std::abs(gap) > tol.det_rel * (1.0 + m * m), true, "case1");
  }

  const double b1 = w.b1();
  const double b2 = w.b2();
  auto log_balance = [&] {
    const double l1 = b1 * std::log(std::abs(d));
    const double l2 = b2 * std::log(std::abs(a));
    return std::abs(l1 + l2) > tol.det_rel * (1.0 + std::abs(l1) + std::abs(l2));
  };

  if (const auto& r = w.rationality()) {
    if (bc_zero) {
      const double phase = (r->n1 * std::arg(-d) - r->n2 * std::arg(-a)) / (2.0 * kPi);
      const bool yes = log_balance() || integer_distance(phase) > tol.det_rel * (r->n1 + r->n2);
      const bool antiperiodic = std::abs(a - 1.0) <= tol_det && std::abs(d - 1.0) <= tol_det;
      return verdict(yes, true, antiperiodic ? "case3b" : "case3a");
    }
    if (!nonzero(a)) {
      const int n = r->n1 + r->n2;
      const Complex lhs = std::pow(static_cast<double>(r->n1), r->n1) *
                          std::pow(static_cast<double>(r->n2), r->n2) * std::pow(-d, n);
      const Complex rhs = std::pow(static_cast<double>(n), n) * std::pow(-b * c, r->n2);
      const bool yes =
          std::abs(lhs - rhs) > tol.det_rel * (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
      return verdict(yes, true, "case3c");
    }
    const auto p = poly::characteristic_polynomial(a, b, c, d, r->n1, r->n2);
    return verdict(!poly::has_multiple_root(p), true, "case3");
  }

  if (bc_zero) return verdict(log_balance(), true, "case4a");

  if (!nonzero(a) && nonzero(d)) {
    // Only |d| enters: for irrational ratios the phases of e^{i b1 lambda}
    // and e^{i b2 lambda} are asymptotically independent.
    const double alpha = -b1 / b2;
    const double critical =
        (alpha + 1.0) * std::pow(std::abs(b * c) * std::pow(alpha, -alpha), 1.0 / (alpha + 1.0));
    return verdict(std::abs(std::abs(d) - critical) > tol.det_rel * (1.0 + critical), true, "case4b");
  }

  const auto zeros = zeros_contour(bc, w, SpectrumWindow::symmetric(64), tol);
  const auto stats = separation_stats(zeros, default_separation_tolerance(w, tol));
  return verdict(stats.is_asymptotically_separated, false, "numeric");
}

RawBC adjoint_bc(const CanonicalBC& bc, const DiracWeights& w) {
  const double beta = w.beta();
  BoundaryMatrix m;
  m << std::conj(bc.a), 0.0, 1.0, std::conj(bc.c) / beta,  //
      beta * std::conj(bc.b), 1.0, 0.0, std::conj(bc.d);
  return RawBC(m);
}

bool equivalent_bc(const RawBC& lhs, const RawBC& rhs, double rel_tol) {
  Eigen::Matrix<Complex, 4, 4> stacked;
  stacked << lhs.matrix(), rhs.matrix();
  Eigen::JacobiSVD<Eigen::Matrix<Complex, 4, 4>> svd(stacked);
  const auto& s = svd.singularValues();
  return s(2) <= rel_tol * s(0);
}

SelfAdjointReport self_adjoint_report(const CanonicalBC& bc, const DiracWeights& w,
                                      const Tolerances& tol) {
  const double beta = w.beta();
  SelfAdjointReport r;
  r.relation_1 = std::norm(bc.a) + beta * std::norm(bc.b) - 1.0;
  r.relation_2 = std::norm(bc.c) + beta * std::norm(bc.d) - beta;
  r.relation_3 = std::abs(bc.a * std::conj(bc.c) + beta * bc.b * std::conj(bc.d));
  r.relations_hold = std::abs(r.relation_1) <= tol.self_adjoint &&
                     std::abs(r.relation_2) <= tol.self_adjoint && r.relation_3 <= tol.self_adjoint;

  Eigen::Matrix<Complex, 2, 2> C;
  Eigen::Matrix<Complex, 2, 2> D;
  Eigen::Matrix<Complex, 2, 2> B = Eigen::Matrix<Complex, 2, 2>::Zero();
  C << 1.0, bc.b, 0.0, bc.d;
  D << bc.a, 0.0, bc.c, 1.0;
  B(0, 0) = w.b1();
  B(1, 1) = w.b2();
  const Eigen::Matrix<Complex, 2, 2> diff = C * B * C.adjoint() - D * B * D.adjoint();
  r.matrix_defect = diff.norm() / std::abs(w.b1());
  r.matrix_identity_holds = r.matrix_defect <= tol.self_adjoint;
  return r;
}

bool is_self_adjoint(const CanonicalBC& bc, const DiracWeights& w, const Tolerances& tol) {
  const auto r = self_adjoint_report(bc, w, tol);
  // The matrix defect is sqrt(r1^2 + r2^2 + 2 r3^2), so when every relation
  // is within tol it is at most 2 tol. Only disagreements outside that band
  // point to a bug.
  const bool matrix_loose = r.matrix_defect <= 2.0 * tol.self_adjoint * (1.0 + 1e-6);
  if (r.relations_hold != r.matrix_identity_holds && r.relations_hold != matrix_loose) {
    throw SpectralError(ErrorKind::InternalInconsistency,
                        "self-adjointness relations and C B C* = D B D* disagree");
  }
  return r.relations_hold;
}

Classification classify(const CanonicalBC& bc, const DiracWeights& w, const Tolerances& tol) {
  Classification out;
  out.regular = is_regular(bc, tol);
  if (out.regular) {
    out.strict = classify_strict(bc, w, tol);
  } else {
    out.strict.kind = StrictKind::Unknown;
    out.strict.case_label = "not-regular";
  }
  out.self_adjoint = is_self_adjoint(bc, w, tol);
  return out;
}

}  // namespace dirac
