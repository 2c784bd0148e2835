#include "dirac/core.hpp"

#include <cmath>
#include <numeric>

namespace dirac {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotCanonicalizable: return "NotCanonicalizable";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::WrongCase: return "WrongCase";
    case ErrorKind::ContourThroughZero: return "ContourThroughZero";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::LocalizationFailure: return "LocalizationFailure";
    case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorKind::DegenerateNullspace: return "DegenerateNullspace";
    case ErrorKind::ZeroInnerProduct: return "ZeroInnerProduct";
    case ErrorKind::MultipleEigenvalue: return "MultipleEigenvalue";
    case ErrorKind::UnsupportedBranch: return "UnsupportedBranch";
    case ErrorKind::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorKind::Inapplicable: return "Inapplicable";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

SpectralError::SpectralError(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

DiracWeights::DiracWeights(double b1, double b2) : b1_(b1), b2_(b2) {
  if (!(b1 < 0.0 && b2 > 0.0) || !std::isfinite(b1) || !std::isfinite(b2)) {
    throw SpectralError(ErrorKind::InvalidArgument, "weights must satisfy b1 < 0 < b2");
  }
}

DiracWeights::DiracWeights(double b1, double b2, Rationality r) : DiracWeights(b1, b2) {
  if (r.n1 < 1 || r.n2 < 1 || !(r.b0 > 0.0)) {
    throw SpectralError(ErrorKind::InvalidArgument, "rationality needs n1, n2 >= 1 and b0 > 0");
  }
  if (std::gcd(r.n1, r.n2) != 1) {
    throw SpectralError(ErrorKind::InvalidArgument, "rationality needs gcd(n1, n2) = 1");
  }
  const double e1 = std::abs(b1 + r.n1 * r.b0);
  const double e2 = std::abs(b2 - r.n2 * r.b0);
  if (e1 > 1e-12 * std::abs(b1) || e2 > 1e-12 * std::abs(b2)) {
    throw SpectralError(ErrorKind::InvalidArgument,
                        "declared rationality does not match b1 = -n1 b0, b2 = n2 b0");
  }
  rationality_ = r;
}

DiracWeights DiracWeights::dirac() { return DiracWeights(-1.0, 1.0, Rationality{1, 1, 1.0}); }

DiracWeights DiracWeights::rational(int n1, int n2, double b0) {
  return DiracWeights(-n1 * b0, n2 * b0, Rationality{n1, n2, b0});
}

bool DiracWeights::is_symmetric() const noexcept {
  return std::abs(b1_ + b2_) <= 1e-12 * b2_;
}

}  // namespace dirac
