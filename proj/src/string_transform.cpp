#include "dirac/string_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dirac {

namespace {

struct WeightProfiles {
  std::vector<double> grid;
  std::vector<Complex> a1;
  std::vector<Complex> a2;
  std::vector<Complex> w1;
  std::vector<Complex> w2;
};

// w_j(x) = exp(k int_0^x (b_j a1 + a2)), k = b1 b2 / (b2 - b1).
WeightProfiles weight_profiles(const StringProblem& sp, const std::vector<double>& grid) {
  const double b1 = 1.0 / sp.beta1;
  const double b2 = 1.0 / sp.beta2;
  const double k = b1 * b2 / (b2 - b1);
  WeightProfiles out;
  out.grid = grid;
  const std::size_t n = grid.size();
  out.a1.resize(n);
  out.a2.resize(n);
  std::vector<Complex> g1(n), g2(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.a1[i] = sp.eval_a1(grid[i]);
    out.a2[i] = sp.eval_a2(grid[i]);
    g1[i] = b1 * out.a1[i] + out.a2[i];
    g2[i] = b2 * out.a1[i] + out.a2[i];
  }
  const auto i1 = cumulative_integral(g1);
  const auto i2 = cumulative_integral(g2);
  out.w1.resize(n);
  out.w2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.w1[i] = std::exp(k * i1[i]);
    out.w2[i] = std::exp(k * i2[i]);
  }
  return out;
}

double h_scale(const StringProblem& sp) {
  return std::max({std::abs(sp.h0), std::abs(sp.h1), std::abs(sp.h2)});
}

}  // namespace

void StringProblem::validate() const {
  if (!(beta1 < 0.0 && beta2 > 0.0) || !std::isfinite(beta1) || !std::isfinite(beta2)) {
    throw SpectralError(ErrorKind::InvalidArgument, "string problem needs beta1 < 0 < beta2");
  }
  if (std::abs(h1) + std::abs(h2) == 0.0) {
    throw SpectralError(ErrorKind::InvalidArgument, "string problem needs |h1| + |h2| > 0");
  }
}

std::vector<Complex> cumulative_integral(const std::vector<Complex>& f) {
  const std::size_t n = f.size();
  std::vector<Complex> out(n, Complex{0.0});
  if (n < 2) return out;
  const double h = 1.0 / static_cast<double>(n - 1);
  if (n < 4) {
    for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
  }
  // cubic through four neighbouring samples on every interval
  out[1] = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
  for (std::size_t i = 1; i + 2 < n; ++i) {
    out[i + 1] = out[i] + h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
  }
  out[n - 1] = out[n - 2] +
               h / 24.0 * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]);
  return out;
}

std::vector<Complex> grid_derivative(const std::vector<Complex>& f) {
  const std::size_t n = f.size();
  if (n < 5) throw SpectralError(ErrorKind::InvalidArgument, "derivative needs at least five samples");
  const double h = 1.0 / static_cast<double>(n - 1);
  const double s = 1.0 / (12.0 * h);
  std::vector<Complex> d(n);
  d[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = s * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  }
  d[n - 2] = s * (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]);
  d[n - 1] = s * (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                  3.0 * f[n - 5]);
  return d;
}

DiracReduction reduce(const StringProblem& sp, int m, const Tolerances& tol) {
  sp.validate();
  if (m < 2) throw SpectralError(ErrorKind::InvalidArgument, "reduction grid needs m >= 2");
  const double b1 = 1.0 / sp.beta1;
  const double b2 = 1.0 / sp.beta2;

  const Complex lead = b2 * sp.h1 + sp.h2;
  const double tol_det = det_tolerance(h_scale(sp), tol);
  if (std::abs(lead) <= tol_det) {
    throw SpectralError(ErrorKind::DegenerateBoundary,
                        "b2 h1 + h2 vanishes; the string conditions do not reduce");
  }

  DiracReduction red;
  red.weights = (b1 == -b2) ? DiracWeights::rational(1, 1, b2) : DiracWeights(b1, b2);

  const auto grid = uniform_grid(std::max(m, 9));
  const auto prof = weight_profiles(sp, grid);
  red.grid = grid;
  red.w1 = prof.w1;
  red.w2 = prof.w2;
  red.w1_at_1 = prof.w1.back();
  red.w2_at_1 = prof.w2.back();
  red.w_at_1 = red.w1_at_1 * red.w2_at_1;

  const auto fine = weight_profiles(sp, uniform_grid(2 * static_cast<int>(grid.size()) - 1));
  red.quadrature_change = std::abs(fine.w1.back() * fine.w2.back() - red.w_at_1);

  bool damped = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (prof.a1[i] != Complex{0.0} || prof.a2[i] != Complex{0.0}) {
      damped = true;
      break;
    }
  }
  if (damped) {
    // Q = V2^{-1} (Q2 - diag Q2) V2 with V2 = diag(w1, 1/w2)
    const Complex pre = kI / (b2 - b1);
    std::vector<Complex> q12(grid.size()), q21(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Complex w = prof.w1[i] * prof.w2[i];
      q12[i] = pre * (b2 * b2 * prof.a1[i] + b2 * prof.a2[i]) / w;
      q21[i] = -pre * w * (b1 * b1 * prof.a1[i] + b1 * prof.a2[i]);
    }
    red.q = Potential::sampled(std::move(q12), std::move(q21));
  } else {
    red.q = Potential::zero();
  }

  const Complex tail = b1 * sp.h1 + sp.h2;
  red.c_small = std::abs(tail) <= tol_det;

  BoundaryMatrix rows;
  rows << 1.0, 1.0, 0.0, 0.0,
      b1 * sp.h0, b2 * sp.h0, tail * red.w1_at_1, lead / red.w2_at_1;
  red.raw_bc = RawBC(rows);

  red.canonical_bc.a = 0.0;
  red.canonical_bc.b = 1.0;
  red.canonical_bc.c = tail * red.w_at_1 / lead;
  red.canonical_bc.d = (b2 - b1) * sp.h0 * red.w2_at_1 / lead;
  return red;
}

bool string_bari_condition(const StringProblem& sp, int m, const Tolerances& tol) {
  const DiracReduction red = reduce(sp, m, tol);
  const CanonicalBC& bc = red.canonical_bc;
  if (red.c_small || !is_regular(bc, tol)) {
    throw SpectralError(ErrorKind::Inapplicable, "reduced boundary conditions are not regular");
  }
  if (!classify_strict(bc, red.weights, tol).yes()) {
    throw SpectralError(ErrorKind::Inapplicable,
                        "reduced boundary conditions are not strictly regular");
  }

  const bool sa = is_self_adjoint(bc, red.weights, tol);

  const double tol_det = det_tolerance(h_scale(sp), tol);
  const bool h0_zero = std::abs(sp.h0) <= tol_det;
  const bool symmetric =
      std::abs(sp.beta1 + sp.beta2) <= 1e-12 * (std::abs(sp.beta1) + std::abs(sp.beta2));

  // With b1 = -b2, |c|^2 - 1 = expm1(2 b2 (rhs - lhs)).
  double defect = std::numeric_limits<double>::infinity();
  if (symmetric) {
    std::vector<double> re_a2(red.grid.size());
    for (std::size_t i = 0; i < red.grid.size(); ++i) re_a2[i] = sp.eval_a2(red.grid[i]).real();
    const double lhs = simpson(re_a2);
    const double rhs = sp.beta2 * std::log(std::abs((sp.beta2 * sp.h2 - sp.h1) /
                                                    (sp.beta2 * sp.h2 + sp.h1)));
    defect = std::abs(std::expm1(2.0 * (rhs - lhs) / sp.beta2));
  }
  const bool formula = h0_zero && symmetric && defect <= tol.self_adjoint;

  if (formula != sa) {
    const bool borderline = h0_zero && symmetric && defect >= 0.5 * tol.self_adjoint &&
                            defect <= 2.0 * tol.self_adjoint;
    if (!borderline) {
      throw SpectralError(ErrorKind::InternalInconsistency,
                          "string condition disagrees with self-adjointness of the reduction");
    }
    return sa;
  }
  return formula;
}

double similarity_residual(const StringProblem& sp, const DiracReduction& red,
                           const EigenFunction& eigen) {
  const std::size_t n = eigen.grid.size();
  if (n < 5 || eigen.f.size() != n) {
    throw SpectralError(ErrorKind::InvalidArgument, "eigenfunction needs at least five samples");
  }
  const double b1 = red.weights.b1();
  const double b2 = red.weights.b2();
  const Complex lambda = eigen.lambda;
  const auto prof = weight_profiles(sp, eigen.grid);

  // (y1', y2) = V1 V2 f
  std::vector<Complex> p(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z1 = prof.w1[i] * eigen.f[i](0);
    const Complex z2 = eigen.f[i](1) / prof.w2[i];
    p[i] = b1 * z1 + b2 * z2;
    v[i] = z1 + z2;
  }
  const auto y1 = cumulative_integral(p);
  const auto dp = grid_derivative(p);
  const auto dv = grid_derivative(v);

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(p[i]), std::abs(v[i])});
  if (scale == 0.0) throw SpectralError(ErrorKind::InvalidArgument, "eigenfunction vanishes");

  const double beta_sum = sp.beta1 + sp.beta2;
  const double beta_prod = sp.beta1 * sp.beta2;
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex r0 = -kI * v[i] - lambda * y1[i];
    const Complex r1 = -kI * dv[i] - lambda * p[i];
    const Complex r2 = -kI * (-beta_prod * dp[i] + beta_sum * dv[i] - prof.a1[i] * p[i] -
                              prof.a2[i] * v[i]) -
                       lambda * v[i];
    res = std::max({res, std::abs(r0), std::abs(r1), std::abs(r2)});
  }
  const double hs = std::max(1.0, h_scale(sp));
  res = std::max(res, std::abs(v.front()));
  res = std::max(res, std::abs(sp.h0 * p.front() + sp.h1 * p.back() + sp.h2 * v.back()) / hs);
  return res / (scale * (1.0 + std::abs(lambda)));
}

}  // namespace dirac
