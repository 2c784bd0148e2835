#include "dirac/perturbed_solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "dirac/contour.hpp"

namespace dirac {

namespace {

constexpr double kBreakTol = 1e-14;

Mat2 expm2(const Mat2& m) {
  // exp(M) = e^t (cosh s I + sinh(s)/s N), N = M - t I, s^2 = -det N.
  const Complex t = 0.5 * m.trace();
  Mat2 n = m;
  n(0, 0) -= t;
  n(1, 1) -= t;
  const Complex s = std::sqrt(-n.determinant());
  Complex ch;
  Complex sh_over_s;
  if (std::abs(s) < 1e-4) {
    const Complex s2 = s * s;
    ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0;
    sh_over_s = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
  } else {
    ch = std::cosh(s);
    sh_over_s = std::sinh(s) / s;
  }
  Mat2 out = sh_over_s * n;
  out(0, 0) += ch;
  out(1, 1) += ch;
  return std::exp(t) * out;
}

Mat2 generator(const Potential& q, const DiracWeights& w, Complex lambda, double x) {
  // i B (lambda - Q(x))
  Mat2 a;
  a << kI * w.b1() * lambda, -kI * w.b1() * q.q12(x),  //
      -kI * w.b2() * q.q21(x), kI * w.b2() * lambda;
  return a;
}

Mat2 magnus_step(const Potential& q, const DiracWeights& w, Complex lambda, double x, double h) {
  static const double offset = std::sqrt(3.0) / 6.0;
  const Mat2 a1 = generator(q, w, lambda, x + h * (0.5 - offset));
  const Mat2 a2 = generator(q, w, lambda, x + h * (0.5 + offset));
  const Mat2 omega = 0.5 * h * (a1 + a2) + (std::sqrt(3.0) / 12.0) * h * h * (a2 * a1 - a1 * a2);
  return expm2(omega);
}

std::vector<double> breakpoints(const std::vector<double>& grid, const Potential& q) {
  std::vector<double> pts = grid;
  if (q.kind() == PotentialKind::Sampled) {
    const std::size_t ms = q.samples12().size();
    for (std::size_t i = 0; i < ms; ++i) pts.push_back(static_cast<double>(i) / (ms - 1));
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (out.empty() || p - out.back() > kBreakTol) out.push_back(p);
  }
  out.back() = 1.0;
  return out;
}

// Phi at every breakpoint, with each piece split into split * ceil(steps_per_unit * len) steps.
std::vector<Mat2> integrate(const Potential& q, const DiracWeights& w, Complex lambda,
                            const std::vector<double>& pts, double steps_per_unit, int split,
                            int& total) {
  std::vector<Mat2> out;
  out.reserve(pts.size());
  Mat2 phi = Mat2::Identity();
  out.push_back(phi);
  total = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = pts[i + 1] - pts[i];
    const int k = split * std::max(1, static_cast<int>(std::ceil(len * steps_per_unit - 1e-9)));
    const double h = len / k;
    for (int s = 0; s < k; ++s) phi = magnus_step(q, w, lambda, pts[i] + s * h, h) * phi;
    total += k;
    out.push_back(phi);
  }
  return out;
}

Mat2 exact_free(const DiracWeights& w, Complex lambda, double x) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = std::exp(kI * w.b1() * lambda * x);
  m(1, 1) = std::exp(kI * w.b2() * lambda * x);
  return m;
}

// Boundary matrix [U_j(Phi_k)] for rows acting on (y1(0), y2(0), y1(1), y2(1)).
Mat2 boundary_matrix(const BoundaryMatrix& rows, const Mat2& phi1) {
  return rows.leftCols<2>() + rows.rightCols<2>() * phi1;
}

double scale_of(const CanonicalBC& bc) {
  return 2.0 + std::abs(bc.a) + std::abs(bc.d) + std::abs(bc.u());
}

}  // namespace

Potential Potential::zero() { return Potential{}; }

Potential Potential::callable(Profile q12, Profile q21, double p_class) {
  if (!q12 || !q21) throw SpectralError(ErrorKind::InvalidArgument, "potential profiles must be set");
  Potential p;
  p.kind_ = PotentialKind::Callable;
  p.p_class_ = p_class;
  p.constant_ = false;
  p.f12_ = std::move(q12);
  p.f21_ = std::move(q21);
  return p;
}

Potential Potential::constant(Complex q12, Complex q21) {
  if (q12 == Complex{0.0} && q21 == Complex{0.0}) return zero();
  Potential p = callable([q12](double) { return q12; }, [q21](double) { return q21; }, 2.0);
  p.constant_ = true;
  return p;
}

Potential Potential::sampled(std::vector<Complex> q12, std::vector<Complex> q21, double p_class) {
  if (q12.size() != q21.size() || q12.size() < 2) {
    throw SpectralError(ErrorKind::InvalidArgument, "sampled potential needs two arrays of equal size >= 2");
  }
  Potential p;
  p.kind_ = PotentialKind::Sampled;
  p.p_class_ = p_class;
  p.constant_ = false;
  p.s12_ = std::move(q12);
  p.s21_ = std::move(q21);
  return p;
}

namespace {

Complex interpolate(const std::vector<Complex>& s, double x) {
  const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(s.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(pos), s.size() - 2);
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * s[i] + t * s[i + 1];
}

}  // namespace

Complex Potential::q12(double x) const {
  switch (kind_) {
    case PotentialKind::Zero: return 0.0;
    case PotentialKind::Callable: return f12_(x);
    case PotentialKind::Sampled: return interpolate(s12_, x);
  }
  return 0.0;
}

Complex Potential::q21(double x) const {
  switch (kind_) {
    case PotentialKind::Zero: return 0.0;
    case PotentialKind::Callable: return f21_(x);
    case PotentialKind::Sampled: return interpolate(s21_, x);
  }
  return 0.0;
}

Potential Potential::adjoint() const {
  Potential p = *this;
  switch (kind_) {
    case PotentialKind::Zero: break;
    case PotentialKind::Callable:
      p.f12_ = [f = f21_](double x) { return std::conj(f(x)); };
      p.f21_ = [f = f12_](double x) { return std::conj(f(x)); };
      break;
    case PotentialKind::Sampled:
      p.s12_.clear();
      p.s21_.clear();
      for (const auto& v : s21_) p.s12_.push_back(std::conj(v));
      for (const auto& v : s12_) p.s21_.push_back(std::conj(v));
      break;
  }
  return p;
}

double Potential::l2_norm() const {
  const auto x = uniform_grid(2049);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = std::norm(q12(x[i])) + std::norm(q21(x[i]));
  return std::sqrt(simpson(v));
}

FundamentalMatrix fundamental_matrix(const Potential& q, const DiracWeights& w, Complex lambda,
                                     int m, const Tolerances& tol) {
  FundamentalMatrix out;
  out.lambda = lambda;
  out.grid = (m == 2) ? std::vector<double>{0.0, 1.0} : uniform_grid(m);
  if (q.is_zero()) {
    for (double x : out.grid) out.values.push_back(exact_free(w, lambda, x));
    out.phi_at_1 = out.values.back();
    return out;
  }
  const auto pts = breakpoints(out.grid, q);
  const double bmax = std::max(-w.b1(), w.b2());
  const double rate = std::max(64.0, 4.0 * std::abs(lambda) * bmax);
  int split = 1;
  int total = 0;
  std::vector<Mat2> coarse = integrate(q, w, lambda, pts, rate, split, total);
  if (!q.is_constant()) {
    // Halve steps until two successive solutions agree.
    for (;;) {
      split *= 2;
      std::vector<Mat2> fine = integrate(q, w, lambda, pts, rate, split, total);
      double change = 0.0;
      double size = 1.0;
      for (std::size_t i = 0; i < fine.size(); ++i) {
        change = std::max(change, (fine[i] - coarse[i]).norm());
        size = std::max(size, fine[i].norm());
      }
      coarse = std::move(fine);
      if (change <= tol.ode * size) break;
      if (2 * total > tol.max_ode_steps) {
        throw SpectralError(ErrorKind::StepUnderflow, "ODE step count exceeds max_ode_steps");
      }
    }
  }
  out.steps = total;
  std::size_t j = 0;
  for (double x : out.grid) {
    while (std::abs(pts[j] - x) > kBreakTol && j + 1 < pts.size()) ++j;
    out.values.push_back(coarse[j]);
  }
  out.phi_at_1 = coarse.back();
  return out;
}

Mat2 transfer_matrix(const Potential& q, const DiracWeights& w, Complex lambda,
                     const Tolerances& tol) {
  if (q.is_zero()) return exact_free(w, lambda, 1.0);
  return fundamental_matrix(q, w, lambda, 2, tol).phi_at_1;
}

Complex delta_q(Complex lambda, const CanonicalBC& bc, const DiracWeights& w, const Potential& q,
                const Tolerances& tol) {
  const Mat2 phi = transfer_matrix(q, w, lambda, tol);
  return bc.d + bc.a * phi.determinant() + bc.u() * phi(0, 0) + phi(1, 1) + bc.c * phi(0, 1) -
         bc.b * phi(1, 0);
}

Complex delta_raw(Complex lambda, const RawBC& bc, const DiracWeights& w, const Potential& q,
                  const Tolerances& tol) {
  return boundary_matrix(bc.matrix(), transfer_matrix(q, w, lambda, tol)).determinant();
}

PerturbedSpectrum perturbed_zeros(const CanonicalBC& bc, const DiracWeights& w, const Potential& q,
                                  const SpectrumWindow& win, const Tolerances& tol) {
  win.validate();
  PerturbedSpectrum out;
  // One extra zero on each side so every window entry has two neighbours.
  SpectrumWindow wide = win;
  if (wide.n_side) {
    *wide.n_side += 1;
  } else {
    wide.re_range->first -= 2.0 * w.mean_gap();
    wide.re_range->second += 2.0 * w.mean_gap();
  }
  const Spectrum ref = unperturbed_zeros(bc, w, wide, tol);

  const double scale = scale_of(bc);
  contour::Options opts;
  opts.zero_floor = 1e-12 * scale;
  opts.multiplicity_diameter = tol.multiplicity;
  opts.samples_per_unit = std::max(4.0, 2.0 * (w.b2() - w.b1()));
  opts.newton_tol = 1e-11;
  opts.newton_iterations = 40;
  const contour::Function f = [&](Complex z) { return delta_q(z, bc, w, q, tol); };
  const contour::Function df = [&](Complex z) {
    const double h = 1e-6 * (1.0 + std::abs(z));
    return (f(z + h) - f(z - h)) / (2.0 * h);
  };

  for (std::size_t i = 0; i < ref.size(); ++i) {
    const Eigenvalue& z0 = ref[i];
    const bool inside = win.n_side ? std::abs(z0.index) <= *win.n_side
                                   : z0.value.real() >= win.re_range->first &&
                                         z0.value.real() <= win.re_range->second;
    if (!inside) continue;
    double gap = std::numeric_limits<double>::infinity();
    if (i > 0) gap = std::min(gap, std::abs(z0.value - ref[i - 1].value));
    if (i + 1 < ref.size()) gap = std::min(gap, std::abs(z0.value - ref[i + 1].value));
    if (!std::isfinite(gap)) gap = w.mean_gap();
    const double r0 = 0.5 * gap;

    std::optional<Eigenvalue> found;
    for (double growth : {1.0, 2.0, 4.0}) {
      double r = r0 * growth;
      int count = -1;
      for (int attempt = 0; attempt <= tol.max_contour_retries && count < 0; ++attempt) {
        try {
          count = contour::winding_number(f, z0.value, r, opts);
        } catch (const SpectralError& e) {
          if (e.kind() != ErrorKind::ContourThroughZero) throw;
          r *= 0.93;
        }
      }
      if (count <= 0) continue;
      const contour::Box box{z0.value.real() - r, z0.value.real() + r, z0.value.imag() - r,
                             z0.value.imag() + r};
      if (count == 1) {
        if (auto z = contour::newton(f, df, z0.value, 1, opts, &box);
            z && std::abs(*z - z0.value) <= r) {
          found = Eigenvalue{z0.index, *z, 1, 0.0, ZeroMethod::Localized};
          break;
        }
      }
      try {
        auto located = contour::locate_zeros(f, df, box, opts);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& lz : located) {
          const double dist = std::abs(lz.value - z0.value);
          if (dist <= r && dist < best) {
            best = dist;
            found = Eigenvalue{z0.index, lz.value, lz.multiplicity, 0.0, ZeroMethod::Localized};
          }
        }
      } catch (const SpectralError& e) {
        if (e.kind() != ErrorKind::ContourThroughZero) throw;
      }
      if (found) break;
    }
    if (found) {
      found->residual = std::abs(f(found->value));
      out.zeros.push_back(*found);
      out.unperturbed.push_back(z0);
    } else {
      out.failed_indices.push_back(z0.index);
    }
  }
  return out;
}

EigenFunction eigenfunction(Complex lambda, const RawBC& bc, const DiracWeights& w,
                            const Potential& q, int m, const Tolerances& tol) {
  const FundamentalMatrix fm = fundamental_matrix(q, w, lambda, m, tol);
  const Mat2 bm = boundary_matrix(bc.matrix(), fm.phi_at_1);
  Eigen::JacobiSVD<Mat2> svd(bm, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double ref = std::max(1.0, sv(0));
  if (sv(1) > 1e-6 * ref) {
    throw SpectralError(ErrorKind::NotAnEigenvalue, "boundary matrix has no numerical nullspace");
  }
  EigenFunction out;
  out.lambda = lambda;
  out.grid = fm.grid;
  out.degenerate_nullspace = sv(0) < tol.multiplicity;
  const Vec2 coeff = svd.matrixV().col(1);
  for (const auto& phi : fm.values) out.f.push_back(phi * coeff);

  const double nrm = norm(out.f);
  if (!(nrm > 1e-8)) throw SpectralError(ErrorKind::NotAnEigenvalue, "eigenfunction vanishes");
  Complex phase{1.0};
  for (const auto& v : out.f) {
    if (v.norm() / nrm > 1e-6) {
      const Complex pivot = std::abs(v(0)) / nrm > 1e-6 ? v(0) : v(1);
      phase = std::conj(pivot) / std::abs(pivot);
      break;
    }
  }
  for (auto& v : out.f) v *= phase / nrm;

  Eigen::Matrix<Complex, 4, 1> ends;
  ends << out.f.front(), out.f.back();
  out.bc_residual = (bc.matrix() * ends).cwiseAbs().maxCoeff();
  return out;
}

EigenFunction eigenfunction(Complex lambda, const CanonicalBC& bc, const DiracWeights& w,
                            const Potential& q, int m, const Tolerances& tol) {
  return eigenfunction(lambda, bc.to_raw(), w, q, m, tol);
}

EigenFunction adjoint_eigenfunction(Complex lambda, const CanonicalBC& bc, const DiracWeights& w,
                                    const Potential& q, int m, const Tolerances& tol) {
  return eigenfunction(std::conj(lambda), adjoint_bc(bc, w), w, q.adjoint(), m, tol);
}

}  // namespace dirac
