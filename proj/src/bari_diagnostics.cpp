#include "dirac/bari_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace dirac {

namespace {

double bj(const DiracWeights& w, int j) { return j == 1 ? w.b1() : w.b2(); }

CanonicalBC mirrored(const CanonicalBC& bc) { return CanonicalBC{bc.d, bc.c, bc.b, bc.a}; }

DiracWeights mirrored(const DiracWeights& w) { return DiracWeights(-w.b2(), -w.b1()); }

Complex z_of(Complex lambda, const CanonicalBC& bc, const DiracWeights& w) {
  const Complex e1 = std::exp(kI * w.b1() * lambda);
  const Complex e2 = std::exp(-kI * w.b2() * lambda);
  return (1.0 + bc.d * e2) * std::conj(1.0 + bc.a * e1);
}

// Outer half of a window: |n| above half the largest |n|.
template <typename F>
std::pair<double, double> tail_max(const Spectrum& zeros, F value) {
  int max_index = 0;
  for (const auto& z : zeros) max_index = std::max(max_index, std::abs(z.index));
  double half = 0.0;
  double quarter = 0.0;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const int n = std::abs(zeros[i].index);
    if (2 * n > max_index) half = std::max(half, value(i));
    if (4 * n > 3 * max_index) quarter = std::max(quarter, value(i));
  }
  return {half, quarter};
}

}  // namespace

double e_factor(Complex lambda, int j, int sign, const DiracWeights& w) {
  if ((j != 1 && j != 2) || (sign != 1 && sign != -1)) {
    throw SpectralError(ErrorKind::InvalidArgument, "e_factor needs j in {1,2} and sign in {+1,-1}");
  }
  const double t = -2.0 * sign * bj(w, j) * lambda.imag();
  if (std::abs(t) < 1e-5) return 1.0 + t / 2.0 + t * t / 6.0;
  return std::expm1(t) / t;
}

const char* to_string(PairBranch branch) {
  switch (branch) {
    case PairBranch::General: return "general";
    case PairBranch::Mirror: return "mirror";
    case PairBranch::QuasiPeriodic1: return "quasi-periodic-1";
    case PairBranch::QuasiPeriodic2: return "quasi-periodic-2";
  }
  return "unknown";
}

PairBranch pair_branch(Complex lambda, const CanonicalBC& bc, const DiracWeights& w) {
  if (bc.b != Complex{0.0}) return PairBranch::General;
  if (bc.c != Complex{0.0}) return PairBranch::Mirror;
  const double r1 = std::abs(1.0 + bc.a * std::exp(kI * w.b1() * lambda));
  const double r2 = std::abs(1.0 + bc.d * std::exp(-kI * w.b2() * lambda));
  return r1 <= r2 ? PairBranch::QuasiPeriodic1 : PairBranch::QuasiPeriodic2;
}

EigenPair unperturbed_pair(const Eigenvalue& zero, const CanonicalBC& bc, const DiracWeights& w,
                           int m) {
  if (zero.multiplicity > 1) {
    throw SpectralError(ErrorKind::MultipleEigenvalue, "analytic pair needs a simple eigenvalue");
  }
  EigenPair out;
  out.index = zero.index;
  out.lambda = zero.value;
  out.grid = uniform_grid(m);
  const Complex lam = zero.value;
  const Complex lam_bar = std::conj(lam);
  const double b1 = w.b1();
  const double b2 = w.b2();

  switch (pair_branch(lam, bc, w)) {
    case PairBranch::General: {
      const Complex e1 = std::exp(kI * b1 * lam);
      const Complex e2 = std::exp(-kI * b2 * lam);
      const Complex p1 = 1.0 + bc.a * e1;
      const Complex p2 = std::conj(1.0 + bc.d * e2);
      const Complex gb = -w.beta() * std::conj(bc.b);
      for (double x : out.grid) {
        out.f.push_back(Vec2(bc.b * std::exp(kI * b1 * lam * x), -p1 * std::exp(kI * b2 * lam * x)));
        out.g.push_back(Vec2(p2 * std::exp(kI * b1 * lam_bar * x), gb * std::exp(kI * b2 * lam_bar * x)));
      }
      break;
    }
    case PairBranch::Mirror: {
      // y(x) = P y~(1 - x), P exchanging the components.
      const EigenPair inner = unperturbed_pair(zero, mirrored(bc), mirrored(w), m);
      const std::size_t n = inner.grid.size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto& fv = inner.f[n - 1 - i];
        const auto& gv = inner.g[n - 1 - i];
        out.f.push_back(Vec2(fv(1), fv(0)));
        out.g.push_back(Vec2(gv(1), gv(0)));
      }
      break;
    }
    case PairBranch::QuasiPeriodic1:
      for (double x : out.grid) {
        out.f.push_back(Vec2(std::exp(kI * b1 * lam * x), 0.0));
        out.g.push_back(Vec2(std::exp(kI * b1 * lam_bar * x), 0.0));
      }
      break;
    case PairBranch::QuasiPeriodic2:
      for (double x : out.grid) {
        out.f.push_back(Vec2(0.0, std::exp(kI * b2 * lam * x)));
        out.g.push_back(Vec2(0.0, std::exp(kI * b2 * lam_bar * x)));
      }
      break;
  }
  return out;
}

PairClosedForm pair_closed_form(Complex lambda, const CanonicalBC& bc, const DiracWeights& w) {
  PairClosedForm out;
  switch (pair_branch(lambda, bc, w)) {
    case PairBranch::Mirror: return pair_closed_form(lambda, mirrored(bc), mirrored(w));
    case PairBranch::QuasiPeriodic1:
      out.norm_f_sq = e_factor(lambda, 1, 1, w);
      out.norm_g_sq = e_factor(lambda, 1, -1, w);
      out.inner_fg = 1.0;
      out.z = z_of(lambda, bc, w);
      return out;
    case PairBranch::QuasiPeriodic2:
      out.norm_f_sq = e_factor(lambda, 2, 1, w);
      out.norm_g_sq = e_factor(lambda, 2, -1, w);
      out.inner_fg = 1.0;
      out.z = z_of(lambda, bc, w);
      return out;
    case PairBranch::General: break;
  }
  const double beta = w.beta();
  const Complex e1 = std::exp(kI * w.b1() * lambda);
  const Complex e2 = std::exp(-kI * w.b2() * lambda);
  const Complex p1 = 1.0 + bc.a * e1;
  const Complex p2 = 1.0 + bc.d * e2;
  const double e1p = e_factor(lambda, 1, 1, w);
  const double e1m = e_factor(lambda, 1, -1, w);
  const double e2p = e_factor(lambda, 2, 1, w);
  const double e2m = e_factor(lambda, 2, -1, w);
  const double bb = std::norm(bc.b);
  out.norm_f_sq = bb * e1p + std::norm(p1) * e2p;
  out.norm_g_sq = std::norm(p2) * e1m + beta * beta * bb * e2m;
  out.inner_fg = bc.b * (p2 + beta * p1);
  out.z = p2 * std::conj(p1);
  out.tau[0] = bb * std::norm(p2) * (e1p * e1m - 1.0);
  out.tau[1] = beta * beta * bb * std::norm(p1) * (e2p * e2m - 1.0);
  out.tau[2] = beta * beta * bb * bb * e1p * e2m + std::norm(out.z) * e2p * e1m -
               2.0 * beta * bb * out.z.real();
  out.tau[3] = std::norm(out.z - beta * bb);
  return out;
}

PairDiagnostic pair_diagnostic(const EigenPair& pair, const CanonicalBC& bc, const DiracWeights& w,
                               bool analytic_pair, const Tolerances& tol) {
  (void)tol;
  PairDiagnostic d;
  d.n = pair.index;
  d.lambda = pair.lambda;
  d.norm_f = norm(pair.f);
  d.norm_g = norm(pair.g);
  d.inner_fg = inner(pair.f, pair.g);
  if (!(std::abs(d.inner_fg) > 0.0)) {
    throw SpectralError(ErrorKind::ZeroInnerProduct, "(f, g) vanishes");
  }
  d.alpha = d.norm_f * d.norm_g / std::abs(d.inner_fg);
  d.defect = d.alpha * d.alpha - 1.0;

  // f' = f/|f|, g' = |f| g / conj((f, g)), so that (f', g') = 1.
  const Complex gs = d.norm_f / std::conj(d.inner_fg);
  VectorField diff(pair.f.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = pair.f[i] / d.norm_f - gs * pair.g[i];
  const double dist = norm(diff);
  d.rescaled_distance = dist * dist;

  d.z = z_of(pair.lambda, bc, w);
  const PairBranch branch = pair_branch(pair.lambda, bc, w);
  if (analytic_pair && (branch == PairBranch::General || branch == PairBranch::Mirror)) {
    d.tau = pair_closed_form(pair.lambda, bc, w).tau;
    d.tau_available = true;
  }
  return d;
}

const char* to_string(BariKind kind) {
  switch (kind) {
    case BariKind::SelfAdjointBari: return "SelfAdjointBari";
    case BariKind::NotBari: return "NotBari";
    case BariKind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

BariVerdict bari_c0_check(const CanonicalBC& bc, const DiracWeights& w, const Spectrum& zeros,
                          const ZeroSequences& sequences, const Tolerances& tol) {
  if (zeros.size() != sequences.z.size()) {
    throw SpectralError(ErrorKind::InvalidArgument, "zeros and sequences differ in length");
  }
  BariVerdict v;
  const double lim_tol = 50.0 * tol.quadrature;
  std::tie(v.im_trend, v.im_trend_quarter) =
      tail_max(zeros, [&](std::size_t i) { return std::abs(zeros[i].value.imag()); });
  const double bc_abs = std::abs(bc.b * bc.c);
  std::tie(v.z_trend, v.z_trend_quarter) =
      tail_max(zeros, [&](std::size_t i) { return std::abs(sequences.z[i] - bc_abs); });

  const bool trend = v.im_trend_quarter <= v.im_trend && v.z_trend_quarter <= v.z_trend;
  if (bc.b == Complex{0.0} && bc.c == Complex{0.0}) {
    v.route = "quasi-periodic";
    v.ratio_ok = std::abs(std::abs(bc.a) - 1.0) <= tol.self_adjoint &&
                 std::abs(std::abs(bc.d) - 1.0) <= tol.self_adjoint;
    v.flags_pass = v.ratio_ok && v.im_trend <= lim_tol && trend;
  } else {
    v.route = "general";
    const double lhs = std::abs(bc.c);
    const double rhs = w.beta() * std::abs(bc.b);
    v.ratio_ok = std::abs(lhs - rhs) <= tol.self_adjoint * (1.0 + lhs + rhs);
    v.flags_pass = v.ratio_ok && v.im_trend <= lim_tol && v.z_trend <= lim_tol && trend;
  }
  v.self_adjoint = is_self_adjoint(bc, w, tol);
  if (v.flags_pass && v.self_adjoint) {
    v.verdict = BariKind::SelfAdjointBari;
  } else if (!v.flags_pass && !v.self_adjoint) {
    v.verdict = BariKind::NotBari;
  } else {
    v.verdict = BariKind::Inconclusive;
  }
  return v;
}

ClosenessSums closeness_sums(const std::vector<std::pair<int, double>>& terms, double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw SpectralError(ErrorKind::InvalidArgument, "p must lie in [1, 2]");
  auto sorted = terms;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) {
    if (std::abs(l.first) != std::abs(r.first)) return std::abs(l.first) < std::abs(r.first);
    return l.first < r.first;
  });
  ClosenessSums out;
  int max_index = 0;
  for (const auto& t : sorted) max_index = std::max(max_index, std::abs(t.first));
  double acc = 0.0;
  for (const auto& [n, value] : sorted) {
    out.order.push_back(n);
    out.terms.push_back(value);
    if (p == 1.0) {
      acc = std::max(acc, value);
    } else {
      acc += std::pow(value, p / (p - 1.0));
    }
    out.partial_sums.push_back(acc);
    if (2 * std::abs(n) > max_index) out.tail_sup = std::max(out.tail_sup, value);
  }
  return out;
}

ClosenessSums closeness_sums(const std::vector<PairDiagnostic>& diags, double p) {
  std::vector<std::pair<int, double>> terms;
  for (const auto& d : diags) terms.emplace_back(d.n, std::sqrt(std::max(0.0, d.defect)));
  return closeness_sums(terms, p);
}

}  // namespace dirac
