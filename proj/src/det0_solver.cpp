#include "dirac/det0_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "dirac/contour.hpp"
#include "dirac/polynomial.hpp"

namespace dirac {

namespace {

constexpr double kTieTol = 1e-9;

void require_regular(const CanonicalBC& bc, const Tolerances& tol) {
  if (!is_regular(bc, tol)) {
    throw SpectralError(ErrorKind::NotRegular, "boundary conditions are not regular (ad - bc = 0)");
  }
}

double scale_of(const CanonicalBC& bc) {
  return 2.0 + std::abs(bc.a) + std::abs(bc.d) + std::abs(bc.u());
}

// Smallest y >= 0 (up to bisection accuracy, from above) where the monotone
// predicate becomes true.
template <typename Pred>
double threshold(Pred ok) {
  if (ok(0.0)) return 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (++doublings > 60) {
      throw SpectralError(ErrorKind::NotRegular, "no zero-free half plane found");
    }
  }
  double lo = hi == 1.0 ? 0.0 : 0.5 * hi;
  for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

Eigenvalue make_zero(Complex value, int multiplicity, ZeroMethod method, const CanonicalBC& bc,
                     const DiracWeights& w) {
  Eigenvalue e;
  e.value = value;
  e.multiplicity = multiplicity;
  e.method = method;
  e.residual = std::abs(delta0(value, bc, w));
  return e;
}

bool same_point(Complex x, Complex y) { return std::abs(x - y) <= kTieTol * (1.0 + std::abs(x)); }

// Merges coincident entries, adding multiplicities (distinct formulas that
// hit the same point describe one multiple zero).
Spectrum merged(Spectrum zs) {
  std::sort(zs.begin(), zs.end(),
            [](const Eigenvalue& l, const Eigenvalue& r) { return l.value.real() < r.value.real(); });
  Spectrum out;
  for (const auto& z : zs) {
    bool hit = false;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (z.value.real() - it->value.real() > kTieTol * (1.0 + std::abs(z.value))) break;
      if (same_point(z.value, it->value)) {
        it->multiplicity += z.multiplicity;
        hit = true;
        break;
      }
    }
    if (!hit) out.push_back(z);
  }
  return out;
}

}  // namespace

SpectrumWindow SpectrumWindow::symmetric(int n_side) {
  SpectrumWindow w;
  w.n_side = n_side;
  return w;
}

SpectrumWindow SpectrumWindow::range(double lo, double hi) {
  SpectrumWindow w;
  w.re_range = std::make_pair(lo, hi);
  return w;
}

void SpectrumWindow::validate() const {
  if (n_side.has_value() == re_range.has_value()) {
    throw SpectralError(ErrorKind::InvalidArgument, "window needs exactly one of n_side, re_range");
  }
  if (n_side && *n_side < 1) throw SpectralError(ErrorKind::InvalidArgument, "n_side must be >= 1");
  if (re_range && !(re_range->first < re_range->second)) {
    throw SpectralError(ErrorKind::InvalidArgument, "re_range must be a nonempty interval");
  }
}

const char* to_string(ZeroMethod method) {
  switch (method) {
    case ZeroMethod::ClosedForm: return "ClosedForm";
    case ZeroMethod::PolynomialReduction: return "PolynomialReduction";
    case ZeroMethod::Contour: return "Contour";
    case ZeroMethod::Localized: return "Localized";
  }
  return "Unknown";
}

Complex delta0(Complex lambda, const CanonicalBC& bc, const DiracWeights& w) {
  const double b1 = w.b1();
  const double b2 = w.b2();
  return bc.d + bc.a * std::exp(kI * (b1 + b2) * lambda) + bc.u() * std::exp(kI * b1 * lambda) +
         std::exp(kI * b2 * lambda);
}

Complex delta0_derivative(Complex lambda, const CanonicalBC& bc, const DiracWeights& w) {
  const double b1 = w.b1();
  const double b2 = w.b2();
  return kI * ((b1 + b2) * bc.a * std::exp(kI * (b1 + b2) * lambda) +
               b1 * bc.u() * std::exp(kI * b1 * lambda) + b2 * std::exp(kI * b2 * lambda));
}

double residual_tolerance(const CanonicalBC& bc, const Tolerances& tol) {
  return tol.residual_rel * scale_of(bc);
}

double strip_height(const CanonicalBC& bc, const DiracWeights& w, const Tolerances& tol) {
  require_regular(bc, tol);
  const double k1 = -w.b1();
  const double k2 = w.b2();
  const double aa = std::abs(bc.a);
  const double ad = std::abs(bc.d);
  const double au = std::abs(bc.u());
  // Im lambda = y > 0: u e^{i b1 lambda} dominates. Both sides divided by it.
  auto above = [&](double y) {
    return au > ad * std::exp(-k1 * y) + aa * std::exp(-k2 * y) + std::exp(-(k1 + k2) * y);
  };
  // Im lambda = -s < 0: e^{i b2 lambda} dominates.
  auto below = [&](double s) {
    return 1.0 > ad * std::exp(-k2 * s) + aa * std::exp(-k1 * s) + au * std::exp(-(k1 + k2) * s);
  };
  return std::max(threshold(above), threshold(below));
}

void order_and_index(Spectrum& zeros) {
  std::sort(zeros.begin(), zeros.end(),
            [](const Eigenvalue& l, const Eigenvalue& r) { return l.value.real() < r.value.real(); });
  // Re ties are grouped and ordered by Im.
  for (std::size_t i = 0; i < zeros.size();) {
    std::size_t j = i + 1;
    while (j < zeros.size() && zeros[j].value.real() - zeros[j - 1].value.real() <=
                                   kTieTol * (1.0 + std::abs(zeros[j].value.real()))) {
      ++j;
    }
    std::sort(zeros.begin() + static_cast<long>(i), zeros.begin() + static_cast<long>(j),
              [](const Eigenvalue& l, const Eigenvalue& r) { return l.value.imag() < r.value.imag(); });
    i = j;
  }
  if (zeros.empty()) return;
  double best = std::abs(zeros[0].value.real());
  for (const auto& z : zeros) best = std::min(best, std::abs(z.value.real()));
  std::size_t origin = 0;
  while (std::abs(zeros[origin].value.real()) > best + kTieTol * (1.0 + best)) ++origin;
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    zeros[k].index = static_cast<int>(k) - static_cast<int>(origin);
  }
}

Spectrum windowed(const std::function<Spectrum(double)>& compute, const DiracWeights& w,
                  const SpectrumWindow& win) {
  win.validate();
  const double gap = w.mean_gap();
  if (win.re_range) {
    const auto [lo, hi] = *win.re_range;
    Spectrum all = compute(std::max(std::abs(lo), std::abs(hi)) + 2.0 * gap);
    order_and_index(all);
    Spectrum out;
    for (const auto& z : all) {
      if (z.value.real() >= lo && z.value.real() <= hi) out.push_back(z);
    }
    return out;
  }
  const int n_side = *win.n_side;
  double R = (n_side + 8) * gap;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Spectrum all = compute(R);
    order_and_index(all);
    Spectrum out;
    int below = 0;
    int above = 0;
    for (const auto& z : all) {
      if (z.index < 0) ++below;
      if (z.index > 0) ++above;
      if (std::abs(z.index) <= n_side) out.push_back(z);
    }
    if (below >= n_side && above >= n_side) return out;
    R *= 1.5;
  }
  throw SpectralError(ErrorKind::LocalizationFailure, "window not covered after enlarging range");
}

Spectrum zeros_closed_form(const CanonicalBC& bc, const DiracWeights& w, const SpectrumWindow& win,
                           const Tolerances& tol) {
  if (bc.b != Complex{0.0} || bc.c != Complex{0.0}) {
    throw SpectralError(ErrorKind::WrongCase, "closed form needs b = c = 0");
  }
  require_regular(bc, tol);
  const double b1 = w.b1();
  const double b2 = w.b2();
  auto compute = [&](double R) {
    Spectrum zs;
    // lambda_{1,n} = (arg(-1/a) + 2 pi n)/b1 + i ln|a|/b1
    const double arg1 = std::arg(-1.0 / bc.a);
    const double im1 = std::log(std::abs(bc.a)) / b1;
    // lambda_{2,n} = (arg(-d) + 2 pi n)/b2 - i ln|d|/b2
    const double arg2 = std::arg(-bc.d);
    const double im2 = -std::log(std::abs(bc.d)) / b2;
    auto branch = [&](double argv, double bj, double im) {
      const double span = R * std::abs(bj) / (2.0 * kPi);
      const long lo = static_cast<long>(std::floor(-span - argv / (2.0 * kPi))) - 1;
      const long hi = static_cast<long>(std::ceil(span - argv / (2.0 * kPi))) + 1;
      for (long n = lo; n <= hi; ++n) {
        const double re = (argv + 2.0 * kPi * static_cast<double>(n)) / bj;
        if (std::abs(re) <= R) {
          zs.push_back(make_zero({re, im}, 1, ZeroMethod::ClosedForm, bc, w));
        }
      }
    };
    branch(arg1, b1, im1);
    branch(arg2, b2, im2);
    return merged(std::move(zs));
  };
  return windowed(compute, w, win);
}

Spectrum zeros_polynomial(const CanonicalBC& bc, const DiracWeights& w, const SpectrumWindow& win,
                          const Tolerances& tol) {
  if (!w.rationality()) {
    throw SpectralError(ErrorKind::WrongCase, "polynomial reduction needs a declared rational ratio");
  }
  require_regular(bc, tol);
  const auto r = *w.rationality();
  const auto roots = poly::roots(poly::characteristic_polynomial(bc.a, bc.b, bc.c, bc.d, r.n1, r.n2),
                                 tol.multiplicity);
  auto compute = [&](double R) {
    Spectrum zs;
    for (const auto& root : roots) {
      const double argv = std::arg(root.value);
      const double im = -std::log(std::abs(root.value)) / r.b0;
      const double span = R * r.b0 / (2.0 * kPi);
      const long lo = static_cast<long>(std::floor(-span - argv / (2.0 * kPi))) - 1;
      const long hi = static_cast<long>(std::ceil(span - argv / (2.0 * kPi))) + 1;
      for (long m = lo; m <= hi; ++m) {
        const double re = (argv + 2.0 * kPi * static_cast<double>(m)) / r.b0;
        if (std::abs(re) <= R) {
          zs.push_back(make_zero({re, im}, root.multiplicity, ZeroMethod::PolynomialReduction, bc, w));
        }
      }
    }
    return merged(std::move(zs));
  };
  return windowed(compute, w, win);
}

Spectrum zeros_contour(const CanonicalBC& bc, const DiracWeights& w, const SpectrumWindow& win,
                       const Tolerances& tol) {
  require_regular(bc, tol);
  const double h = strip_height(bc, w, tol) + 1.0;
  const double gap = w.mean_gap();
  contour::Options opts;
  opts.zero_floor = 1e-13 * scale_of(bc);
  opts.multiplicity_diameter = tol.multiplicity;
  opts.samples_per_unit = std::max(4.0, 2.0 * (w.b2() - w.b1()));
  opts.max_retries = tol.max_contour_retries;
  const contour::Function f = [&](Complex z) { return delta0(z, bc, w); };
  const contour::Function df = [&](Complex z) { return delta0_derivative(z, bc, w); };

  auto compute = [&](double R) {
    // Outer edges sit at irrational fractions of a gap beyond +-R.
    for (int attempt = 0; attempt <= tol.max_contour_retries; ++attempt) {
      const double jitter = 0.0731 * attempt;
      const double lo = -R - (0.3183 + jitter) * gap;
      const double hi = R + (0.2718 + jitter) * gap;
      try {
        const auto located = contour::locate_zeros_in_strip(f, df, lo, hi, -h, h, gap, opts);
        Spectrum zs;
        for (const auto& z : located) {
          if (std::abs(z.value.real()) <= R) {
            zs.push_back(make_zero(z.value, z.multiplicity, ZeroMethod::Contour, bc, w));
          }
        }
        return merged(std::move(zs));
      } catch (const SpectralError& e) {
        if (e.kind() != ErrorKind::ContourThroughZero || attempt == tol.max_contour_retries) throw;
      }
    }
    return Spectrum{};
  };
  return windowed(compute, w, win);
}

Spectrum unperturbed_zeros(const CanonicalBC& bc, const DiracWeights& w, const SpectrumWindow& win,
                           const Tolerances& tol) {
  if (bc.b == Complex{0.0} && bc.c == Complex{0.0}) return zeros_closed_form(bc, w, win, tol);
  if (w.rationality()) return zeros_polynomial(bc, w, win, tol);
  return zeros_contour(bc, w, win, tol);
}

ZeroSequences derive_sequences(const Spectrum& zeros, const CanonicalBC& bc, const DiracWeights& w,
                               const Tolerances& tol) {
  if (zeros.empty()) throw SpectralError(ErrorKind::InvalidArgument, "no zeros given");
  const bool regular = is_regular(bc, tol);
  ZeroSequences out;
  for (const auto& z : zeros) {
    const Complex e1 = std::exp(kI * w.b1() * z.value);
    const Complex e2 = std::exp(-kI * w.b2() * z.value);
    const Complex p1 = 1.0 + bc.a * e1;
    const Complex p2 = 1.0 + bc.d * e2;
    if (regular) {
      const Complex cross = bc.b * bc.c * e1 * e2;
      const double defect = std::abs(p1 * p2 - cross);
      if (defect > 1e-8 * (1.0 + std::abs(p1 * p2) + std::abs(cross))) {
        throw SpectralError(ErrorKind::InternalInconsistency,
                            "zero does not satisfy (1 + a e1)(1 + d e2) = bc e1 e2");
      }
    }
    out.e1.push_back(e1);
    out.e2.push_back(e2);
    out.z.push_back(p2 * std::conj(p1));
  }
  return out;
}

double default_separation_tolerance(const DiracWeights& w, const Tolerances& tol) {
  return tol.separation_rel * w.mean_gap();
}

SeparationStats separation_stats(const Spectrum& zeros, double sep_tol) {
  if (zeros.size() < 2) throw SpectralError(ErrorKind::InvalidArgument, "need at least two zeros");
  int max_index = 0;
  for (const auto& z : zeros) max_index = std::max(max_index, std::abs(z.index));
  SeparationStats st;
  st.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (2 * std::abs(zeros[i].index) <= max_index) continue;
    if (zeros[i].multiplicity > 1) st.min_gap = 0.0;
    for (std::size_t j = 0; j < zeros.size(); ++j) {
      if (j != i) st.min_gap = std::min(st.min_gap, std::abs(zeros[i].value - zeros[j].value));
    }
  }
  std::vector<std::pair<double, int>> re;
  for (const auto& z : zeros) re.emplace_back(z.value.real(), z.multiplicity);
  std::sort(re.begin(), re.end());
  int count = 0;
  std::size_t lo = 0;
  // Window [t - 1, t + 1] anchored at each left end.
  for (std::size_t hi = 0; hi < re.size(); ++hi) {
    count += re[hi].second;
    while (re[hi].first - re[lo].first > 2.0) count -= re[lo++].second;
    st.incompressibility_d = std::max(st.incompressibility_d, count);
  }
  st.is_asymptotically_separated = st.min_gap > sep_tol;
  return st;
}

int limit_point_census(const std::vector<Complex>& seq, double eps) {
  if (seq.size() < 16) throw SpectralError(ErrorKind::InvalidArgument, "census needs >= 16 terms");
  if (!(eps > 0.0)) throw SpectralError(ErrorKind::InvalidArgument, "eps must be positive");
  // Nested dyadic grids share one offset, so the count is monotone in eps.
  const double side = std::exp2(-std::ceil(std::log2(1.0 / eps)));
  const double shift = 0.0591733;
  const std::size_t quarter = seq.size() / 4;
  std::set<std::pair<long long, long long>> cells;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i >= quarter && i < seq.size() - quarter) continue;
    cells.emplace(static_cast<long long>(std::floor((seq[i].real() - shift) / side)),
                  static_cast<long long>(std::floor((seq[i].imag() - shift) / side)));
  }
  return static_cast<int>(cells.size());
}

std::vector<long> weyl_census(double beta, long M,
                              const std::vector<std::pair<double, double>>& intervals) {
  if (M < 1) throw SpectralError(ErrorKind::InvalidArgument, "M must be >= 1");
  for (const auto& [a, b] : intervals) {
    if (!(0.0 <= a && a <= b && b <= 1.0)) {
      throw SpectralError(ErrorKind::InvalidArgument, "intervals must lie in [0, 1]");
    }
  }
  std::vector<long> counts(intervals.size(), 0);
  for (long m = -M; m <= M; ++m) {
    const double x = beta * static_cast<double>(m);
    const double frac = x - std::floor(x);
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      if (frac >= intervals[k].first && frac <= intervals[k].second) ++counts[k];
    }
  }
  return counts;
}

}  // namespace dirac
