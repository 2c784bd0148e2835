#include "dirac/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dirac::contour {

namespace {

// Split fractions tried in order; offsets from 1/2 avoid symmetric zeros.
constexpr std::array<double, 8> kSplitFractions = {0.5, 0.4713, 0.5387, 0.4219,
                                                   0.5811, 0.3907, 0.6143, 0.4462};

struct Tracker {
  const Function& f;
  const Options& opts;

  Complex checked(Complex z) const {
    const Complex v = f(z);
    if (!(std::abs(v) > opts.zero_floor) || !std::isfinite(v.real()) ||
        !std::isfinite(v.imag())) {
      throw SpectralError(ErrorKind::ContourThroughZero, "analytic function vanishes on contour");
    }
    return v;
  }

  // Phase increment of f along the parametrized arc t in [t0, t1].
  template <typename Curve>
  double track(const Curve& curve, double t0, double t1, Complex f0, Complex f1,
               int depth) const {
    const double step = std::arg(f1 / f0);
    if (std::abs(step) < 0.5 * kPi) return step;
    if (depth >= opts.max_depth) {
      throw SpectralError(ErrorKind::ContourThroughZero, "phase tracking did not resolve");
    }
    const double tm = 0.5 * (t0 + t1);
    const Complex fm = checked(curve(tm));
    return track(curve, t0, tm, f0, fm, depth + 1) + track(curve, tm, t1, fm, f1, depth + 1);
  }

  template <typename Curve>
  double total_phase(const Curve& curve, double length) const {
    const int n = std::max(16, static_cast<int>(std::ceil(length * opts.samples_per_unit)));
    double total = 0.0;
    Complex prev = checked(curve(0.0));
    const Complex first = prev;
    for (int k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      const Complex cur = (k == n) ? first : checked(curve(t));
      total += track(curve, static_cast<double>(k - 1) / n, t, prev, cur, 0);
      prev = cur;
    }
    return total;
  }
};

int to_winding(double total_phase) {
  const double turns = total_phase / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.2) {
    throw SpectralError(ErrorKind::ContourThroughZero, "non-integer winding number");
  }
  return static_cast<int>(rounded);
}

std::pair<Box, Box> split(const Box& box, double frac) {
  Box lo = box;
  Box hi = box;
  if (box.width() >= box.height()) {
    const double cut = box.re_lo + frac * box.width();
    lo.re_hi = cut;
    hi.re_lo = cut;
  } else {
    const double cut = box.im_lo + frac * box.height();
    lo.im_hi = cut;
    hi.im_lo = cut;
  }
  return {lo, hi};
}

void refine(const Function& f, const Function& df, const Box& box, int count, int depth,
            const Options& opts, std::vector<LocatedZero>& out) {
  if (count <= 0) return;
  const double slack = 1e-9 * (1.0 + box.diameter());
  if (count == 1) {
    if (auto z = newton(f, df, box.center(), 1, opts, &box); z && box.contains(*z, slack)) {
      out.push_back({*z, 1});
      return;
    }
  }
  if (count >= 2) {
    // A cluster that a tiny circle already isolates is one multiple zero.
    if (auto z = newton(f, df, box.center(), count, opts, &box); z && box.contains(*z, slack)) {
      try {
        if (winding_number(f, *z, opts.multiplicity_diameter, opts) == count) {
          out.push_back({*z, count});
          return;
        }
      } catch (const SpectralError& e) {
        if (e.kind() != ErrorKind::ContourThroughZero) throw;
      }
    }
  }
  if (box.diameter() < opts.multiplicity_diameter || depth >= opts.max_depth) {
    auto z = newton(f, df, box.center(), count, opts, &box);
    out.push_back({(z && box.contains(*z, box.diameter())) ? *z : box.center(), count});
    return;
  }
  for (double frac : kSplitFractions) {
    const auto [lo, hi] = split(box, frac);
    int c_lo = 0;
    int c_hi = 0;
    try {
      c_lo = winding_number(f, lo, opts);
      c_hi = winding_number(f, hi, opts);
    } catch (const SpectralError& e) {
      if (e.kind() != ErrorKind::ContourThroughZero) throw;
      continue;
    }
    if (c_lo + c_hi != count || c_lo < 0 || c_hi < 0) continue;
    refine(f, df, lo, c_lo, depth + 1, opts, out);
    refine(f, df, hi, c_hi, depth + 1, opts, out);
    return;
  }
  throw SpectralError(ErrorKind::ContourThroughZero, "could not split box away from zeros");
}

}  // namespace

double Box::diameter() const { return std::hypot(width(), height()); }

bool Box::contains(Complex z, double slack) const {
  return z.real() >= re_lo - slack && z.real() <= re_hi + slack && z.imag() >= im_lo - slack &&
         z.imag() <= im_hi + slack;
}

int winding_number(const Function& f, const Box& box, const Options& opts) {
  const Tracker tracker{f, opts};
  const double w = box.width();
  const double h = box.height();
  const double perimeter = 2.0 * (w + h);
  const std::array<Complex, 4> corners = {Complex{box.re_lo, box.im_lo}, Complex{box.re_hi, box.im_lo},
                                          Complex{box.re_hi, box.im_hi}, Complex{box.re_lo, box.im_hi}};
  const std::array<double, 4> lengths = {w, h, w, h};
  auto curve = [&](double t) {
    double s = t * perimeter;
    for (int k = 0; k < 4; ++k) {
      if (s <= lengths[k] || k == 3) {
        const double frac = lengths[k] > 0.0 ? std::min(1.0, s / lengths[k]) : 0.0;
        return corners[k] + frac * (corners[(k + 1) % 4] - corners[k]);
      }
      s -= lengths[k];
    }
    return corners[0];
  };
  return to_winding(tracker.total_phase(curve, perimeter));
}

int winding_number(const Function& f, Complex center, double radius, const Options& opts) {
  const Tracker tracker{f, opts};
  auto curve = [&](double t) { return center + radius * std::exp(kI * (2.0 * kPi * t)); };
  return to_winding(tracker.total_phase(curve, 2.0 * kPi * radius));
}

std::optional<Complex> newton(const Function& f, const Function& df, Complex start,
                              int multiplicity, const Options& opts, const Box* bound) {
  Complex z = start;
  const double m = static_cast<double>(multiplicity);
  for (int it = 0; it < opts.newton_iterations; ++it) {
    const Complex fz = f(z);
    if (fz == Complex{0.0}) return z;
    const Complex dz = df(z);
    if (dz == Complex{0.0} || !std::isfinite(std::abs(dz))) return std::nullopt;
    const Complex step = m * fz / dz;
    z -= step;
    if (!std::isfinite(std::abs(z))) return std::nullopt;
    if (bound && !bound->contains(z, bound->diameter())) return std::nullopt;
    if (std::abs(step) <= opts.newton_tol * (1.0 + std::abs(z))) {
      // One more step to land on roundoff level.
      const Complex d1 = df(z);
      if (d1 != Complex{0.0}) z -= m * f(z) / d1;
      return z;
    }
  }
  // Accept a stalled iterate only if it sits at roundoff level.
  const Complex fz = f(z);
  if (std::abs(fz) <= 1e3 * opts.zero_floor) return z;
  return std::nullopt;
}

std::vector<LocatedZero> locate_zeros(const Function& f, const Function& df, const Box& box,
                                      const Options& opts) {
  std::vector<LocatedZero> out;
  refine(f, df, box, winding_number(f, box, opts), 0, opts, out);
  return out;
}

std::vector<LocatedZero> locate_zeros_in_strip(const Function& f, const Function& df,
                                               double re_lo, double re_hi, double im_lo,
                                               double im_hi, double tile_width,
                                               const Options& opts) {
  std::vector<LocatedZero> out;
  double left = re_lo;
  while (left < re_hi) {
    bool done = false;
    for (int attempt = 0; attempt <= opts.max_retries && !done; ++attempt) {
      // Shrink the tile a little on each retry so its right edge moves off a zero.
      const double width = tile_width * (1.0 - 0.0917 * attempt);
      const double right = (re_hi - left <= 1.5 * width) ? re_hi : left + width;
      const Box tile{left, right, im_lo, im_hi};
      try {
        const int count = winding_number(f, tile, opts);
        refine(f, df, tile, count, 0, opts, out);
        left = right;
        done = true;
      } catch (const SpectralError& e) {
        if (e.kind() != ErrorKind::ContourThroughZero || right == re_hi) {
          if (attempt == opts.max_retries || e.kind() != ErrorKind::ContourThroughZero) throw;
        }
      }
    }
    if (!done) {
      throw SpectralError(ErrorKind::ContourThroughZero, "tile edges keep meeting zeros");
    }
  }
  return out;
}

}  // namespace dirac::contour
