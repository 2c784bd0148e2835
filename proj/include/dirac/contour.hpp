// Argument-principle zero location for analytic functions on rectangles
// and discs. Winding numbers come from tracking the phase of f along the
// boundary, refining each step until the phase increment is below pi/2.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dirac/core.hpp"

namespace dirac::contour {

using Function = std::function<Complex(Complex)>;

struct Box {
  double re_lo = 0.0;
  double re_hi = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;

  Complex center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
  double width() const { return re_hi - re_lo; }
  double height() const { return im_hi - im_lo; }
  double diameter() const;
  bool contains(Complex z, double slack = 0.0) const;
};

struct Options {
  /// |f| at or below this on a contour means the contour passes through a zero.
  double zero_floor = 1e-13;
  /// Boxes smaller than this are reported as one zero with multiplicity.
  double multiplicity_diameter = 1e-6;
  /// Initial boundary samples per unit length (the phase oscillation rate).
  double samples_per_unit = 8.0;
  int max_depth = 60;
  int max_retries = 6;
  int newton_iterations = 60;
  double newton_tol = 1e-13;
};

struct LocatedZero {
  Complex value;
  int multiplicity = 1;
};

/// Throws SpectralError(ContourThroughZero) when the boundary meets a zero.
int winding_number(const Function& f, const Box& box, const Options& opts);
int winding_number(const Function& f, Complex center, double radius, const Options& opts);

/// Newton iteration z <- z - m f/f'. Returns nothing when it diverges,
/// stalls, or leaves `bound` (if given).
std::optional<Complex> newton(const Function& f, const Function& df, Complex start,
                              int multiplicity, const Options& opts, const Box* bound = nullptr);

/// All zeros inside `box`, given that the box boundary is zero-free.
std::vector<LocatedZero> locate_zeros(const Function& f, const Function& df, const Box& box,
                                      const Options& opts);

/// Tiles [re_lo, re_hi] x [im_lo, im_hi] into boxes of roughly `tile_width`,
/// moving interior tile edges off zeros when needed. The horizontal edges
/// must be zero-free.
std::vector<LocatedZero> locate_zeros_in_strip(const Function& f, const Function& df,
                                               double re_lo, double re_hi, double im_lo,
                                               double im_hi, double tile_width,
                                               const Options& opts);

}  // namespace dirac::contour
