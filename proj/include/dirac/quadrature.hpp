// Composite Simpson rule on uniform grids over [0, 1].

#pragma once

#include <vector>

#include <Eigen/Core>

#include "dirac/core.hpp"

namespace dirac {

using Vec2 = Eigen::Matrix<Complex, 2, 1>;
using VectorField = std::vector<Vec2>;

/// Uniform grid with m points; m is bumped to the next odd number.
std::vector<double> uniform_grid(int m);

/// Simpson sum over a uniform grid on [0, 1]; needs an odd sample count >= 3.
Complex simpson(const std::vector<Complex>& values);
double simpson(const std::vector<double>& values);

/// (f, g) = int_0^1 <f(x), g(x)> dx, conjugate-linear in g.
Complex inner(const VectorField& f, const VectorField& g);
double norm(const VectorField& f);

}  // namespace dirac
