#pragma once

#include <functional>
#include <span>

#include "bvquad/orthopoly.hpp"

// High-accuracy reference integration, used wherever a closed form is not
// available (truncated moments of non-unit weights, corpus integrals under
// ultraspherical weights). It is independent of the rule generators: its
// panel rule comes from Newton iteration on Legendre polynomials, not from
// the Jacobi-matrix eigensolver.

namespace bvquad::reference {

inline constexpr double default_rel_tol = 1e-14;

/// Composite Gauss-Legendre on [a, b]; the panel count doubles until two
/// successive results agree to rel_tol (relative to the larger of the result
/// and the integral of |g|). g should be smooth on [a, b].
double integrate(const std::function<double(double)>& g, double a, double b,
                 double rel_tol = default_rel_tol);

/// \int_lo^hi w(x) f(x) dx for f smooth between the given breakpoints.
/// Works in the angle variable x = cos(theta), where w dx = sin^{2 lambda}
/// d theta; endpoint regions are graded when 2 lambda is not an integer.
double weighted_integral(const WeightSpec& weight, const std::function<double(double)>& f,
                         double lo = -1.0, double hi = 1.0,
                         std::span<const double> breakpoints = {},
                         double rel_tol = default_rel_tol);

}  // namespace bvquad::reference
