#pragma once

#include <functional>

namespace qdbar {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< estimated absolute error
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature with an absolute
/// tolerance. Intervals are bisected in order of decreasing local error
/// estimate until the summed estimate drops below `tol` or `max_intervals`
/// is reached. Integrable endpoint singularities are handled by repeated
/// bisection toward the endpoint (nodes never touch the endpoints).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double tol,
                                    int max_intervals = 4000);

/// As integrate_adaptive, but throws NumericalError (carrying the best
/// estimate and the achieved error) when the tolerance is not met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

/// Single 15-point Kronrod panel on [a, b] (no adaptivity).
template <class F>
double kronrod_panel(const F& f, double a, double b);

}  // namespace qdbar

#include "qdbar/detail/kronrod_panel.hpp"
