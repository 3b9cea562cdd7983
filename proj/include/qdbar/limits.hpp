#pragma once

#include <span>
#include <vector>

#include "qdbar/kernels.hpp"
#include "qdbar/norms.hpp"

namespace qdbar {

struct ConvergenceRecord {
  double t = 0.0;
  Index window_lo = 0;
  Index window_hi = 0;
  double primary_value = 0.0;
  double reference_value = 0.0;
  double abs_error = 0.0;
  double tail_bound = 0.0;  ///< larger of the two window tails
};

struct ConvergenceSeries {
  std::vector<ConvergenceRecord> records;  ///< descending t
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS misfit in log-log coordinates
  int points_used = 0;
};

/// head, head*ratio, ..., points values.
std::vector<double> geometric_grid(double head, double ratio, int points);

ConvergenceSeries norm_convergence(const LambdaElement& elem, const WeightFamily& family,
                                   std::span<const double> t_grid, double tail_tol,
                                   Index k_cap);

/// || Q_t x_t - y_t ||_t with y_t the realization of the matching tilde element.
ConvergenceSeries parametrix_convergence(const LambdaElement& elem,
                                         const WeightFamily& family,
                                         std::span<const double> t_grid, double tail_tol,
                                         QtKernelMode mode, Index k_cap);

struct InverseResidual {
  double residual = 0.0;  ///< sup over trusted entries of |D_t Q_t x - x|
  double bound = 0.0;     ///< 10 tail_tol / w_t(interior_lo + N)
  Index interior_lo = 0;
  Index interior_hi = 0;
  IndexWindow window;
};

/// Evaluated in long double, one band at a time: D_t divides by S_t, which
/// magnifies rounding in the parametrix output by up to 1 / tail_tol^2.
InverseResidual inverse_residual(const LambdaElement& elem, const WeightFamily& family,
                                 double t, double tail_tol, QtKernelMode mode, Index k_cap);

struct ContinuityRow {
  double t = 0.0;
  Index window_hi = 0;
  double norm = 0.0;
  double forward_difference = 0.0;  ///< norm(next t) - norm(t); 0 on the last row
};

struct ContinuityScan {
  std::vector<ContinuityRow> rows;
  double max_forward_difference = 0.0;
};

/// steps + 1 equally spaced samples on [t_lo, t_hi].
ContinuityScan continuity_scan(const LambdaElement& elem, const WeightFamily& family,
                               double t_lo, double t_hi, int steps, double tail_tol,
                               Index k_cap);

struct UniformBoundRow {
  double t = 0.0;
  Index window_hi = 0;
  double max_ratio = 0.0;
  double schur_cap = 0.0;
  bool exceeds = false;
};

std::vector<UniformBoundRow> uniform_bound_scan(std::span<const LambdaElement> elems,
                                                const WeightFamily& family,
                                                std::span<const double> t_grid,
                                                double tail_tol, QtKernelMode mode,
                                                Index k_cap);

/// Least squares of log(abs_error) on log(t) after dropping `drop_head`
/// records and every record with abs_error <= 10 * tail_bound.
RateFit rate_fit(const ConvergenceSeries& series, int drop_head = 0);

}  // namespace qdbar
