#pragma once

#include "qdbar/operators.hpp"

namespace qdbar {

/// T1(n): f-side kernel, band n+1 -> band n (n >= 0).
/// T2(n): g-side kernel, band n-1 -> band n (n >= 1).
/// Zero: no band present.
enum class KernelKind { T1, T2, Zero };

/// A band of Q_t viewed as an operator l^2_in -> l^2_out, where l^2_m carries
/// the weight mu_m(k) = S_t(k+m)^(1/2) S_t(k)^(1/2).
struct KernelOperatorSpec {
  KernelKind kind = KernelKind::Zero;
  int n = 0;
  double t = 0.5;
  WeightFamily family;
  IndexWindow window;
};

struct SchurBound {
  double bound = 0.0;    ///< sqrt(row_sup * col_sup)
  double row_sup = 0.0;  ///< sup_k sum_i |K(k,i)|
  double col_sup = 0.0;  ///< sup_i sum_k |K(k,i)| mu_out(k) / mu_in(i)
  double analytic_cap = 0.0;  ///< 2 (w_+ - w_-) C^(1/4), t independent
};

SchurBound schur_young_bound(const KernelOperatorSpec& spec, QtKernelMode mode);

struct NormEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  double last_rayleigh = 0.0;
};

/// Power iteration on T*T in the weighted spaces, seeded with ones.
/// Stops when the Rayleigh quotient changes by <= rel_tol relative.
NormEstimate operator_norm_estimate(const KernelOperatorSpec& spec, QtKernelMode mode,
                                    int iters = 500, double rel_tol = 1e-10);

/// The t-independent cap 2 (w_+ - w_-) C^(1/4) with C = wratio_const().
double analytic_schur_cap(const WeightFamily& family);

/// Dense matrix of the weighted kernel diag(mu_out^(1/2)) K diag(mu_in^(-1/2)),
/// row-major, for cross-checks on small windows.
std::vector<double> dense_weighted_kernel(const KernelOperatorSpec& spec, QtKernelMode mode,
                                          std::size_t& rows, std::size_t& cols);

}  // namespace qdbar
