#pragma once

#include "qdbar/weights.hpp"

namespace qdbar {

/// Finite index window [k_lo, k_hi] with the S_t mass it omits.
/// tail_bound_hi = w_+^2 - w_t(k_hi)^2 and tail_bound_lo = w_t(k_lo - 1)^2 - w_-^2
/// (zero on the disk). Their sum is exactly the omitted trace mass.
struct IndexWindow {
  Index k_lo = 0;
  Index k_hi = 0;
  double tail_tol = 0.0;
  double tail_bound_hi = 0.0;
  double tail_bound_lo = 0.0;

  Index size() const noexcept { return k_hi - k_lo + 1; }
  bool contains(Index k) const noexcept { return k >= k_lo && k <= k_hi; }
  double tail_bound() const noexcept { return tail_bound_hi + tail_bound_lo; }
};

/// Smallest window whose tails are each <= tail_tol. Closed-form solve for
/// the built-in families, refined by unit steps. Throws ResourceError when the
/// window would exceed k_cap indices.
IndexWindow truncation_window(const WeightFamily& family, double t, double tail_tol,
                              Index k_cap);

/// Same contract via doubling and bisection on the tail functions only.
IndexWindow truncation_window_search(const WeightFamily& family, double t,
                                     double tail_tol, Index k_cap);

/// Window with explicit bounds (tail_tol records the larger tail).
IndexWindow make_window(const WeightFamily& family, double t, Index k_lo, Index k_hi);

}  // namespace qdbar
