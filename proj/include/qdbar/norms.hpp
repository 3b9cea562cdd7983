#pragma once

#include <vector>

#include "qdbar/band_matrix.hpp"
#include "qdbar/element.hpp"

namespace qdbar {

/// fn(w_t(k)^2) for k = lo..hi.
std::vector<double> sample_coefficient(const CoefficientFunction& fn,
                                       const WeightFamily& family, double t, Index lo,
                                       Index hi);

/// Band realization of x_t on the window: band +n holds f_n(w_t(k)^2) at
/// (k+n, k), band -n holds g_n(w_t(j)^2) at (j, j+n), band 0 the diagonal.
template <class Real>
BasicBandMatrix<Real> realize_quantum(const LambdaElement& elem, const WeightFamily& family,
                                      double t, const IndexWindow& window);

/// Single band of the realization (indexed by column); empty when absent.
template <class Real>
std::vector<Real> realize_band(const LambdaElement& elem, const WeightFamily& family,
                               double t, const IndexWindow& window, int offset);

/// sqrt(sum_ij S(i)^(1/2) S(j)^(1/2) |a_ij|^2). Bands are summed in ascending
/// offset, columns ascending, with one compensated accumulator.
double quantum_norm(const BandMatrix& a, const WeightFamily& family, double t,
                    bool trusted_only = false);

/// quantum_norm(a - b) for matrices on the same window.
double quantum_distance(const BandMatrix& a, const BandMatrix& b,
                        const WeightFamily& family, double t);

/// quantum_norm(realize_quantum(elem)) without materializing the bands.
/// Uses the same summation order, so the two agree bit for bit.
double element_quantum_norm(const LambdaElement& elem, const WeightFamily& family,
                            double t, const IndexWindow& window);

/// L^2 norm for the measure d(r^2) dphi / 2pi on the disk or annulus.
double classical_norm(const LambdaElement& elem, const WeightFamily& family,
                      double tol = 1e-12);

}  // namespace qdbar
