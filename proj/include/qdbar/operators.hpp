#pragma once

#include <vector>

#include "qdbar/band_matrix.hpp"
#include "qdbar/element.hpp"

namespace qdbar {

/// Corrected puts the f-side denominator at w_t(i+n) (classical kernel
/// r^n / rho^(n+1)); Printed keeps w_t(k+n) (classical r^(n-1) / rho^n).
/// The g side is the same in both modes.
enum class QtKernelMode { Corrected, Printed };
enum class QtPath { Fast, Brute };

/// Longest product w(k)...w(k+n-1) the parametrix will form.
inline constexpr int kMaxQtBand = 16;

const char* to_string(QtKernelMode mode) noexcept;

/// Output band c+1 of D_t from input band c (both indexed by column).
/// Entries whose commutator needs data outside the window are left as
/// computed from the available data; the caller tracks trust via margins.
template <class Real>
std::vector<Real> dt_band(const std::vector<Real>& in, int c, const IndexWindow& window,
                          const WeightTable<Real>& tab);

/// D_t a = S^(-1/2) [a, U] S^(-1/2), band by band.
template <class Real>
BasicBandMatrix<Real> apply_Dt(const BasicBandMatrix<Real>& a, const WeightFamily& family,
                               double t);

/// g side of Q_t: output g band n >= 1 from samples c[k - lo] = g_{n-1}(w(k)^2),
/// valid for k <= hi - n + 1. Result is indexed by row k, valid for k <= hi - n.
template <class Real>
std::vector<Real> qt_g_band(int n, const std::vector<Real>& c, const IndexWindow& window,
                            const WeightTable<Real>& tab, QtPath path);

/// f side of Q_t: output f band n >= 0 from samples c[i - lo] = f_{n+1}(w(i)^2),
/// valid for i <= hi - n - 1. Result indexed by column k, valid for k <= hi - n.
template <class Real>
std::vector<Real> qt_f_band(int n, const std::vector<Real>& c, const IndexWindow& window,
                            const WeightTable<Real>& tab, QtKernelMode mode, QtPath path);

/// Band offsets Q_t x occupies, ascending.
std::vector<int> qt_output_offsets(const LambdaElement& elem);

/// One band of Q_t x (indexed by column), or an empty vector when x feeds
/// nothing into that offset.
template <class Real>
std::vector<Real> qt_output_band(const LambdaElement& elem, const WeightFamily& family,
                                 double t, const IndexWindow& window,
                                 const WeightTable<Real>& tab, int offset, QtKernelMode mode,
                                 QtPath path = QtPath::Fast);

/// Q_t x realized on the window. The diagonal of x is fed to the g side as
/// g_0. valid_margin is N + 1.
template <class Real>
BasicBandMatrix<Real> apply_Qt(const LambdaElement& elem, const WeightFamily& family,
                               double t, const IndexWindow& window, QtKernelMode mode,
                               QtPath path = QtPath::Fast);

/// Classical parametrix image Q_0 x_0 as quadrature-backed coefficients.
LambdaElement tilde_element(const LambdaElement& elem, const WeightFamily& family,
                            QtKernelMode mode);

/// Classical d-bar on band coefficients:
///   f_n -> f_{n+1}:  sqrt(s) f_n' - n/(2 sqrt(s)) f_n   (diagonal as f_0)
///   g_n -> g_{n-1}:  sqrt(s) g_n' + n/(2 sqrt(s)) g_n   (g_1 to the diagonal)
LambdaElement apply_D0(const LambdaElement& elem, const WeightFamily& family);

}  // namespace qdbar
