#include "qdbar/norms.hpp"

#include <algorithm>
#include <cmath>

#include "qdbar/numeric.hpp"
#include "qdbar/quadrature.hpp"

namespace qdbar {

std::vector<double> sample_coefficient(const CoefficientFunction& fn,
                                       const WeightFamily& family, double t, Index lo,
                                       Index hi) {
  std::vector<double> out;
  if (hi < lo) return out;
  const auto n = static_cast<std::size_t>(hi - lo + 1);
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = family.weight_sq(t, lo + static_cast<Index>(j));
  out.resize(n);
  fn.evaluate_sorted(s, out);
  return out;
}

template <class Real>
BasicBandMatrix<Real> realize_quantum(const LambdaElement& elem, const WeightFamily& family,
                                      double t, const IndexWindow& window) {
  BasicBandMatrix<Real> a;
  a.window = window;
  const Index lo = window.k_lo, hi = window.k_hi;
  for (const auto& [n, fn] : elem.g_bands()) {
    auto& band = a.band(-n);
    if (hi - n < lo) continue;
    const auto v = sample_coefficient(fn, family, t, lo, hi - n);
    for (std::size_t j = 0; j < v.size(); ++j) band[j + static_cast<std::size_t>(n)] = v[j];
  }
  if (elem.diagonal()) {
    auto& band = a.band(0);
    const auto v = sample_coefficient(*elem.diagonal(), family, t, lo, hi);
    std::copy(v.begin(), v.end(), band.begin());
  }
  for (const auto& [n, fn] : elem.f_bands()) {
    auto& band = a.band(n);
    if (hi - n < lo) continue;
    const auto v = sample_coefficient(fn, family, t, lo, hi - n);
    std::copy(v.begin(), v.end(), band.begin());
  }
  return a;
}

template BasicBandMatrix<double> realize_quantum<double>(const LambdaElement&,
                                                         const WeightFamily&, double,
                                                         const IndexWindow&);
template BasicBandMatrix<long double> realize_quantum<long double>(const LambdaElement&,
                                                                   const WeightFamily&,
                                                                   double,
                                                                   const IndexWindow&);

template <class Real>
std::vector<Real> realize_band(const LambdaElement& elem, const WeightFamily& family,
                               double t, const IndexWindow& window, int offset) {
  const CoefficientFunction* fn = nullptr;
  if (offset == 0) {
    if (elem.diagonal()) fn = &*elem.diagonal();
  } else {
    const auto& bands = offset > 0 ? elem.f_bands() : elem.g_bands();
    if (auto it = bands.find(std::abs(offset)); it != bands.end()) fn = &it->second;
  }
  if (!fn) return {};
  const Index lo = window.k_lo, hi = window.k_hi;
  const int n = std::abs(offset);
  std::vector<Real> band(static_cast<std::size_t>(window.size()), Real(0));
  if (hi - n < lo) return band;
  const auto v = sample_coefficient(*fn, family, t, lo, hi - n);
  // g bands sit at column k + n, f bands and the diagonal at column k
  const std::size_t shift = offset < 0 ? static_cast<std::size_t>(n) : 0;
  for (std::size_t j = 0; j < v.size(); ++j) band[j + shift] = static_cast<Real>(v[j]);
  return band;
}

template std::vector<double> realize_band<double>(const LambdaElement&, const WeightFamily&,
                                                  double, const IndexWindow&, int);
template std::vector<long double> realize_band<long double>(const LambdaElement&,
                                                            const WeightFamily&, double,
                                                            const IndexWindow&, int);

namespace {

// Accumulates S(row)^(1/2) S(col)^(1/2) v^2 over band b, columns [c0, c1].
template <class Get>
void add_band(CompensatedSum<double>& acc, const WeightTable<double>& tab, int b, Index c0,
              Index c1, Get get) {
  for (Index col = c0; col <= c1; ++col) {
    const double v = get(col);
    acc.add(tab.root_s(col + b) * tab.root_s(col) * (v * v));
  }
}

}  // namespace

double quantum_norm(const BandMatrix& a, const WeightFamily& family, double t,
                    bool trusted_only) {
  const auto tab = make_weight_table<double>(family, t, a.lo(), a.hi());
  CompensatedSum<double> acc;
  for (const auto& [b, v] : a.bands) {
    auto [c0, c1] = a.columns(b);
    if (trusted_only) {
      c0 = std::max({c0, a.trusted_lo(), a.trusted_lo() - b});
      c1 = std::min({c1, a.trusted_hi(), a.trusted_hi() - b});
    }
    add_band(acc, tab, b, c0, c1,
             [&](Index col) { return v[static_cast<std::size_t>(col - a.lo())]; });
  }
  return std::sqrt(acc.value());
}

double quantum_distance(const BandMatrix& a, const BandMatrix& b, const WeightFamily& family,
                        double t) {
  if (a.lo() != b.lo() || a.hi() != b.hi())
    throw ParameterError("quantum_distance: windows differ");
  const auto tab = make_weight_table<double>(family, t, a.lo(), a.hi());
  std::map<int, int> offsets;
  for (const auto& kv : a.bands) offsets[kv.first] |= 1;
  for (const auto& kv : b.bands) offsets[kv.first] |= 2;
  CompensatedSum<double> acc;
  for (const auto& [off, which] : offsets) {
    const auto [c0, c1] = a.columns(off);
    const std::vector<double>* va = which & 1 ? &a.bands.at(off) : nullptr;
    const std::vector<double>* vb = which & 2 ? &b.bands.at(off) : nullptr;
    add_band(acc, tab, off, c0, c1, [&](Index col) {
      const auto j = static_cast<std::size_t>(col - a.lo());
      return (va ? (*va)[j] : 0.0) - (vb ? (*vb)[j] : 0.0);
    });
  }
  return std::sqrt(acc.value());
}

double element_quantum_norm(const LambdaElement& elem, const WeightFamily& family, double t,
                            const IndexWindow& window) {
  constexpr Index kChunk = Index{1} << 16;
  const Index lo = window.k_lo, hi = window.k_hi;
  CompensatedSum<double> acc;

  // Streams band offset b (coefficient sampled at k, column k + shift).
  auto stream = [&](const CoefficientFunction& fn, int b, Index k_last, Index shift) {
    for (Index k0 = lo; k0 <= k_last; k0 += kChunk) {
      const Index k1 = std::min(k_last, k0 + kChunk - 1);
      const auto vals = sample_coefficient(fn, family, t, k0, k1);
      const auto tab = make_weight_table<double>(family, t, std::min(k0, k0 + shift + b),
                                                 std::max(k1 + shift, k1 + shift + b));
      add_band(acc, tab, b, k0 + shift, k1 + shift, [&](Index col) {
        return vals[static_cast<std::size_t>(col - shift - k0)];
      });
    }
  };
  for (auto it = elem.g_bands().rbegin(); it != elem.g_bands().rend(); ++it)
    stream(it->second, -it->first, hi - it->first, it->first);
  if (elem.diagonal()) stream(*elem.diagonal(), 0, hi, 0);
  for (const auto& [n, fn] : elem.f_bands()) stream(fn, n, hi - n, 0);
  return std::sqrt(acc.value());
}

double classical_norm(const LambdaElement& elem, const WeightFamily& family, double tol) {
  const double a = family.w_minus_sq(), b = family.w_plus_sq();
  CompensatedSum<double> acc;
  auto add = [&](const CoefficientFunction& fn) {
    acc.add(integrate(
        [&fn](double s) {
          const double v = fn(s);
          return v * v;
        },
        a, b, tol));
  };
  for (const auto& spec : elem.band_spec()) add(spec.fn);
  return std::sqrt(acc.value());
}

}  // namespace qdbar
