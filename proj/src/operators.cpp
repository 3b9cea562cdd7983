#include "qdbar/operators.hpp"

#include <cmath>
#include <string>

#include "qdbar/errors.hpp"
#include "qdbar/norms.hpp"
#include "qdbar/numeric.hpp"

namespace qdbar {

const char* to_string(QtKernelMode mode) noexcept {
  return mode == QtKernelMode::Corrected ? "corrected" : "printed";
}

template <class Real>
std::vector<Real> dt_band(const std::vector<Real>& in, int c, const IndexWindow& window,
                          const WeightTable<Real>& tab) {
  const Index lo = window.k_lo, hi = window.k_hi;
  const int b = c + 1;
  std::vector<Real> out(in.size(), Real(0));
  const Index c0 = std::max(lo, lo - b), c1 = std::min(hi, hi - b);
  for (Index j = c0; j <= c1; ++j) {
    const Index i = j + b;
    const auto jj = static_cast<std::size_t>(j - lo);
    // [a, U]_{ij} = a_{i, j+1} w(j) - w(i-1) a_{i-1, j}
    const Real right = j + 1 <= hi ? in[jj + 1] * tab.weight(j) : Real(0);
    const Real left = i - 1 >= lo ? tab.weight(i - 1) * in[jj] : Real(0);
    out[jj] = (right - left) / (tab.root_s(i) * tab.root_s(j));
  }
  return out;
}

template <class Real>
BasicBandMatrix<Real> apply_Dt(const BasicBandMatrix<Real>& a, const WeightFamily& family,
                               double t) {
  const auto tab = make_weight_table<Real>(family, t, a.lo() - 1, a.hi() + 1);
  BasicBandMatrix<Real> out;
  out.window = a.window;
  out.valid_margin = a.valid_margin + 1;
  out.lower_edge_exact = a.lower_edge_exact && family.domain() == DomainKind::Disk;
  for (const auto& [c, v] : a.bands) out.bands[c + 1] = dt_band(v, c, a.window, tab);
  return out;
}

namespace {

// w(k) w(k+1) ... w(k+len-1), formed directly.
template <class Real>
Real run_product(const WeightTable<Real>& tab, Index k, int len) {
  Real p = 1;
  for (int j = 0; j < len; ++j) p *= tab.weight(k + j);
  return p;
}

// prod_j w(num+j) / w(den+j), j = first..first+len-1, as a literal quotient product.
template <class Real>
Real ratio_product(const WeightTable<Real>& tab, Index num, Index den, int first, int len) {
  Real p = 1;
  for (int j = first; j < first + len; ++j) p *= tab.weight(num + j) / tab.weight(den + j);
  return p;
}

}  // namespace

template <class Real>
std::vector<Real> qt_g_band(int n, const std::vector<Real>& c, const IndexWindow& window,
                            const WeightTable<Real>& tab, QtPath path) {
  const Index lo = window.k_lo, hi = window.k_hi;
  std::vector<Real> out(static_cast<std::size_t>(window.size()), Real(0));
  const Index k_last = hi - n;
  if (k_last < lo) return out;
  // term(i) without the product factor
  auto term = [&](Index i) {
    return tab.root_s(i) * tab.root_s(i + n - 1) * c[static_cast<std::size_t>(i - lo)] /
           tab.weight(i + n - 1);
  };
  if (path == QtPath::Fast) {
    CompensatedSum<Real> prefix;
    for (Index k = lo; k <= k_last; ++k) {
      const Real sigma = run_product(tab, k, n);
      prefix.add(sigma * term(k));
      out[static_cast<std::size_t>(k - lo)] = prefix.value() / sigma;
    }
  } else {
    for (Index k = lo; k <= k_last; ++k) {
      CompensatedSum<Real> acc;
      for (Index i = lo; i <= k; ++i) acc.add(ratio_product(tab, i, k, 0, n) * term(i));
      out[static_cast<std::size_t>(k - lo)] = acc.value();
    }
  }
  return out;
}

template <class Real>
std::vector<Real> qt_f_band(int n, const std::vector<Real>& c, const IndexWindow& window,
                            const WeightTable<Real>& tab, QtKernelMode mode, QtPath path) {
  const Index lo = window.k_lo, hi = window.k_hi;
  std::vector<Real> out(static_cast<std::size_t>(window.size()), Real(0));
  const Index k_last = hi - n;
  const Index i_last = hi - n - 1;
  if (k_last < lo) return out;
  const bool corrected = mode == QtKernelMode::Corrected;
  auto base = [&](Index i) {
    return tab.root_s(i) * tab.root_s(i + n + 1) * c[static_cast<std::size_t>(i - lo)];
  };
  if (path == QtPath::Fast) {
    CompensatedSum<Real> suffix;
    for (Index k = k_last; k >= lo; --k) {
      Real outer;
      if (k <= i_last) {
        if (corrected) {
          suffix.add(base(k) / (run_product(tab, k, n) * tab.weight(k + n)));
        } else {
          suffix.add(base(k) / run_product(tab, k + 1, n));
        }
      }
      outer = corrected ? run_product(tab, k, n) : run_product(tab, k + 1, n) / tab.weight(k + n);
      out[static_cast<std::size_t>(k - lo)] = -outer * suffix.value();
    }
  } else {
    for (Index k = lo; k <= k_last; ++k) {
      CompensatedSum<Real> acc;
      for (Index i = k; i <= i_last; ++i) {
        if (corrected) {
          acc.add(ratio_product(tab, k, i, 0, n) * base(i) / tab.weight(i + n));
        } else {
          acc.add(ratio_product(tab, k, i, 1, n) * base(i) / tab.weight(k + n));
        }
      }
      out[static_cast<std::size_t>(k - lo)] = -acc.value();
    }
  }
  return out;
}

std::vector<int> qt_output_offsets(const LambdaElement& elem) {
  std::vector<int> out;
  // g side produces offsets -(n) for n = m + 1 over inputs g_m (diag as m = 0)
  for (auto it = elem.g_bands().rbegin(); it != elem.g_bands().rend(); ++it)
    out.push_back(-(it->first + 1));
  if (elem.diagonal()) out.push_back(-1);
  for (const auto& [n, fn] : elem.f_bands()) out.push_back(n - 1);
  return out;
}

template <class Real>
std::vector<Real> qt_output_band(const LambdaElement& elem, const WeightFamily& family,
                                 double t, const IndexWindow& window,
                                 const WeightTable<Real>& tab, int offset, QtKernelMode mode,
                                 QtPath path) {
  const Index lo = window.k_lo, hi = window.k_hi;
  auto samples = [&](const CoefficientFunction& fn, int m) {
    std::vector<Real> c(static_cast<std::size_t>(window.size()), Real(0));
    if (hi - m < lo) return c;
    const auto v = sample_coefficient(fn, family, t, lo, hi - m);
    for (std::size_t j = 0; j < v.size(); ++j) c[j] = static_cast<Real>(v[j]);
    return c;
  };
  if (offset < 0) {
    // g side: g_{n-1} -> g_n, diagonal as g_0
    const int n = -offset;
    const CoefficientFunction* in = nullptr;
    if (n == 1) {
      if (elem.diagonal()) in = &*elem.diagonal();
    } else if (auto it = elem.g_bands().find(n - 1); it != elem.g_bands().end()) {
      in = &it->second;
    }
    if (!in) return {};
    const auto g = qt_g_band<Real>(n, samples(*in, n - 1), window, tab, path);
    std::vector<Real> band(g.size(), Real(0));
    for (Index k = lo; k + n <= hi; ++k)
      band[static_cast<std::size_t>(k + n - lo)] = g[static_cast<std::size_t>(k - lo)];
    return band;
  }
  // f side: f_{n+1} -> f_n
  const int n = offset;
  auto it = elem.f_bands().find(n + 1);
  if (it == elem.f_bands().end()) return {};
  return qt_f_band<Real>(n, samples(it->second, n + 1), window, tab, mode, path);
}

template <class Real>
BasicBandMatrix<Real> apply_Qt(const LambdaElement& elem, const WeightFamily& family,
                               double t, const IndexWindow& window, QtKernelMode mode,
                               QtPath path) {
  check_t(t);
  const int N = elem.top_band();
  if (N + 1 > kMaxQtBand)
    throw ResourceError("parametrix band products longer than " +
                            std::to_string(kMaxQtBand) + " are not supported",
                        N + 1);
  const auto tab = make_weight_table<Real>(family, t, window.k_lo - 1, window.k_hi + 1);
  BasicBandMatrix<Real> out;
  out.window = window;
  out.valid_margin = N + 1;
  out.lower_edge_exact = family.domain() == DomainKind::Disk;
  for (int offset : qt_output_offsets(elem))
    out.bands[offset] = qt_output_band<Real>(elem, family, t, window, tab, offset, mode, path);
  return out;
}

#define QDBAR_INSTANTIATE(Real)                                                              \
  template std::vector<Real> dt_band<Real>(const std::vector<Real>&, int, const IndexWindow&, \
                                           const WeightTable<Real>&);                        \
  template BasicBandMatrix<Real> apply_Dt<Real>(const BasicBandMatrix<Real>&,                \
                                                const WeightFamily&, double);                \
  template std::vector<Real> qt_g_band<Real>(int, const std::vector<Real>&,                  \
                                             const IndexWindow&, const WeightTable<Real>&,   \
                                             QtPath);                                        \
  template std::vector<Real> qt_f_band<Real>(int, const std::vector<Real>&,                  \
                                             const IndexWindow&, const WeightTable<Real>&,   \
                                             QtKernelMode, QtPath);                          \
  template std::vector<Real> qt_output_band<Real>(                                           \
      const LambdaElement&, const WeightFamily&, double, const IndexWindow&,                \
      const WeightTable<Real>&, int, QtKernelMode, QtPath);                                 \
  template BasicBandMatrix<Real> apply_Qt<Real>(const LambdaElement&, const WeightFamily&,   \
                                                double, const IndexWindow&, QtKernelMode,    \
                                                QtPath);

QDBAR_INSTANTIATE(double)
QDBAR_INSTANTIATE(long double)
#undef QDBAR_INSTANTIATE

LambdaElement tilde_element(const LambdaElement& elem, const WeightFamily& family,
                            QtKernelMode mode) {
  const int N = elem.top_band();
  std::map<int, CoefficientFunction> f, g;
  std::optional<CoefficientFunction> diag;

  for (int n = 1; n <= N + 1; ++n) {
    const CoefficientFunction* in = nullptr;
    if (n == 1) {
      if (elem.diagonal()) in = &*elem.diagonal();
    } else if (auto it = elem.g_bands().find(n - 1); it != elem.g_bands().end()) {
      in = &it->second;
    }
    if (!in) continue;
    TransformSpec spec;
    spec.direction = TransformSpec::Direction::FromLower;
    spec.endpoint = family.w_minus_sq();
    spec.outer_twice_power = -n;
    spec.inner_twice_power = n - 1;
    spec.sign = 1.0;
    spec.inner = std::make_shared<const CoefficientFunction>(*in);
    g.emplace(n, CoefficientFunction::transform(std::move(spec)));
  }
  for (int n = 0; n + 1 <= N; ++n) {
    auto it = elem.f_bands().find(n + 1);
    if (it == elem.f_bands().end()) continue;
    TransformSpec spec;
    spec.direction = TransformSpec::Direction::ToUpper;
    spec.endpoint = family.w_plus_sq();
    if (mode == QtKernelMode::Corrected) {
      spec.outer_twice_power = n;
      spec.inner_twice_power = -(n + 1);
    } else {
      spec.outer_twice_power = n - 1;
      spec.inner_twice_power = -n;
    }
    spec.sign = -1.0;
    spec.inner = std::make_shared<const CoefficientFunction>(it->second);
    auto fn = CoefficientFunction::transform(std::move(spec));
    if (n == 0)
      diag = std::move(fn);
    else
      f.emplace(n, std::move(fn));
  }
  return LambdaElement(std::move(f), std::move(g), std::move(diag));
}

namespace {

// sqrt(s) h'(s) + sign * n / (2 sqrt(s)) h(s)
CoefficientFunction dbar_coefficient(const CoefficientFunction& h, int n, double sign,
                                     const std::string& band) {
  if (!h.has_derivative())
    throw CapabilityError("apply_D0: band " + band + " has no derivative");
  if (h.is_power_series()) {
    auto d = h.derivative_series().scaled(1.0, 1);
    if (n == 0) return d;
    return d + h.scaled(sign * 0.5 * n, -1);
  }
  return CoefficientFunction::derived(
      [h, n, sign](double s) {
        const double r = std::sqrt(s);
        return r * h.derivative(s) + sign * 0.5 * n / r * h(s);
      },
      "dbar(" + h.describe() + ")");
}

}  // namespace

LambdaElement apply_D0(const LambdaElement& elem, const WeightFamily& /*family*/) {
  std::map<int, CoefficientFunction> f, g;
  std::optional<CoefficientFunction> diag;
  if (elem.diagonal()) f.emplace(1, dbar_coefficient(*elem.diagonal(), 0, -1.0, "diag"));
  for (const auto& [n, fn] : elem.f_bands())
    f.emplace(n + 1, dbar_coefficient(fn, n, -1.0, "f" + std::to_string(n)));
  for (const auto& [n, fn] : elem.g_bands()) {
    auto c = dbar_coefficient(fn, n, +1.0, "g" + std::to_string(n));
    if (n == 1)
      diag = std::move(c);
    else
      g.emplace(n - 1, std::move(c));
  }
  return LambdaElement(std::move(f), std::move(g), std::move(diag));
}

}  // namespace qdbar
