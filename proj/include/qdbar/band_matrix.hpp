#pragma once

#include <map>
#include <vector>

#include "qdbar/errors.hpp"
#include "qdbar/window.hpp"

namespace qdbar {

/// Banded matrix over an index window. Band b holds the entries A[col+b, col]
/// in a vector indexed by col - k_lo; positions whose row falls outside the
/// window are stored as zero and are not part of the matrix.
template <class Real>
struct BasicBandMatrix {
  IndexWindow window;
  std::map<int, std::vector<Real>> bands;
  /// Entries with row or column within `valid_margin` of the upper edge (and
  /// of the lower edge unless `lower_edge_exact`) are untrusted.
  int valid_margin = 0;
  bool lower_edge_exact = false;

  Index lo() const noexcept { return window.k_lo; }
  Index hi() const noexcept { return window.k_hi; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(window.size()); }

  std::vector<Real>& band(int b) {
    auto& v = bands[b];
    if (v.empty()) v.assign(size(), Real(0));
    return v;
  }

  /// First and last trusted index.
  Index trusted_lo() const noexcept { return lower_edge_exact ? lo() : lo() + valid_margin; }
  Index trusted_hi() const noexcept { return hi() - valid_margin; }
  bool trusted(Index row, Index col) const noexcept {
    return row >= trusted_lo() && row <= trusted_hi() && col >= trusted_lo() &&
           col <= trusted_hi();
  }

  /// Column range [first, last] of band b whose rows lie in the window.
  std::pair<Index, Index> columns(int b) const noexcept {
    return {std::max(lo(), lo() - b), std::min(hi(), hi() - b)};
  }

  Real at(Index row, Index col) const {
    if (!window.contains(row) || !window.contains(col))
      throw DomainError("band matrix index outside window");
    auto it = bands.find(static_cast<int>(row - col));
    if (it == bands.end()) return Real(0);
    return it->second[static_cast<std::size_t>(col - lo())];
  }
};

using BandMatrix = BasicBandMatrix<double>;

/// w_t(k) and S_t(k)^(1/2) tabulated on [base, base + size).
template <class Real>
struct WeightTable {
  Index base = 0;
  std::vector<Real> w;
  std::vector<Real> sqrt_s;

  Real weight(Index k) const { return w[static_cast<std::size_t>(k - base)]; }
  Real root_s(Index k) const { return sqrt_s[static_cast<std::size_t>(k - base)]; }
};

template <class Real>
WeightTable<Real> make_weight_table(const WeightFamily& family, double t, Index lo,
                                    Index hi) {
  WeightTable<Real> tab;
  tab.base = lo;
  const auto n = static_cast<std::size_t>(hi - lo + 1);
  tab.w.resize(n);
  tab.sqrt_s.resize(n);
  const Real tr = static_cast<Real>(t);
  for (std::size_t j = 0; j < n; ++j) {
    const Index k = lo + static_cast<Index>(j);
    tab.w[j] = family.weight<Real>(tr, k);
    tab.sqrt_s[j] = std::sqrt(family.s_value<Real>(tr, k));
  }
  return tab;
}

}  // namespace qdbar
