#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "qdbar/coefficient.hpp"

namespace qdbar {

enum class BandSide { F, G, Diag };

/// One entry of a band specification: side f (U^n f_n), side g
/// (g_n (U*)^n), or the diagonal. n = 0 on the f or g side also denotes the
/// diagonal.
struct BandSpec {
  BandSide side = BandSide::Diag;
  int n = 0;
  CoefficientFunction fn;
};

/// Finite band sum  sum_n U^n f_n + diag + sum_n g_n (U*)^n  in canonical
/// form: the diagonal is stored once, f and g maps are keyed by n >= 1.
class LambdaElement {
 public:
  LambdaElement() = default;
  LambdaElement(std::map<int, CoefficientFunction> f,
                std::map<int, CoefficientFunction> g,
                std::optional<CoefficientFunction> diagonal);

  const std::map<int, CoefficientFunction>& f_bands() const noexcept { return f_; }
  const std::map<int, CoefficientFunction>& g_bands() const noexcept { return g_; }
  const std::optional<CoefficientFunction>& diagonal() const noexcept { return diag_; }

  /// Largest n carrying a band (0 when only the diagonal is present).
  int top_band() const noexcept;
  bool empty() const noexcept { return f_.empty() && g_.empty() && !diag_; }
  bool all_differentiable() const noexcept;

  /// Canonical band list: g bands descending, diagonal, f bands ascending.
  std::vector<BandSpec> band_spec() const;

  friend bool operator==(const LambdaElement& a, const LambdaElement& b);

 private:
  std::map<int, CoefficientFunction> f_;
  std::map<int, CoefficientFunction> g_;
  std::optional<CoefficientFunction> diag_;
};

/// Validates and canonicalizes a band list. f_0, g_0 and an explicit
/// diagonal are merged into one diagonal by summation.
LambdaElement make_element(const std::vector<BandSpec>& spec);

/// "one", "z" or "zbar".
LambdaElement coordinate_element(std::string_view name);

}  // namespace qdbar
