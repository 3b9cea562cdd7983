#include "qdbar/element.hpp"

#include <string>

#include "qdbar/errors.hpp"

namespace qdbar {

LambdaElement::LambdaElement(std::map<int, CoefficientFunction> f,
                             std::map<int, CoefficientFunction> g,
                             std::optional<CoefficientFunction> diagonal)
    : f_(std::move(f)), g_(std::move(g)), diag_(std::move(diagonal)) {
  for (const auto& [n, fn] : f_)
    if (n < 1) throw ParameterError("f band index must be >= 1");
  for (const auto& [n, fn] : g_)
    if (n < 1) throw ParameterError("g band index must be >= 1");
}

int LambdaElement::top_band() const noexcept {
  int top = 0;
  if (!f_.empty()) top = std::max(top, f_.rbegin()->first);
  if (!g_.empty()) top = std::max(top, g_.rbegin()->first);
  return top;
}

bool LambdaElement::all_differentiable() const noexcept {
  for (const auto& [n, fn] : f_)
    if (!fn.has_derivative()) return false;
  for (const auto& [n, fn] : g_)
    if (!fn.has_derivative()) return false;
  return !diag_ || diag_->has_derivative();
}

std::vector<BandSpec> LambdaElement::band_spec() const {
  std::vector<BandSpec> out;
  for (auto it = g_.rbegin(); it != g_.rend(); ++it)
    out.push_back({BandSide::G, it->first, it->second});
  if (diag_) out.push_back({BandSide::Diag, 0, *diag_});
  for (const auto& [n, fn] : f_) out.push_back({BandSide::F, n, fn});
  return out;
}

bool operator==(const LambdaElement& a, const LambdaElement& b) {
  return a.f_ == b.f_ && a.g_ == b.g_ && a.diag_ == b.diag_;
}

namespace {

const char* side_name(BandSide s) {
  switch (s) {
    case BandSide::F:
      return "f";
    case BandSide::G:
      return "g";
    case BandSide::Diag:
      return "diag";
  }
  return "?";
}

}  // namespace

LambdaElement make_element(const std::vector<BandSpec>& spec) {
  if (spec.empty()) throw ParameterError("element band list is empty");
  std::map<int, CoefficientFunction> f;
  std::map<int, CoefficientFunction> g;
  std::optional<CoefficientFunction> diag;
  bool seen_f0 = false, seen_g0 = false, seen_diag = false;

  for (const auto& b : spec) {
    if (b.n < 0) throw ParameterError("band index must be nonnegative");
    const bool diagonal = b.side == BandSide::Diag || b.n == 0;
    if (b.side == BandSide::Diag && b.n != 0)
      throw ParameterError("diagonal band must have n = 0");
    if (diagonal) {
      bool& seen = b.side == BandSide::F ? seen_f0 : b.side == BandSide::G ? seen_g0 : seen_diag;
      if (seen)
        throw ParameterError(std::string("duplicate band: ") + side_name(b.side) + " 0");
      seen = true;
      if (!diag) {
        diag = b.fn;
      } else {
        if (!diag->is_power_series() || !b.fn.is_power_series())
          throw CapabilityError("cannot merge non-polynomial diagonal contributions");
        diag = *diag + b.fn;
      }
      continue;
    }
    auto& bands = b.side == BandSide::F ? f : g;
    if (!bands.emplace(b.n, b.fn).second)
      throw ParameterError(std::string("duplicate band: ") + side_name(b.side) + " " +
                           std::to_string(b.n));
  }
  return LambdaElement(std::move(f), std::move(g), std::move(diag));
}

LambdaElement coordinate_element(std::string_view name) {
  if (name == "one") return make_element({{BandSide::Diag, 0, CoefficientFunction::poly({1.0})}});
  if (name == "z") return make_element({{BandSide::F, 1, CoefficientFunction::sqrt_poly({1.0})}});
  if (name == "zbar")
    return make_element({{BandSide::G, 1, CoefficientFunction::sqrt_poly({1.0})}});
  throw ParameterError("unknown coordinate element: " + std::string(name));
}

}  // namespace qdbar
