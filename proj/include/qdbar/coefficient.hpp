#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qdbar {

class CoefficientFunction;

/// Integral transform  sign * s^(outer/2) * Int inner(u) u^(inner_power/2) du
/// taken over [endpoint, s] (FromLower) or [s, endpoint] (ToUpper).
struct TransformSpec {
  enum class Direction { FromLower, ToUpper };
  Direction direction = Direction::FromLower;
  double endpoint = 0.0;
  int outer_twice_power = 0;
  int inner_twice_power = 0;
  double sign = 1.0;
  std::shared_ptr<const CoefficientFunction> inner;
};

/// A real function of s = r^2 on [w_-^2, w_+^2], used as a band coefficient.
///
/// Power-series kinds (Poly, SqrtPoly, HalfPower) are sums c * s^(m/2) and
/// carry exact derivatives. Transform evaluates by adaptive quadrature and
/// differentiates through the fundamental theorem of calculus. Derived is an
/// opaque pointwise closure without a derivative.
class CoefficientFunction {
 public:
  enum class Kind { Poly, SqrtPoly, HalfPower, Transform, Derived };

  /// Zero function.
  CoefficientFunction();

  /// sum_j coeffs[j] s^j. Throws ParameterError on an empty list.
  static CoefficientFunction poly(std::vector<double> coeffs);
  /// sqrt(s) * sum_j coeffs[j] s^j.
  static CoefficientFunction sqrt_poly(std::vector<double> coeffs);
  /// sum over (m, c) of c s^(m/2); the key is twice the exponent.
  static CoefficientFunction half_power(std::map<int, double> terms);
  static CoefficientFunction transform(TransformSpec spec);
  static CoefficientFunction derived(std::function<double(double)> fn,
                                     std::string description);

  Kind kind() const noexcept { return kind_; }
  bool is_power_series() const noexcept {
    return kind_ == Kind::Poly || kind_ == Kind::SqrtPoly ||
           kind_ == Kind::HalfPower;
  }
  bool has_derivative() const noexcept { return kind_ != Kind::Derived; }

  double operator()(double s) const;
  double derivative(double s) const;

  /// Evaluates at ascending points. Transforms accumulate the integral
  /// panel by panel instead of integrating from the endpoint each time.
  void evaluate_sorted(std::span<const double> s, std::span<double> out) const;

  /// Power-series terms keyed by twice the exponent (empty otherwise).
  const std::map<int, double>& terms() const noexcept { return terms_; }
  /// Coefficient list for Poly / SqrtPoly as given (trailing zeros kept).
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  const TransformSpec* transform_spec() const noexcept;

  /// Power series that is identically zero.
  bool is_zero() const noexcept;
  std::string describe() const;

  /// Power-series arithmetic; throws CapabilityError for other kinds.
  friend CoefficientFunction operator+(const CoefficientFunction& a,
                                       const CoefficientFunction& b);
  CoefficientFunction scaled(double c, int twice_power_shift) const;
  CoefficientFunction derivative_series() const;

  /// Power series compare by terms and declared kind; other kinds by
  /// identity of their shared state.
  friend bool operator==(const CoefficientFunction& a,
                         const CoefficientFunction& b);

 private:
  struct Series {
    int lowest = 0;             // lowest twice-exponent
    std::vector<double> even;   // Horner coefficients of s^j at offset 2j
    std::vector<double> odd;    // Horner coefficients of s^j at offset 2j+1
  };
  struct Opaque;

  static CoefficientFunction from_terms(std::map<int, double> terms);
  void build_series();
  double eval_series(double s) const;

  Kind kind_ = Kind::Poly;
  std::map<int, double> terms_;
  std::vector<double> coeffs_;
  Series series_;
  std::shared_ptr<const Opaque> opaque_;
};

}  // namespace qdbar
