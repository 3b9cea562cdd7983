#include "qdbar/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdbar/errors.hpp"
#include "qdbar/numeric.hpp"
#include "qdbar/quadrature.hpp"

namespace qdbar {

struct CoefficientFunction::Opaque {
  TransformSpec transform;
  std::function<double(double)> closure;
  std::string description;

  double integrand(double u) const {
    return (*transform.inner)(u) * qdbar::half_power(u, transform.inner_twice_power);
  }

  /// Integral of the transform over [lo, hi] to a tolerance relative to the
  /// magnitude of the integrand there.
  double piece(double lo, double hi) const {
    if (lo == hi) return 0.0;
    auto g = [this](double u) { return integrand(u); };
    const double scale =
        kronrod_panel([this](double u) { return std::abs(integrand(u)); }, lo, hi);
    const auto r = integrate_adaptive(g, lo, hi, 1e-14 * scale + 1e-300);
    if (!r.converged && r.error > 1e-11 * scale + 1e-300) {
      throw NumericalError("transform quadrature did not converge", r.value, r.error);
    }
    return r.value;
  }

  double accumulated(double s) const {
    const auto& t = transform;
    return t.direction == TransformSpec::Direction::FromLower ? piece(t.endpoint, s)
                                                              : piece(s, t.endpoint);
  }
};

CoefficientFunction::CoefficientFunction() { build_series(); }

CoefficientFunction CoefficientFunction::poly(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ParameterError("empty polynomial coefficient list");
  std::map<int, double> terms;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] != 0.0) terms[static_cast<int>(2 * j)] = coeffs[j];
  }
  CoefficientFunction f = from_terms(std::move(terms));
  f.kind_ = Kind::Poly;
  f.coeffs_ = std::move(coeffs);
  return f;
}

CoefficientFunction CoefficientFunction::sqrt_poly(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ParameterError("empty polynomial coefficient list");
  std::map<int, double> terms;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] != 0.0) terms[static_cast<int>(2 * j + 1)] = coeffs[j];
  }
  CoefficientFunction f = from_terms(std::move(terms));
  f.kind_ = Kind::SqrtPoly;
  f.coeffs_ = std::move(coeffs);
  return f;
}

CoefficientFunction CoefficientFunction::half_power(std::map<int, double> terms) {
  return from_terms(std::move(terms));
}

CoefficientFunction CoefficientFunction::from_terms(std::map<int, double> terms) {
  std::erase_if(terms, [](const auto& kv) { return kv.second == 0.0; });
  CoefficientFunction f;
  f.terms_ = std::move(terms);
  // Classify: non-negative even exponents are a polynomial, positive odd
  // exponents a sqrt-polynomial.
  bool all_even = true;
  bool all_odd = true;
  for (const auto& [m, c] : f.terms_) {
    if (m < 0 || m % 2 != 0) all_even = false;
    if (m < 0 || m % 2 == 0) all_odd = false;
  }
  if (all_even) {
    f.kind_ = Kind::Poly;
    const int top = f.terms_.empty() ? 0 : f.terms_.rbegin()->first / 2;
    f.coeffs_.assign(static_cast<std::size_t>(top) + 1, 0.0);
    for (const auto& [m, c] : f.terms_) f.coeffs_[static_cast<std::size_t>(m / 2)] = c;
  } else if (all_odd) {
    f.kind_ = Kind::SqrtPoly;
    const int top = f.terms_.rbegin()->first / 2;
    f.coeffs_.assign(static_cast<std::size_t>(top) + 1, 0.0);
    for (const auto& [m, c] : f.terms_) f.coeffs_[static_cast<std::size_t>(m / 2)] = c;
  } else {
    f.kind_ = Kind::HalfPower;
  }
  f.build_series();
  return f;
}

CoefficientFunction CoefficientFunction::transform(TransformSpec spec) {
  if (!spec.inner) throw ParameterError("transform without inner function");
  CoefficientFunction f;
  f.kind_ = Kind::Transform;
  auto op = std::make_shared<Opaque>();
  op->transform = std::move(spec);
  f.opaque_ = std::move(op);
  return f;
}

CoefficientFunction CoefficientFunction::derived(std::function<double(double)> fn,
                                                 std::string description) {
  CoefficientFunction f;
  f.kind_ = Kind::Derived;
  auto op = std::make_shared<Opaque>();
  op->closure = std::move(fn);
  op->description = std::move(description);
  f.opaque_ = std::move(op);
  return f;
}

void CoefficientFunction::build_series() {
  series_ = Series{};
  if (terms_.empty()) return;
  series_.lowest = terms_.begin()->first;
  for (const auto& [m, c] : terms_) {
    const int off = m - series_.lowest;
    auto& v = off % 2 == 0 ? series_.even : series_.odd;
    const auto j = static_cast<std::size_t>(off / 2);
    if (v.size() <= j) v.resize(j + 1, 0.0);
    v[j] = c;
  }
}

double CoefficientFunction::eval_series(double s) const {
  if (terms_.empty()) return 0.0;
  double a = 0.0;
  for (auto it = series_.even.rbegin(); it != series_.even.rend(); ++it) a = a * s + *it;
  if (!series_.odd.empty()) {
    double b = 0.0;
    for (auto it = series_.odd.rbegin(); it != series_.odd.rend(); ++it) b = b * s + *it;
    a += std::sqrt(s) * b;
  }
  return series_.lowest == 0 ? a : qdbar::half_power(s, series_.lowest) * a;
}

const TransformSpec* CoefficientFunction::transform_spec() const noexcept {
  return kind_ == Kind::Transform ? &opaque_->transform : nullptr;
}

double CoefficientFunction::operator()(double s) const {
  switch (kind_) {
    case Kind::Poly:
    case Kind::SqrtPoly:
    case Kind::HalfPower:
      return eval_series(s);
    case Kind::Transform: {
      const auto& t = opaque_->transform;
      return t.sign * qdbar::half_power(s, t.outer_twice_power) * opaque_->accumulated(s);
    }
    case Kind::Derived:
      return opaque_->closure(s);
  }
  return 0.0;
}

double CoefficientFunction::derivative(double s) const {
  switch (kind_) {
    case Kind::Poly:
    case Kind::SqrtPoly:
    case Kind::HalfPower:
      return derivative_series()(s);
    case Kind::Transform: {
      const auto& t = opaque_->transform;
      const double p = 0.5 * t.outer_twice_power;
      const double integral = opaque_->accumulated(s);
      double d_integral = opaque_->integrand(s);
      if (t.direction == TransformSpec::Direction::ToUpper) d_integral = -d_integral;
      return t.sign * (p * qdbar::half_power(s, t.outer_twice_power - 2) * integral +
                       qdbar::half_power(s, t.outer_twice_power) * d_integral);
    }
    case Kind::Derived:
      break;
  }
  throw CapabilityError("coefficient function has no derivative: " + describe());
}

void CoefficientFunction::evaluate_sorted(std::span<const double> s,
                                          std::span<double> out) const {
  if (out.size() < s.size()) throw ParameterError("evaluate_sorted: output too short");
  if (kind_ != Kind::Transform || s.empty() ||
      !std::is_sorted(s.begin(), s.end())) {
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = (*this)(s[i]);
    return;
  }
  const auto& t = opaque_->transform;
  const std::size_t n = s.size();
  if (t.direction == TransformSpec::Direction::FromLower) {
    CompensatedSum<double> acc;
    acc.add(opaque_->piece(t.endpoint, s[0]));
    out[0] = acc.value();
    for (std::size_t i = 1; i < n; ++i) {
      acc.add(opaque_->piece(s[i - 1], s[i]));
      out[i] = acc.value();
    }
  } else {
    CompensatedSum<double> acc;
    acc.add(opaque_->piece(s[n - 1], t.endpoint));
    out[n - 1] = acc.value();
    for (std::size_t i = n - 1; i-- > 0;) {
      acc.add(opaque_->piece(s[i], s[i + 1]));
      out[i] = acc.value();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] *= t.sign * qdbar::half_power(s[i], t.outer_twice_power);
  }
}

bool CoefficientFunction::is_zero() const noexcept {
  return is_power_series() && terms_.empty();
}

std::string CoefficientFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Poly:
    case Kind::SqrtPoly:
    case Kind::HalfPower: {
      if (terms_.empty()) return "0";
      bool first = true;
      for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        if (m != 0) os << "*s^(" << m << "/2)";
      }
      return os.str();
    }
    case Kind::Transform: {
      const auto& t = opaque_->transform;
      os << (t.sign < 0 ? "-" : "") << "s^(" << t.outer_twice_power << "/2)*int_";
      if (t.direction == TransformSpec::Direction::FromLower)
        os << "[" << t.endpoint << ",s]";
      else
        os << "[s," << t.endpoint << "]";
      os << " (" << t.inner->describe() << ")*u^(" << t.inner_twice_power << "/2) du";
      return os.str();
    }
    case Kind::Derived:
      return opaque_->description;
  }
  return {};
}

CoefficientFunction operator+(const CoefficientFunction& a,
                              const CoefficientFunction& b) {
  if (!a.is_power_series() || !b.is_power_series())
    throw CapabilityError("only power-series coefficients can be added");
  std::map<int, double> terms = a.terms_;
  for (const auto& [m, c] : b.terms_) terms[m] += c;
  return CoefficientFunction::from_terms(std::move(terms));
}

CoefficientFunction CoefficientFunction::scaled(double c, int twice_power_shift) const {
  if (!is_power_series()) throw CapabilityError("scaled: not a power series");
  std::map<int, double> terms;
  for (const auto& [m, v] : terms_) terms[m + twice_power_shift] = c * v;
  return from_terms(std::move(terms));
}

CoefficientFunction CoefficientFunction::derivative_series() const {
  if (!is_power_series()) throw CapabilityError("derivative_series: not a power series");
  std::map<int, double> terms;
  for (const auto& [m, v] : terms_) {
    if (m != 0) terms[m - 2] = 0.5 * m * v;
  }
  return from_terms(std::move(terms));
}

bool operator==(const CoefficientFunction& a, const CoefficientFunction& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.is_power_series()) return a.terms_ == b.terms_ && a.coeffs_ == b.coeffs_;
  return a.opaque_ == b.opaque_;
}

}  // namespace qdbar
