#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qdbar {

using Index = std::int64_t;

/// Disk: index set N (unilateral shift). Annulus: index set Z (bilateral).
enum class DomainKind { Disk, Annulus };

enum class FamilyKind { UnilateralExample, BilateralRational, BilateralArctan };

struct FamilySpec {
  FamilyKind kind = FamilyKind::UnilateralExample;
  double alpha = 0.0;
  double beta = 0.0;
  /// When given, must agree with the kind (unilateral -> disk).
  std::optional<DomainKind> domain;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

/// A one-parameter family of weight sequences w_t(k).
///
/// Built-in families:
///   UnilateralExample  w_t(k)^2 = (k+1)t / (1+(k+1)t),  k >= 0
///   BilateralRational  w_t(k)^2 = alpha + beta t k / (1 + t|k|)
///   BilateralArctan    w_t(k)^2 = alpha + beta atan(t k)
///
/// The family never stores t; every evaluation takes it as an argument.
/// All closed forms are templates so that the same family can be evaluated
/// in double or long double.
class WeightFamily {
 public:
  static WeightFamily make(const FamilySpec& spec);

  FamilyKind kind() const noexcept { return kind_; }
  DomainKind domain() const noexcept { return domain_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  double w_plus() const noexcept { return std::sqrt(w_plus_sq_); }
  double w_minus() const noexcept { return std::sqrt(w_minus_sq_); }
  double w_plus_sq() const noexcept { return w_plus_sq_; }
  double w_minus_sq() const noexcept { return w_minus_sq_; }
  /// tr S_t = w_+^2 - w_-^2.
  double trace() const noexcept { return w_plus_sq_ - w_minus_sq_; }

  /// Smallest index of the index set (0 for the disk).
  Index first_index() const noexcept {
    return domain_ == DomainKind::Disk ? 0 : std::numeric_limits<Index>::min();
  }
  bool in_index_set(Index k) const noexcept { return k >= first_index(); }

  /// w_t(k)^2; zero for k < 0 on the disk.
  template <class Real>
  Real weight_sq(Real t, Index k) const;

  template <class Real>
  Real weight(Real t, Index k) const {
    return std::sqrt(weight_sq(t, k));
  }

  /// S_t(k) = w_t(k)^2 - w_t(k-1)^2 in a cancellation-free closed form.
  template <class Real>
  Real s_value(Real t, Index k) const;

  /// Sum_{j > k} S_t(j) = w_+^2 - w_t(k)^2, cancellation free.
  template <class Real>
  Real upper_tail(Real t, Index k) const;

  /// Sum_{j < k} S_t(j) = w_t(k-1)^2 - w_-^2, cancellation free.
  template <class Real>
  Real lower_tail(Real t, Index k) const;

  /// 1 - w_t(k-1)/w_t(k). t == 0 returns the t -> 0+ limit.
  double ratio_deviation(double t, Index k) const;

  /// t-independent constant C with w_t(k) <= C w_t(k-1) for all k above the
  /// first index.
  double wratio_const() const;

  std::string name() const;
  FamilySpec spec() const;

 private:
  FamilyKind kind_ = FamilyKind::UnilateralExample;
  DomainKind domain_ = DomainKind::Disk;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double w_plus_sq_ = 1.0;
  double w_minus_sq_ = 0.0;
};

WeightFamily make_family(const FamilySpec& spec);

/// Validates t in (0, 1] and returns w_t(k).
double weight_value(const WeightFamily& family, double t, Index k);
/// Validates t in (0, 1] and returns S_t(k).
double s_value(const WeightFamily& family, double t, Index k);

void check_t(double t);

struct IndexRange {
  Index lo = 0;
  Index hi = 0;
};

/// Numerical audit of the weight conditions on a finite window.
struct ConditionReport {
  std::vector<double> t_grid;
  IndexRange window;
  Index tail_index = 0;

  std::vector<double> h1;  ///< per t: sup_k S_t(k)
  std::vector<double> h2;  ///< per t: sup_k |1 - S_t(k+1)/S_t(k)|
  std::vector<Index> h3_index;
  std::vector<double> h3;  ///< per k: sup_t |1 - w_t(k-1)/w_t(k)|, t -> 0+ included
  bool monotonicity_ok = true;
  bool positivity_ok = true;
  std::vector<double> limit_deviation;  ///< per t: max_{k >= M} |w_t(k) - w_+| (+ w_- side)
  std::vector<double> trace_sum;
  std::vector<double> trace_deviation;  ///< per t: |sum_window S - (w_+^2 - w_-^2)|
  std::vector<double> trace_tail_bound; ///< per t: analytic omitted mass
  double const_wratio = 0.0;            ///< sup w_t(k)/w_t(k-1) over the scan
  double const_from_h3 = 0.0;           ///< 1 / (1 - max_k h3(k))

  /// Closed-form references (empty when the family has none).
  std::vector<double> h1_ref;
  std::vector<double> h2_ref;
  std::vector<double> h3_ref;
  /// Unilateral example only: max |S_t(k) - t(1-w(k-1)^2)(1-w(k)^2)|.
  std::optional<double> commutation_deviation;
};

ConditionReport condition_report(const WeightFamily& family,
                                 std::span<const double> t_grid,
                                 IndexRange window, Index tail_index);

/// min over k in the window of (2+h2)^(n-1) h2 - |S_t(k+n)/S_t(k) - 1|.
/// h2 is taken over the same window.
double s_ratio_margin(const WeightFamily& family, double t, int n,
                      IndexRange window);

// ---------------------------------------------------------------------------

template <class Real>
Real WeightFamily::weight_sq(Real t, Index k) const {
  const Real kr = static_cast<Real>(k);
  switch (kind_) {
    case FamilyKind::UnilateralExample: {
      if (k < 0) return Real(0);
      const Real x = (kr + 1) * t;
      return x / (1 + x);
    }
    case FamilyKind::BilateralRational:
      return Real(alpha_) + Real(beta_) * t * kr / (1 + t * std::abs(kr));
    case FamilyKind::BilateralArctan:
      return Real(alpha_) + Real(beta_) * std::atan(t * kr);
  }
  return Real(0);
}

template <class Real>
Real WeightFamily::s_value(Real t, Index k) const {
  const Real kr = static_cast<Real>(k);
  switch (kind_) {
    case FamilyKind::UnilateralExample:
      if (k < 0) return Real(0);
      return t / ((1 + kr * t) * (1 + (kr + 1) * t));
    case FamilyKind::BilateralRational:
      return Real(beta_) * t /
             ((1 + t * std::abs(kr)) * (1 + t * std::abs(kr - 1)));
    case FamilyKind::BilateralArctan:
      // atan(a) - atan(b) = atan((a-b)/(1+ab)) since ab = t^2 k(k-1) >= 0
      return Real(beta_) * std::atan(t / (1 + t * t * kr * (kr - 1)));
  }
  return Real(0);
}

template <class Real>
Real WeightFamily::upper_tail(Real t, Index k) const {
  const Real kr = static_cast<Real>(k);
  const Real half_pi = std::numbers::pi_v<Real> / 2;
  switch (kind_) {
    case FamilyKind::UnilateralExample:
      if (k < 0) return Real(1);
      return 1 / (1 + (kr + 1) * t);
    case FamilyKind::BilateralRational: {
      const Real m = t * std::abs(kr);
      if (k >= 0) return Real(beta_) / (1 + m);
      return Real(beta_) * (1 + 2 * m) / (1 + m);
    }
    case FamilyKind::BilateralArctan: {
      const Real x = t * kr;
      if (x > 0) return Real(beta_) * std::atan(1 / x);
      return Real(beta_) * (half_pi + std::atan(-x));
    }
  }
  return Real(0);
}

template <class Real>
Real WeightFamily::lower_tail(Real t, Index k) const {
  const Real j = static_cast<Real>(k - 1);
  const Real half_pi = std::numbers::pi_v<Real> / 2;
  switch (kind_) {
    case FamilyKind::UnilateralExample:
      return weight_sq(t, k - 1);
    case FamilyKind::BilateralRational: {
      const Real m = t * std::abs(j);
      if (k - 1 <= 0) return Real(beta_) / (1 + m);
      return Real(beta_) * (1 + 2 * m) / (1 + m);
    }
    case FamilyKind::BilateralArctan: {
      const Real y = t * j;
      if (y < 0) return Real(beta_) * std::atan(-1 / y);
      return Real(beta_) * (half_pi + std::atan(y));
    }
  }
  return Real(0);
}

}  // namespace qdbar
