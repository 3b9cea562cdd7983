#include "qdbar/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdbar/errors.hpp"
#include "qdbar/numeric.hpp"

namespace qdbar {

WeightFamily WeightFamily::make(const FamilySpec& spec) {
  WeightFamily f;
  f.kind_ = spec.kind;
  f.alpha_ = spec.alpha;
  f.beta_ = spec.beta;
  const double half_pi = std::numbers::pi / 2;
  switch (spec.kind) {
    case FamilyKind::UnilateralExample:
      f.domain_ = DomainKind::Disk;
      f.alpha_ = 0.0;
      f.beta_ = 0.0;
      f.w_plus_sq_ = 1.0;
      f.w_minus_sq_ = 0.0;
      break;
    case FamilyKind::BilateralRational:
      if (!(spec.beta > 0.0))
        throw ParameterError("bilateral_rational: beta > 0 required");
      if (!(spec.alpha > spec.beta))
        throw ParameterError(
            "bilateral_rational: alpha > beta required (w_minus^2 = alpha - "
            "beta must be positive, w_minus^2 < 0 otherwise)");
      f.domain_ = DomainKind::Annulus;
      f.w_plus_sq_ = spec.alpha + spec.beta;
      f.w_minus_sq_ = spec.alpha - spec.beta;
      break;
    case FamilyKind::BilateralArctan:
      if (!(spec.beta > 0.0))
        throw ParameterError("bilateral_arctan: beta > 0 required");
      if (!(spec.alpha > spec.beta * half_pi))
        throw ParameterError(
            "bilateral_arctan: alpha > beta*pi/2 required (w_minus^2 = alpha "
            "- beta*pi/2 must be positive)");
      f.domain_ = DomainKind::Annulus;
      f.w_plus_sq_ = spec.alpha + spec.beta * half_pi;
      f.w_minus_sq_ = spec.alpha - spec.beta * half_pi;
      break;
  }
  if (spec.domain && *spec.domain != f.domain_) {
    throw ParameterError(f.domain_ == DomainKind::Disk
                             ? "unilateral weights define a disk, not an annulus"
                             : "bilateral weights define an annulus, not a disk");
  }
  return f;
}

WeightFamily make_family(const FamilySpec& spec) { return WeightFamily::make(spec); }

FamilySpec WeightFamily::spec() const {
  FamilySpec s;
  s.kind = kind_;
  s.alpha = alpha_;
  s.beta = beta_;
  s.domain = domain_;
  return s;
}

std::string WeightFamily::name() const {
  std::ostringstream os;
  switch (kind_) {
    case FamilyKind::UnilateralExample:
      os << "unilateral_example";
      break;
    case FamilyKind::BilateralRational:
      os << "bilateral_rational(alpha=" << alpha_ << ",beta=" << beta_ << ")";
      break;
    case FamilyKind::BilateralArctan:
      os << "bilateral_arctan(alpha=" << alpha_ << ",beta=" << beta_ << ")";
      break;
  }
  return os.str();
}

double WeightFamily::ratio_deviation(double t, Index k) const {
  if (domain_ == DomainKind::Disk && k <= 0) return 1.0;
  if (t == 0.0) {
    if (kind_ != FamilyKind::UnilateralExample) return 0.0;
    // w_t(k)/sqrt(t) -> sqrt(k+1), S_t(k)/t -> 1
    const double a = std::sqrt(static_cast<double>(k) + 1.0);
    const double b = std::sqrt(static_cast<double>(k));
    return 1.0 / (a * (a + b));
  }
  const double wk = weight(t, k);
  const double wk1 = weight(t, k - 1);
  return s_value(t, k) / (wk * (wk + wk1));
}

double WeightFamily::wratio_const() const {
  if (kind_ == FamilyKind::UnilateralExample) {
    // sup over k >= 1 and t of w_t(k)/w_t(k-1) is the t -> 0 limit at k = 1
    return std::sqrt(2.0);
  }
  return std::sqrt(w_plus_sq_ / w_minus_sq_);
}

void check_t(double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << "deformation parameter t = " << t << " outside (0, 1]";
    throw DomainError(os.str());
  }
}

double weight_value(const WeightFamily& family, double t, Index k) {
  check_t(t);
  return family.weight(t, k);
}

double s_value(const WeightFamily& family, double t, Index k) {
  check_t(t);
  return family.s_value(t, k);
}

namespace {

IndexRange clip(const WeightFamily& family, IndexRange w) {
  if (family.domain() == DomainKind::Disk) w.lo = std::max<Index>(w.lo, 0);
  if (w.lo > w.hi) throw ParameterError("empty index window");
  return w;
}

double sup_ratio_deviation(const WeightFamily& family, double t, int n,
                           IndexRange w) {
  double sup = 0.0;
  for (Index k = w.lo; k + n <= w.hi; ++k) {
    const double r = family.s_value(t, k + n) / family.s_value(t, k);
    sup = std::max(sup, std::abs(1.0 - r));
  }
  return sup;
}

}  // namespace

ConditionReport condition_report(const WeightFamily& family,
                                 std::span<const double> t_grid,
                                 IndexRange window, Index tail_index) {
  if (t_grid.empty()) throw ParameterError("condition_report: empty t grid");
  for (double t : t_grid) check_t(t);
  const IndexRange w = clip(family, window);
  const bool disk = family.domain() == DomainKind::Disk;

  ConditionReport r;
  r.t_grid.assign(t_grid.begin(), t_grid.end());
  r.window = w;
  r.tail_index = tail_index;

  for (double t : t_grid) {
    double h1 = 0.0;
    double prev_sq = family.weight_sq(t, w.lo - 1);
    CompensatedSum<double> trace;
    for (Index k = w.lo; k <= w.hi; ++k) {
      const double s = family.s_value(t, k);
      const double sq = family.weight_sq(t, k);
      if (!(s > 0.0) || !(sq > 0.0)) r.positivity_ok = false;
      if (!(sq > prev_sq)) r.monotonicity_ok = false;
      prev_sq = sq;
      h1 = std::max(h1, s);
      trace.add(s);
    }
    r.h1.push_back(h1);
    r.h2.push_back(sup_ratio_deviation(family, t, 1, w));

    const Index m = disk ? std::max<Index>(tail_index, 0) : tail_index;
    const double wm = family.weight(t, m);
    double dev = family.upper_tail(t, m) / (family.w_plus() + wm);
    if (!disk) {
      const double wl = family.weight(t, -m);
      dev = std::max(dev, family.lower_tail(t, -m + 1) / (wl + family.w_minus()));
    }
    r.limit_deviation.push_back(dev);

    const double total = trace.value();
    r.trace_sum.push_back(total);
    r.trace_deviation.push_back(std::abs(total - family.trace()));
    r.trace_tail_bound.push_back(family.upper_tail(t, w.hi) +
                                 family.lower_tail(t, w.lo));
  }

  // Condition 5: the sup over t includes the t -> 0+ limit.
  std::vector<double> t_samples(t_grid.begin(), t_grid.end());
  t_samples.push_back(0.0);
  double max_h3_above_first = 0.0;
  bool any_above_first = false;
  for (Index k = w.lo; k <= w.hi; ++k) {
    double h3 = 0.0;
    for (double t : t_samples) h3 = std::max(h3, std::abs(family.ratio_deviation(t, k)));
    r.h3_index.push_back(k);
    r.h3.push_back(h3);
    if (!disk || k >= 1) {
      max_h3_above_first = std::max(max_h3_above_first, h3);
      any_above_first = true;
    }
  }
  if (any_above_first) {
    double c = 1.0;
    for (Index k = w.lo; k <= w.hi; ++k) {
      if (disk && k < 1) continue;
      for (double t : t_samples) c = std::max(c, 1.0 / (1.0 - family.ratio_deviation(t, k)));
    }
    r.const_wratio = c;
    r.const_from_h3 = 1.0 / (1.0 - max_h3_above_first);
  }

  switch (family.kind()) {
    case FamilyKind::UnilateralExample: {
      double comm = 0.0;
      for (double t : t_grid) {
        r.h1_ref.push_back(t / (1 + t));
        r.h2_ref.push_back(2 * t / (1 + 2 * t));
        for (Index k = w.lo; k <= w.hi; ++k) {
          const double lhs = family.s_value(t, k);
          const double rhs = t * (1 - family.weight_sq(t, k - 1)) *
                             (1 - family.weight_sq(t, k));
          comm = std::max(comm, std::abs(lhs - rhs));
        }
      }
      r.commutation_deviation = comm;
      for (Index k : r.h3_index) {
        const double kd = static_cast<double>(k);
        r.h3_ref.push_back(1.0 / (kd + 1.0 + std::sqrt(kd * kd + kd)));
      }
      break;
    }
    case FamilyKind::BilateralRational:
      if (w.lo <= 0 && w.hi >= 1) {
        for (double t : t_grid) r.h1_ref.push_back(family.beta() * t / (1 + t));
      }
      if (w.lo <= -1 && w.hi >= 0) {
        for (double t : t_grid) r.h2_ref.push_back(2 * t);
      }
      break;
    case FamilyKind::BilateralArctan:
      if (w.lo <= 0 && w.hi >= 0) {
        for (double t : t_grid) r.h1_ref.push_back(family.beta() * std::atan(t));
      }
      break;
  }
  return r;
}

double s_ratio_margin(const WeightFamily& family, double t, int n,
                      IndexRange window) {
  if (n < 1) throw ParameterError("s_ratio_margin: n >= 1 required");
  check_t(t);
  const IndexRange w = clip(family, window);
  if (w.hi - w.lo < n) throw ParameterError("s_ratio_margin: window shorter than n");
  const double h2 = sup_ratio_deviation(family, t, 1, w);
  const double bound = std::pow(2.0 + h2, n - 1) * h2;
  const double sup = n == 1 ? h2 : sup_ratio_deviation(family, t, n, w);
  return bound - sup;
}

}  // namespace qdbar
