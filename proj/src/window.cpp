#include "qdbar/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "qdbar/errors.hpp"

namespace qdbar {

namespace {

constexpr double kIndexLimit = 4e18;

[[noreturn]] void too_large(double needed, Index k_cap) {
  std::ostringstream os;
  os << "truncation window needs " << needed << " indices, cap is " << k_cap;
  const double clipped = std::min(needed, kIndexLimit);
  throw ResourceError(os.str(), static_cast<Index>(std::ceil(clipped)));
}

void check_tol(double tail_tol) {
  if (!(tail_tol > 0.0) || !std::isfinite(tail_tol))
    throw ParameterError("tail_tol must be positive and finite");
}

// Closed-form guess of the smallest k with upper_tail(k) <= tol, as a double
// (may be huge). The guess for the lower side uses the symmetry of the
// built-in bilateral families: lower_tail(1 - K) == upper_tail(K).
double upper_guess(const WeightFamily& f, double t, double tol) {
  switch (f.kind()) {
    case FamilyKind::UnilateralExample:
      return (1.0 / tol - 1.0) / t - 1.0;
    case FamilyKind::BilateralRational:
      return (f.beta() / tol - 1.0) / t;
    case FamilyKind::BilateralArctan: {
      const double a = tol / f.beta();
      if (a >= std::numbers::pi / 2) return -1.0;
      return 1.0 / (t * std::tan(a));
    }
  }
  return 0.0;
}

IndexWindow finish(const WeightFamily& family, double t, double tail_tol, Index lo,
                   Index hi) {
  if (family.domain() == DomainKind::Annulus && hi < lo) {
    // Every index between the two one-sided solutions satisfies both tails.
    const Index k = std::clamp<Index>(0, hi, lo);
    lo = hi = k;
  }
  IndexWindow w;
  w.k_lo = lo;
  w.k_hi = hi;
  w.tail_tol = tail_tol;
  w.tail_bound_hi = family.upper_tail(t, hi);
  w.tail_bound_lo = family.domain() == DomainKind::Disk ? 0.0 : family.lower_tail(t, lo);
  return w;
}

void check_cap(const WeightFamily& family, Index lo, Index hi, Index k_cap) {
  const double size = static_cast<double>(hi) - static_cast<double>(lo) + 1.0;
  if (family.domain() == DomainKind::Annulus && hi < lo) return;
  if (size > static_cast<double>(k_cap)) too_large(size, k_cap);
}

}  // namespace

IndexWindow truncation_window(const WeightFamily& family, double t, double tail_tol,
                              Index k_cap) {
  check_t(t);
  check_tol(tail_tol);
  const bool disk = family.domain() == DomainKind::Disk;
  const Index first = disk ? 0 : std::numeric_limits<Index>::min() / 4;

  double g = std::ceil(upper_guess(family, t, tail_tol));
  const double span_limit = static_cast<double>(k_cap) + 2.0;
  if (g > span_limit) too_large(disk ? g + 1.0 : 2.0 * g, k_cap);
  Index hi = std::max<Index>(static_cast<Index>(std::max(g, -span_limit)), disk ? 0 : -k_cap);
  while (family.upper_tail(t, hi) > tail_tol) ++hi;
  while (hi > first && family.upper_tail(t, hi - 1) <= tail_tol) --hi;

  Index lo = 0;
  if (!disk) {
    lo = 1 - std::max<Index>(static_cast<Index>(std::max(g, 0.0)), 0);
    while (family.lower_tail(t, lo) > tail_tol) --lo;
    while (family.lower_tail(t, lo + 1) <= tail_tol) ++lo;
  }
  check_cap(family, lo, hi, k_cap);
  return finish(family, t, tail_tol, lo, hi);
}

IndexWindow truncation_window_search(const WeightFamily& family, double t,
                                     double tail_tol, Index k_cap) {
  check_t(t);
  check_tol(tail_tol);
  const bool disk = family.domain() == DomainKind::Disk;

  const double cap = static_cast<double>(k_cap);

  // Smallest m (m >= floor when bounded) with h(m) <= tol, h nonincreasing.
  auto smallest = [&](auto h, std::optional<Index> floor) {
    Index good, bad;
    if (h(Index{0}) <= tail_tol) {
      if (floor && *floor >= 0) return Index{0};
      good = 0;
      Index step = 1;
      bad = -1;
      while (h(bad) <= tail_tol) {
        if (static_cast<double>(step) > cap) too_large(2.0 * step, k_cap);
        good = bad;
        step *= 2;
        bad = -step;
      }
    } else {
      bad = 0;
      Index step = 1;
      good = 1;
      while (h(good) > tail_tol) {
        if (static_cast<double>(step) > cap) too_large(2.0 * step, k_cap);
        bad = good;
        step *= 2;
        good = step;
      }
    }
    while (good - bad > 1) {
      const Index mid = bad + (good - bad) / 2;
      (h(mid) > tail_tol ? bad : good) = mid;
    }
    return good;
  };

  const Index hi = smallest([&](Index k) { return family.upper_tail(t, k); },
                            disk ? std::optional<Index>(0) : std::nullopt);
  Index lo = 0;
  if (!disk) lo = 1 - smallest([&](Index m) { return family.lower_tail(t, 1 - m); }, std::nullopt);
  check_cap(family, lo, hi, k_cap);
  return finish(family, t, tail_tol, lo, hi);
}

IndexWindow make_window(const WeightFamily& family, double t, Index k_lo, Index k_hi) {
  check_t(t);
  if (family.domain() == DomainKind::Disk && k_lo < 0)
    throw ParameterError("disk windows start at index 0");
  if (k_lo > k_hi) throw ParameterError("empty index window");
  IndexWindow w = finish(family, t, 0.0, k_lo, k_hi);
  w.tail_tol = std::max(w.tail_bound_hi, w.tail_bound_lo);
  return w;
}

}  // namespace qdbar
