#pragma once

#include <cmath>
#include <string>

namespace qdbar {

/// Neumaier compensated accumulator. Summation order is the caller's order,
/// so results are reproducible bit for bit.
template <class Real>
class CompensatedSum {
 public:
  void add(Real x) noexcept {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const noexcept { return sum_ + comp_; }

 private:
  Real sum_{0};
  Real comp_{0};
};

/// x^(twice_exponent/2) for x > 0 using sqrt and integer powers only.
template <class Real>
Real half_power(Real x, int twice_exponent) {
  int e = twice_exponent;
  Real base = 1;
  if (e % 2 != 0) {
    base = std::sqrt(x);
    e -= (e > 0 ? 1 : -1);
    // e is now even; the odd half went into base with the sign of the exponent
    if (twice_exponent < 0) base = Real(1) / base;
  }
  int k = e / 2;
  Real p = 1;
  Real b = k >= 0 ? x : Real(1) / x;
  for (int j = 0, m = k >= 0 ? k : -k; j < m; ++j) p *= b;
  return base * p;
}

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

}  // namespace qdbar
