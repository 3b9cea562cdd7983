#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qdbar {

template <class F>
double kronrod_panel(const F& f, double a, double b) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  static const auto& x = rule::abscissa();
  static const auto& w = rule::weights();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = w[0] * f(mid);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = half * x[i];
    sum += w[i] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

}  // namespace qdbar
