#include "qdbar/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qdbar/errors.hpp"

namespace qdbar {

namespace {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using gauss = boost::math::quadrature::gauss<double, 7>;
  static const auto& x = kronrod::abscissa();
  static const auto& wk = kronrod::weights();
  static const auto& wg = gauss::weights();

  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double fc = f(mid);
  double k = wk[0] * fc;
  double g = wg[0] * fc;
  // Kronrod abscissae interleave: odd positions are the Gauss nodes.
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = half * x[i];
    const double pair = f(mid - dx) + f(mid + dx);
    k += wk[i] * pair;
    if (i % 2 == 0) g += wg[i / 2] * pair;
  }
  k *= half;
  g *= half;
  return {a, b, k, std::abs(k - g)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double tol,
                                    int max_intervals) {
  if (!(a <= b)) throw ParameterError("integrate: a <= b required");
  QuadratureResult r;
  if (a == b) {
    r.converged = true;
    return r;
  }
  std::priority_queue<Panel> heap;
  Panel first = gk15(f, a, b);
  r.evaluations = 15;
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int intervals = 1;
  while (err > tol && intervals < max_intervals) {
    const Panel p = heap.top();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) break;  // interval collapsed to machine resolution
    heap.pop();
    const Panel left = gk15(f, p.a, mid);
    const Panel right = gk15(f, mid, p.b);
    r.evaluations += 30;
    total += left.value + right.value - p.value;
    err += left.error + right.error - p.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum from the panels to remove drift from the running updates.
  double value = 0.0;
  double error = 0.0;
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  for (const Panel& p : panels) {
    value += p.value;
    error += p.error;
  }
  r.value = value;
  r.error = error;
  r.converged = std::isfinite(value) && error <= tol;
  return r;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const QuadratureResult r = integrate_adaptive(f, a, b, tol);
  if (!r.converged) {
    std::ostringstream os;
    os << "quadrature on [" << a << ", " << b << "] did not reach tolerance "
       << tol << " (estimate " << r.value << ", achieved error " << r.error
       << ")";
    throw NumericalError(os.str(), r.value, r.error);
  }
  return r.value;
}

}  // namespace qdbar
