#include "qdbar/limits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdbar/errors.hpp"

namespace qdbar {

std::vector<double> geometric_grid(double head, double ratio, int points) {
  if (points < 1) throw ParameterError("grid needs at least one point");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ParameterError("grid ratio must lie in (0, 1)");
  std::vector<double> g(static_cast<std::size_t>(points));
  double t = head;
  for (auto& x : g) {
    x = t;
    t *= ratio;
  }
  return g;
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw ParameterError("empty t grid");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    check_t(grid[j]);
    if (j > 0 && !(grid[j] < grid[j - 1]))
      throw ParameterError("t grid must be strictly decreasing");
  }
}

IndexWindow window_at(const WeightFamily& family, double t, double tail_tol, Index k_cap) {
  try {
    return truncation_window(family, t, tail_tol, k_cap);
  } catch (const ResourceError& e) {
    std::ostringstream os;
    os << "t = " << t << ": " << e.what();
    throw ResourceError(os.str(), e.needed());
  }
}

ConvergenceRecord record(double t, const IndexWindow& w, double primary, double reference) {
  ConvergenceRecord r;
  r.t = t;
  r.window_lo = w.k_lo;
  r.window_hi = w.k_hi;
  r.primary_value = primary;
  r.reference_value = reference;
  r.abs_error = std::abs(primary - reference);
  r.tail_bound = std::max(w.tail_bound_hi, w.tail_bound_lo);
  return r;
}

}  // namespace

ConvergenceSeries norm_convergence(const LambdaElement& elem, const WeightFamily& family,
                                   std::span<const double> t_grid, double tail_tol,
                                   Index k_cap) {
  check_grid(t_grid);
  const double reference = classical_norm(elem, family);
  ConvergenceSeries s;
  for (double t : t_grid) {
    const auto w = window_at(family, t, tail_tol, k_cap);
    s.records.push_back(record(t, w, element_quantum_norm(elem, family, t, w), reference));
  }
  return s;
}

ConvergenceSeries parametrix_convergence(const LambdaElement& elem,
                                         const WeightFamily& family,
                                         std::span<const double> t_grid, double tail_tol,
                                         QtKernelMode mode, Index k_cap) {
  check_grid(t_grid);
  const LambdaElement tilde = tilde_element(elem, family, mode);
  ConvergenceSeries s;
  for (double t : t_grid) {
    const auto w = window_at(family, t, tail_tol, k_cap);
    const auto q = apply_Qt<double>(elem, family, t, w, mode, QtPath::Fast);
    const auto y = realize_quantum<double>(tilde, family, t, w);
    s.records.push_back(record(t, w, quantum_distance(q, y, family, t), 0.0));
  }
  return s;
}

InverseResidual inverse_residual(const LambdaElement& elem, const WeightFamily& family,
                                 double t, double tail_tol, QtKernelMode mode, Index k_cap) {
  using Real = long double;
  check_t(t);
  const int N = elem.top_band();
  const auto w = window_at(family, t, tail_tol, k_cap);
  const bool disk = family.domain() == DomainKind::Disk;
  const int margin = N + 2;  // parametrix margin N + 1, commutator one more

  InverseResidual r;
  r.window = w;
  r.interior_lo = disk ? w.k_lo : w.k_lo + margin;
  r.interior_hi = w.k_hi - margin;
  if (r.interior_hi < r.interior_lo)
    throw ParameterError("inverse_residual: window too small for a trusted interior");
  r.bound = 10.0 * tail_tol / family.weight(t, r.interior_lo + N);

  const auto tab = make_weight_table<Real>(family, t, w.k_lo - 1, w.k_hi + 1);
  Real sup = 0;
  for (int offset : qt_output_offsets(elem)) {
    const auto q = qt_output_band<Real>(elem, family, t, w, tab, offset, mode, QtPath::Fast);
    const auto d = dt_band<Real>(q, offset, w, tab);
    auto x = realize_band<Real>(elem, family, t, w, offset + 1);
    const int b = offset + 1;
    for (Index col = std::max(r.interior_lo, r.interior_lo - b);
         col <= std::min(r.interior_hi, r.interior_hi - b); ++col) {
      const auto j = static_cast<std::size_t>(col - w.k_lo);
      const Real target = x.empty() ? Real(0) : x[j];
      sup = std::max(sup, std::abs(d[j] - target));
    }
  }
  r.residual = static_cast<double>(sup);
  return r;
}

ContinuityScan continuity_scan(const LambdaElement& elem, const WeightFamily& family,
                               double t_lo, double t_hi, int steps, double tail_tol,
                               Index k_cap) {
  if (steps < 2) throw ParameterError("continuity_scan: steps >= 2 required");
  if (!(t_lo > 0.0 && t_lo < t_hi && t_hi <= 1.0))
    throw ParameterError("continuity_scan: need 0 < t_lo < t_hi <= 1");
  ContinuityScan scan;
  for (int j = 0; j <= steps; ++j) {
    const double t = j == steps ? t_hi : t_lo + (t_hi - t_lo) * j / steps;
    const auto w = window_at(family, t, tail_tol, k_cap);
    ContinuityRow row;
    row.t = t;
    row.window_hi = w.k_hi;
    row.norm = element_quantum_norm(elem, family, t, w);
    scan.rows.push_back(row);
  }
  for (std::size_t j = 0; j + 1 < scan.rows.size(); ++j) {
    scan.rows[j].forward_difference = scan.rows[j + 1].norm - scan.rows[j].norm;
    scan.max_forward_difference =
        std::max(scan.max_forward_difference, std::abs(scan.rows[j].forward_difference));
  }
  return scan;
}

std::vector<UniformBoundRow> uniform_bound_scan(std::span<const LambdaElement> elems,
                                                const WeightFamily& family,
                                                std::span<const double> t_grid,
                                                double tail_tol, QtKernelMode mode,
                                                Index k_cap) {
  if (elems.empty()) throw ParameterError("uniform_bound_scan: no elements");
  check_grid(t_grid);
  const double cap = analytic_schur_cap(family);
  std::vector<UniformBoundRow> rows;
  for (double t : t_grid) {
    const auto w = window_at(family, t, tail_tol, k_cap);
    UniformBoundRow row;
    row.t = t;
    row.window_hi = w.k_hi;
    row.schur_cap = cap;
    for (const auto& x : elems) {
      const double nx = element_quantum_norm(x, family, t, w);
      if (nx == 0.0) continue;
      const double nq = quantum_norm(apply_Qt<double>(x, family, t, w, mode), family, t);
      row.max_ratio = std::max(row.max_ratio, nq / nx);
    }
    row.exceeds = row.max_ratio > cap;
    rows.push_back(row);
  }
  return rows;
}

RateFit rate_fit(const ConvergenceSeries& series, int drop_head) {
  std::vector<double> x, y;
  for (std::size_t j = static_cast<std::size_t>(std::max(drop_head, 0));
       j < series.records.size(); ++j) {
    const auto& r = series.records[j];
    if (!(r.abs_error > 10.0 * r.tail_bound) || !(r.t > 0.0)) continue;
    x.push_back(std::log(r.t));
    y.push_back(std::log(r.abs_error));
  }
  if (x.size() < 3)
    throw InsufficientDataError("rate_fit: fewer than 3 usable points (" +
                                std::to_string(x.size()) + ")");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    mx += x[j];
    my += y[j];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    sxx += (x[j] - mx) * (x[j] - mx);
    sxy += (x[j] - mx) * (y[j] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double e = y[j] - (fit.intercept + fit.slope * x[j]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.points_used = static_cast<int>(x.size());
  return fit;
}

}  // namespace qdbar
