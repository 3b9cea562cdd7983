#include "qdbar/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "qdbar/errors.hpp"
#include "qdbar/numeric.hpp"

namespace qdbar {

namespace {

// K(k, i) = A(k) B(i) on a triangular support; the weights carry the l^2
// transfer. lower: support i <= k (g side); otherwise i >= k (f side).
struct Separable {
  std::vector<double> a, b, mu_out, mu_in;
  bool lower = true;
};

Separable factor(const KernelOperatorSpec& spec, QtKernelMode mode) {
  Separable s;
  if (spec.kind == KernelKind::Zero) return s;
  check_t(spec.t);
  const int n = spec.n;
  if (spec.kind == KernelKind::T2 && n < 1) throw ParameterError("T2 needs n >= 1");
  if (spec.kind == KernelKind::T1 && n < 0) throw ParameterError("T1 needs n >= 0");
  if (n + 1 > kMaxQtBand) throw ResourceError("kernel band too long", n + 1);
  const Index lo = spec.window.k_lo, hi = spec.window.k_hi;
  const auto tab = make_weight_table<double>(spec.family, spec.t, lo - 1, hi + 1);
  auto prod = [&](Index k, int first, int len) {
    double p = 1;
    for (int j = first; j < first + len; ++j) p *= tab.weight(k + j);
    return p;
  };
  if (spec.kind == KernelKind::T2) {
    s.lower = true;
    for (Index k = lo; k <= hi - n; ++k) {
      const double sig = prod(k, 0, n);
      s.a.push_back(1.0 / sig);
      s.mu_out.push_back(tab.root_s(k) * tab.root_s(k + n));
      const double mu_in = tab.root_s(k) * tab.root_s(k + n - 1);
      s.mu_in.push_back(mu_in);
      s.b.push_back(sig * mu_in / tab.weight(k + n - 1));
    }
  } else {
    s.lower = false;
    const bool corrected = mode == QtKernelMode::Corrected;
    for (Index k = lo; k <= hi - n - 1; ++k) {
      s.a.push_back(corrected ? -prod(k, 0, n) : -prod(k, 1, n) / tab.weight(k + n));
      s.mu_out.push_back(tab.root_s(k) * tab.root_s(k + n));
      const double mu_in = tab.root_s(k) * tab.root_s(k + n + 1);
      s.mu_in.push_back(mu_in);
      s.b.push_back(corrected ? mu_in / (prod(k, 0, n) * tab.weight(k + n))
                              : mu_in / prod(k, 1, n));
    }
  }
  return s;
}

}  // namespace

double analytic_schur_cap(const WeightFamily& family) {
  return 2.0 * (family.w_plus() - family.w_minus()) * std::pow(family.wratio_const(), 0.25);
}

SchurBound schur_young_bound(const KernelOperatorSpec& spec, QtKernelMode mode) {
  SchurBound r;
  r.analytic_cap = analytic_schur_cap(spec.family);
  if (spec.kind == KernelKind::Zero) return r;
  const Separable s = factor(spec, mode);
  const std::size_t m = s.a.size();
  if (m == 0) return r;
  // Row k: |A(k)| * sum over support of |B(i)|.
  std::vector<double> b_part(m), a_part(m);
  {
    CompensatedSum<double> acc;
    if (s.lower) {
      for (std::size_t k = 0; k < m; ++k) {
        acc.add(std::abs(s.b[k]));
        b_part[k] = acc.value();
      }
    } else {
      for (std::size_t k = m; k-- > 0;) {
        acc.add(std::abs(s.b[k]));
        b_part[k] = acc.value();
      }
    }
  }
  {
    // Column i: |B(i)| / mu_in(i) * sum over rows k containing i of |A(k)| mu_out(k).
    CompensatedSum<double> acc;
    if (s.lower) {
      for (std::size_t i = m; i-- > 0;) {
        acc.add(std::abs(s.a[i]) * s.mu_out[i]);
        a_part[i] = acc.value();
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        acc.add(std::abs(s.a[i]) * s.mu_out[i]);
        a_part[i] = acc.value();
      }
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    r.row_sup = std::max(r.row_sup, std::abs(s.a[k]) * b_part[k]);
    r.col_sup = std::max(r.col_sup, std::abs(s.b[k]) / s.mu_in[k] * a_part[k]);
  }
  r.bound = std::sqrt(r.row_sup * r.col_sup);
  return r;
}

NormEstimate operator_norm_estimate(const KernelOperatorSpec& spec, QtKernelMode mode,
                                    int iters, double rel_tol) {
  if (iters < 1) throw ParameterError("operator_norm_estimate: iters >= 1 required");
  NormEstimate est;
  if (spec.kind == KernelKind::Zero) {
    est.converged = true;
    return est;
  }
  const Separable s = factor(spec, mode);
  const std::size_t m = s.a.size();
  if (m == 0) {
    est.converged = true;
    return est;
  }
  // Weighted factors: Khat(k, i) = p(k) q(i) on the support.
  std::vector<double> p(m), q(m);
  for (std::size_t j = 0; j < m; ++j) {
    p[j] = std::sqrt(s.mu_out[j]) * s.a[j];
    q[j] = s.b[j] / std::sqrt(s.mu_in[j]);
  }
  std::vector<double> v(m, 1.0 / std::sqrt(static_cast<double>(m))), y(m), z(m);

  // y = Khat v ; z = Khat^T y
  auto forward = [&] {
    CompensatedSum<double> acc;
    if (s.lower) {
      for (std::size_t k = 0; k < m; ++k) {
        acc.add(q[k] * v[k]);
        y[k] = p[k] * acc.value();
      }
    } else {
      for (std::size_t k = m; k-- > 0;) {
        acc.add(q[k] * v[k]);
        y[k] = p[k] * acc.value();
      }
    }
  };
  auto backward = [&] {
    CompensatedSum<double> acc;
    if (s.lower) {
      for (std::size_t i = m; i-- > 0;) {
        acc.add(p[i] * y[i]);
        z[i] = q[i] * acc.value();
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        acc.add(p[i] * y[i]);
        z[i] = q[i] * acc.value();
      }
    }
  };

  double lambda_prev = -1.0;
  for (int it = 1; it <= iters; ++it) {
    forward();
    CompensatedSum<double> ny;
    for (double x : y) ny.add(x * x);
    const double lambda = ny.value();  // Rayleigh quotient of Khat^T Khat at unit v
    est.iterations = it;
    est.last_rayleigh = lambda;
    est.value = std::sqrt(lambda);
    if (lambda == 0.0) {
      est.converged = true;
      break;
    }
    if (lambda_prev >= 0.0 && std::abs(lambda - lambda_prev) <= rel_tol * lambda) {
      est.converged = true;
      break;
    }
    lambda_prev = lambda;
    backward();
    CompensatedSum<double> nz;
    for (double x : z) nz.add(x * x);
    const double norm = std::sqrt(nz.value());
    for (std::size_t j = 0; j < m; ++j) v[j] = z[j] / norm;
  }
  return est;
}

std::vector<double> dense_weighted_kernel(const KernelOperatorSpec& spec, QtKernelMode mode,
                                          std::size_t& rows, std::size_t& cols) {
  const Separable s = factor(spec, mode);
  rows = cols = s.a.size();
  std::vector<double> out(rows * cols, 0.0);
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t i = 0; i < cols; ++i) {
      if (s.lower ? i <= k : i >= k) {
        out[k * cols + i] =
            std::sqrt(s.mu_out[k]) * s.a[k] * s.b[i] / std::sqrt(s.mu_in[i]);
      }
    }
  }
  return out;
}

}  // namespace qdbar
