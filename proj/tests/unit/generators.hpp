#pragma once

// Hand-rolled generators for the property tests. Every test seeds its own
// engine so failures reproduce from the printed seed.

#include <cstdint>
#include <random>
#include <vector>

#include "qdbar/element.hpp"
#include "qdbar/weights.hpp"

namespace gen {

using Engine = std::mt19937_64;

inline double uniform(Engine& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int integer(Engine& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// t spread log-uniformly over [1e-3, 0.9].
inline double t_value(Engine& rng) {
  return std::exp(uniform(rng, std::log(1e-3), std::log(0.9)));
}

inline qdbar::WeightFamily family(Engine& rng) {
  using qdbar::FamilyKind;
  switch (integer(rng, 0, 2)) {
    case 0:
      return qdbar::make_family({FamilyKind::UnilateralExample});
    case 1: {
      const double beta = uniform(rng, 0.1, 1.0);
      return qdbar::make_family({FamilyKind::BilateralRational, beta + uniform(rng, 0.05, 1.0), beta});
    }
    default: {
      const double beta = uniform(rng, 0.1, 0.6);
      // alpha > beta * pi / 2 keeps w_-^2 positive
      return qdbar::make_family({FamilyKind::BilateralArctan, beta * 1.6 + uniform(rng, 0.05, 1.0), beta});
    }
  }
}

inline std::vector<double> coeffs(Engine& rng, int max_degree) {
  std::vector<double> c(static_cast<std::size_t>(integer(rng, 0, max_degree)) + 1);
  for (auto& x : c) x = uniform(rng, -2.0, 2.0);
  return c;
}

inline qdbar::CoefficientFunction coefficient(Engine& rng, int max_degree) {
  return integer(rng, 0, 1) == 0 ? qdbar::CoefficientFunction::poly(coeffs(rng, max_degree))
                                 : qdbar::CoefficientFunction::sqrt_poly(coeffs(rng, max_degree));
}

/// Random element with bands up to n_max on each side (at least one band).
inline qdbar::LambdaElement element(Engine& rng, int n_max, int max_degree = 2) {
  using qdbar::BandSide;
  std::vector<qdbar::BandSpec> spec;
  for (int n = 1; n <= n_max; ++n) {
    if (integer(rng, 0, 1)) spec.push_back({BandSide::F, n, coefficient(rng, max_degree)});
    if (integer(rng, 0, 1)) spec.push_back({BandSide::G, n, coefficient(rng, max_degree)});
  }
  if (spec.empty() || integer(rng, 0, 1))
    spec.push_back({BandSide::Diag, 0, coefficient(rng, max_degree)});
  return qdbar::make_element(spec);
}

}  // namespace gen
