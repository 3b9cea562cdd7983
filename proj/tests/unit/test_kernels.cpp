#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "generators.hpp"
#include "qdbar/kernels.hpp"

using namespace qdbar;

namespace {
const WeightFamily kUni = make_family({FamilyKind::UnilateralExample});
const WeightFamily kRat = make_family({FamilyKind::BilateralRational, 1.0, 0.5});
}  // namespace

TEST_CASE("T2(1) row sums telescope to the weights") {
  const double t = 0.5;
  const auto win = make_window(kUni, t, 0, 3000);
  const auto b = schur_young_bound({KernelKind::T2, 1, t, kUni, win}, QtKernelMode::Corrected);
  CHECK(std::isfinite(b.bound));
  CHECK(b.row_sup == doctest::Approx(weight_value(kUni, t, win.k_hi - 1)).epsilon(1e-12));
  CHECK(b.row_sup <= 1.0);
}

TEST_CASE("zero kernel") {
  const auto win = make_window(kUni, 0.5, 0, 100);
  const KernelOperatorSpec z{KernelKind::Zero, 0, 0.5, kUni, win};
  CHECK(schur_young_bound(z, QtKernelMode::Corrected).bound == 0.0);
  CHECK(operator_norm_estimate(z, QtKernelMode::Corrected).value == 0.0);
}

TEST_CASE("corrected f-side bounds stay below the analytic cap") {
  for (const auto* fam : {&kUni, &kRat}) {
    for (double t : {0.5, 0.1, 0.01}) {
      const auto win = truncation_window(*fam, t, 1e-3, 10'000'000);
      for (int n = 1; n <= 8; ++n) {
        const auto b = schur_young_bound({KernelKind::T1, n, t, *fam, win}, QtKernelMode::Corrected);
        INFO(fam->name() << " t=" << t << " n=" << n);
        CHECK(b.bound <= b.analytic_cap);
      }
    }
  }
}

TEST_CASE("power iteration matches the dense SVD oracle") {
  for (const auto* fam : {&kUni, &kRat}) {
    const auto win = fam->domain() == DomainKind::Disk ? make_window(*fam, 0.2, 0, 499)
                                                       : make_window(*fam, 0.2, -250, 249);
    for (auto mode : {QtKernelMode::Corrected, QtKernelMode::Printed}) {
      for (auto kind : {KernelKind::T1, KernelKind::T2}) {
        for (int n : {1, 3}) {
          const KernelOperatorSpec spec{kind, n, 0.2, *fam, win};
          std::size_t rows = 0, cols = 0;
          const auto dense = dense_weighted_kernel(spec, mode, rows, cols);
          const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(
              dense.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
          const double sigma = svd.singularValues()(0);
          const auto est = operator_norm_estimate(spec, mode, 2000, 1e-13);
          INFO(fam->name() << " " << to_string(mode) << " n=" << n);
          CHECK(est.converged);
          CHECK(est.value == doctest::Approx(sigma).epsilon(1e-6));
          CHECK(sigma <= schur_young_bound(spec, mode).bound * (1 + 1e-12));
        }
      }
    }
  }
}

TEST_CASE("property: Schur dominance") {
  gen::Engine rng(0x5eed0301);
  for (int trial = 0; trial < 40; ++trial) {
    const auto fam = gen::family(rng);
    const double t = gen::t_value(rng);
    const auto kind = gen::integer(rng, 0, 1) ? KernelKind::T1 : KernelKind::T2;
    const int n = gen::integer(rng, kind == KernelKind::T1 ? 0 : 1, 8);
    const auto mode = gen::integer(rng, 0, 1) ? QtKernelMode::Corrected : QtKernelMode::Printed;
    const Index K = gen::integer(rng, 50, 5000);
    const auto win = fam.domain() == DomainKind::Disk ? make_window(fam, t, 0, K)
                                                      : make_window(fam, t, -K / 2, K / 2);
    const KernelOperatorSpec spec{kind, n, t, fam, win};
    const auto b = schur_young_bound(spec, mode);
    const auto e = operator_norm_estimate(spec, mode);
    INFO("trial " << trial << " " << fam.name() << " t=" << t << " n=" << n);
    CHECK(e.value <= b.bound * (1 + 1e-12));
    CHECK(b.row_sup >= 0.0);
    CHECK(b.col_sup >= 0.0);
  }
}
