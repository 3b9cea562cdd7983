#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "generators.hpp"
#include "qdbar/norms.hpp"
#include "qdbar/operators.hpp"

using namespace qdbar;
using CF = CoefficientFunction;

namespace {
const WeightFamily kUni = make_family({FamilyKind::UnilateralExample});
const WeightFamily kRat = make_family({FamilyKind::BilateralRational, 1.0, 0.5});

template <class Real>
double max_abs_interior(const BasicBandMatrix<Real>& a, int band, Index lo, Index hi) {
  double m = 0;
  auto it = a.bands.find(band);
  if (it == a.bands.end()) return 0;
  for (Index col = lo; col <= hi; ++col) {
    const Index row = col + band;
    if (row < lo || row > hi) continue;
    m = std::max(m, static_cast<double>(std::abs(it->second[static_cast<std::size_t>(col - a.lo())])));
  }
  return m;
}
}  // namespace

TEST_CASE("D_t on coordinates") {
  for (const auto* fam : {&kUni, &kRat}) {
    const double t = 0.4;
    const auto win = truncation_window(*fam, t, 1e-3, 1'000'000);
    const auto dz =
        apply_Dt(realize_quantum<long double>(coordinate_element("zbar"), *fam, t, win), *fam, t);
    const Index lo = dz.trusted_lo(), hi = dz.trusted_hi();
    // coefficients are sampled in double, so rounding grows like 1 / S_t(k)
    for (Index k = lo; k <= hi; ++k)
      REQUIRE(std::abs(dz.at(k, k) - 1.0L) <= 1e-15L / fam->s_value<long double>(t, k));
    const double worst = 1e-15 / std::min(fam->s_value<double>(t, lo), fam->s_value<double>(t, hi));
    for (const auto& [b, v] : dz.bands)
      if (b != 0) CHECK(max_abs_interior(dz, b, lo, hi) <= worst);

    for (const char* name : {"z", "one"}) {
      const auto d =
          apply_Dt(realize_quantum<long double>(coordinate_element(name), *fam, t, win), *fam, t);
      for (const auto& [b, v] : d.bands) CHECK(max_abs_interior(d, b, lo, hi) <= worst);
    }
  }
}

TEST_CASE("Q_t(1) is zbar on the disk") {
  for (double t : {0.5, 0.05}) {
    const auto win = truncation_window(kUni, t, 1e-4, 10'000'000);
    for (auto mode : {QtKernelMode::Corrected, QtKernelMode::Printed}) {
      const auto q = apply_Qt<double>(coordinate_element("one"), kUni, t, win, mode);
      CHECK(q.valid_margin == 1);
      const auto& g1 = q.bands.at(-1);
      for (Index k = win.k_lo; k < win.k_hi; ++k) {
        // entry (k, k+1) sits in column k+1
        REQUIRE(g1[static_cast<std::size_t>(k + 1 - win.k_lo)] ==
                doctest::Approx(weight_value(kUni, t, k)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("Q_t(1) on the annulus matches the classical image up to the lower tail") {
  const double t = 0.2;
  const auto win = truncation_window(kRat, t, 1e-4, 10'000'000);
  const auto q = apply_Qt<double>(coordinate_element("one"), kRat, t, win, QtKernelMode::Corrected);
  const auto& g1 = q.bands.at(-1);
  for (Index k = win.k_lo; k < win.k_hi; ++k) {
    const double w = weight_value(kRat, t, k);
    const double expect = (w * w - kRat.w_minus_sq()) / w;
    REQUIRE(std::abs(g1[static_cast<std::size_t>(k + 1 - win.k_lo)] - expect) <=
            win.tail_bound_lo / w * (1 + 1e-9) + 1e-15);
  }
}

TEST_CASE("Q_t rejects bands above the product cap") {
  const auto e = make_element({{BandSide::G, kMaxQtBand, CF::poly({1})}});
  const auto win = make_window(kUni, 0.5, 0, 100);
  CHECK_THROWS_AS(apply_Qt<double>(e, kUni, 0.5, win, QtKernelMode::Corrected), ResourceError);
}

TEST_CASE("property: fast and brute Q_t agree") {
  gen::Engine rng(0x5eed0201);
  for (int trial = 0; trial < 12; ++trial) {
    const auto fam = gen::integer(rng, 0, 1) ? kUni : kRat;
    const double t = gen::uniform(rng, 0.05, 0.9);
    const auto elem = gen::element(rng, 4);
    const Index K = 1000;
    const auto win = fam.domain() == DomainKind::Disk ? make_window(fam, t, 0, K - 1)
                                                      : make_window(fam, t, -K / 2, K / 2 - 1);
    for (auto mode : {QtKernelMode::Corrected, QtKernelMode::Printed}) {
      const auto a = apply_Qt<double>(elem, fam, t, win, mode, QtPath::Fast);
      const auto b = apply_Qt<double>(elem, fam, t, win, mode, QtPath::Brute);
      INFO("trial " << trial << " mode " << to_string(mode));
      REQUIRE(a.bands.size() == b.bands.size());
      for (const auto& [off, va] : a.bands) {
        const auto& vb = b.bands.at(off);
        double scale = 0, diff = 0;
        for (std::size_t j = 0; j < va.size(); ++j) {
          scale = std::max(scale, std::abs(vb[j]));
          diff = std::max(diff, std::abs(va[j] - vb[j]));
        }
        CHECK(diff <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("property: dense commutator oracle inverts the parametrix") {
  // D_t Q_t x = x checked with dense long double matrices, independently of
  // the banded commutator.
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  gen::Engine rng(0x5eed0202);
  for (int trial = 0; trial < 6; ++trial) {
    const auto fam = trial % 2 == 0 ? kUni : kRat;
    const double t = gen::uniform(rng, 0.3, 0.8);
    const auto elem = gen::element(rng, 3);
    const int N = elem.top_band();
    const Index K = 240;
    const auto win = fam.domain() == DomainKind::Disk ? make_window(fam, t, 0, K - 1)
                                                      : make_window(fam, t, -K / 2, K / 2 - 1);
    const auto q = apply_Qt<long double>(elem, fam, t, win, QtKernelMode::Corrected);
    const auto x = realize_quantum<long double>(elem, fam, t, win);
    Mat A = Mat::Zero(K, K), U = Mat::Zero(K, K), X = Mat::Zero(K, K);
    auto fill = [&](Mat& M, const BasicBandMatrix<long double>& a) {
      for (const auto& [b, v] : a.bands) {
        const auto [c0, c1] = a.columns(b);
        for (Index c = c0; c <= c1; ++c) M(c + b - win.k_lo, c - win.k_lo) = v[c - win.k_lo];
      }
    };
    fill(A, q);
    fill(X, x);
    Eigen::Matrix<long double, Eigen::Dynamic, 1> rs(K);
    for (Index k = win.k_lo; k <= win.k_hi; ++k) {
      if (k < win.k_hi) U(k + 1 - win.k_lo, k - win.k_lo) = fam.weight<long double>(t, k);
      rs(k - win.k_lo) = 1 / std::sqrt(fam.s_value<long double>(t, k));
    }
    const Mat D = rs.asDiagonal() * (A * U - U * A) * rs.asDiagonal();
    const Index lo = fam.domain() == DomainKind::Disk ? 0 : N + 2;
    const Index hi = K - 1 - (N + 2);
    long double err = 0, scale = 1;
    for (Index i = lo; i <= hi; ++i)
      for (Index j = lo; j <= hi; ++j) {
        err = std::max(err, std::abs(D(i, j) - X(i, j)));
        scale = std::max(scale, std::abs(X(i, j)));
      }
    INFO("trial " << trial << " " << fam.name() << " t=" << t);
    CHECK(static_cast<double>(err / scale) <= 1e-9);
  }
}

TEST_CASE("classical parametrix examples") {
  const auto one = coordinate_element("one");
  const auto qd = tilde_element(one, kUni, QtKernelMode::Corrected);
  for (double s : {0.01, 0.3, 0.9}) CHECK(std::abs(qd.g_bands().at(1)(s) - std::sqrt(s)) <= 1e-12);
  const auto qa = tilde_element(one, kRat, QtKernelMode::Corrected);
  for (double s : {0.6, 1.0, 1.4})
    CHECK(std::abs(qa.g_bands().at(1)(s) - (s - kRat.w_minus_sq()) / std::sqrt(s)) <= 1e-12);

  const auto f1 = make_element({{BandSide::F, 1, CF::poly({1})}});
  const auto qf = tilde_element(f1, kUni, QtKernelMode::Corrected);
  REQUIRE(qf.diagonal().has_value());
  for (double s : {0.01, 0.3, 0.9})
    CHECK(std::abs((*qf.diagonal())(s) + 2 * (1 - std::sqrt(s))) <= 1e-12);
  const auto back = apply_D0(qf, kUni);
  for (double s : {0.01, 0.3, 0.9}) CHECK(std::abs(back.f_bands().at(1)(s) - 1.0) <= 1e-9);
}

TEST_CASE("classical d-bar examples") {
  const auto dz = apply_D0(coordinate_element("zbar"), kUni);
  REQUIRE(dz.diagonal().has_value());
  CHECK((*dz.diagonal())(0.37) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dz.f_bands().empty());
  const auto zz = apply_D0(coordinate_element("z"), kUni);
  for (const auto& b : zz.band_spec()) CHECK(b.fn.is_zero());
  const auto ds = apply_D0(make_element({{BandSide::Diag, 0, CF::poly({0, 1})}}), kUni);
  CHECK(ds.f_bands().at(1)(0.49) == doctest::Approx(0.7).epsilon(1e-15));
  const auto opaque = make_element({{BandSide::F, 1, CF::derived([](double s) { return s; }, "id")}});
  CHECK_THROWS_AS(apply_D0(opaque, kUni), CapabilityError);
}

TEST_CASE("property: D0 inverts the classical parametrix") {
  gen::Engine rng(0x5eed0203);
  for (int trial = 0; trial < 20; ++trial) {
    const auto fam = gen::integer(rng, 0, 1) ? kUni : kRat;
    const auto elem = gen::element(rng, 3);
    const auto back = apply_D0(tilde_element(elem, fam, QtKernelMode::Corrected), fam);
    INFO("trial " << trial << " " << fam.name());
    for (const auto& b : elem.band_spec()) {
      const CF* got = nullptr;
      if (b.side == BandSide::F) got = &back.f_bands().at(b.n);
      else if (b.side == BandSide::G) got = &back.g_bands().at(b.n);
      else got = &*back.diagonal();
      for (int j = 1; j <= 20; ++j) {
        const double s = fam.w_minus_sq() + (fam.w_plus_sq() - fam.w_minus_sq()) * j / 21.0;
        CHECK(std::abs((*got)(s) - b.fn(s)) <= 1e-9);
      }
    }
  }
}
