#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "qdbar/norms.hpp"

using namespace qdbar;

namespace {
const WeightFamily kUni = make_family({FamilyKind::UnilateralExample});
const WeightFamily kRat = make_family({FamilyKind::BilateralRational, 1.0, 0.5});
}  // namespace

TEST_CASE("realizations of coordinates") {
  const double t = 0.3;
  const auto win = truncation_window(kUni, t, 1e-3, 1'000'000);
  const auto zbar = realize_quantum<double>(coordinate_element("zbar"), kUni, t, win);
  const auto& b = zbar.bands.at(-1);
  for (Index col = win.k_lo + 1; col <= win.k_hi; ++col) {
    // entry (col-1, col) carries w_t(col-1)
    REQUIRE(b[static_cast<std::size_t>(col - win.k_lo)] ==
            doctest::Approx(weight_value(kUni, t, col - 1)).epsilon(1e-15));
  }
  const auto one = realize_quantum<double>(coordinate_element("one"), kUni, t, win);
  for (double v : one.bands.at(0)) REQUIRE(v == 1.0);
  const auto f1 = realize_quantum<double>(
      make_element({{BandSide::F, 1, CoefficientFunction::poly({1})}}), kUni, t, win);
  const auto [c0, c1] = f1.columns(1);
  for (Index col = c0; col <= c1; ++col) REQUIRE(f1.at(col + 1, col) == 1.0);
}

TEST_CASE("quantum norm examples") {
  for (double t : {0.5, 0.05}) {
    const auto win = truncation_window(kUni, t, 1e-4, 10'000'000);
    const auto one = realize_quantum<double>(coordinate_element("one"), kUni, t, win);
    const double n = quantum_norm(one, kUni, t);
    CHECK(n * n == doctest::Approx(1.0 - win.tail_bound_hi).epsilon(1e-12));
  }
  // single entry
  const auto win = make_window(kUni, 0.4, 0, 20);
  BandMatrix a;
  a.window = win;
  a.band(-2)[7] = 3.0;  // entry (5, 7)
  const double n = quantum_norm(a, kUni, 0.4);
  const double expect = std::sqrt(s_value(kUni, 0.4, 5)) * std::sqrt(s_value(kUni, 0.4, 7)) * 9.0;
  CHECK(n * n == doctest::Approx(expect).epsilon(1e-14));

  const auto wz = truncation_window(kUni, 0.01, 1e-5, 10'000'000);
  const double nz = element_quantum_norm(coordinate_element("zbar"), kUni, 0.01, wz);
  CHECK(std::abs(nz * nz - 0.5) <= 2e-2);
}

TEST_CASE("classical norm examples") {
  using CF = CoefficientFunction;
  CHECK(classical_norm(make_element({{BandSide::Diag, 0, CF::poly({0, 1})}}), kUni) ==
        doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
  const double z = classical_norm(coordinate_element("zbar"), kUni);
  CHECK(z * z == doctest::Approx(0.5).epsilon(1e-12));
  const double o = classical_norm(coordinate_element("one"), kRat);
  CHECK(o * o == doctest::Approx(kRat.trace()).epsilon(1e-12));
}

TEST_CASE("property: streamed norm equals materialized norm bit for bit") {
  gen::Engine rng(0x5eed0101);
  for (int trial = 0; trial < 40; ++trial) {
    const auto fam = gen::family(rng);
    const double t = gen::uniform(rng, 0.2, 0.9);
    const auto elem = gen::element(rng, 3);
    IndexWindow win;
    try {
      win = truncation_window(fam, t, 1e-3, 200'000);
    } catch (const ResourceError&) {
      continue;
    }
    INFO("trial " << trial << " " << fam.name() << " t=" << t);
    const auto a = realize_quantum<double>(elem, fam, t, win);
    CHECK(element_quantum_norm(elem, fam, t, win) == quantum_norm(a, fam, t));
  }
}

TEST_CASE("property: quantum norm is a norm") {
  gen::Engine rng(0x5eed0102);
  for (int trial = 0; trial < 30; ++trial) {
    const auto fam = gen::family(rng);
    const double t = gen::uniform(rng, 0.3, 0.9);
    IndexWindow win;
    try {
      win = truncation_window(fam, t, 1e-2, 200'000);
    } catch (const ResourceError&) {
      continue;
    }
    const auto a = realize_quantum<double>(gen::element(rng, 3), fam, t, win);
    const auto b = realize_quantum<double>(gen::element(rng, 3), fam, t, win);
    BandMatrix zero;
    zero.window = win;
    INFO("trial " << trial);
    CHECK(quantum_distance(a, a, fam, t) == 0.0);
    const double d = quantum_distance(a, b, fam, t);
    CHECK(d == doctest::Approx(quantum_distance(b, a, fam, t)).epsilon(1e-14));
    CHECK(d <= quantum_norm(a, fam, t) + quantum_norm(b, fam, t) + 1e-14);
    CHECK(quantum_distance(a, zero, fam, t) == doctest::Approx(quantum_norm(a, fam, t)).epsilon(1e-14));
  }
}
