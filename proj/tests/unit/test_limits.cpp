#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "qdbar/limits.hpp"

using namespace qdbar;
using CF = CoefficientFunction;

namespace {
const WeightFamily kUni = make_family({FamilyKind::UnilateralExample});
const WeightFamily kRat = make_family({FamilyKind::BilateralRational, 1.0, 0.5});

ConvergenceSeries synthetic(double slope, double c, int points) {
  ConvergenceSeries s;
  for (double t : geometric_grid(0.2, 0.5, points)) {
    ConvergenceRecord r;
    r.t = t;
    r.abs_error = c * std::pow(t, slope);
    r.tail_bound = 1e-12;
    s.records.push_back(r);
  }
  return s;
}
}  // namespace

TEST_CASE("geometric grid") {
  const auto g = geometric_grid(0.2, 0.5, 4);
  REQUIRE(g.size() == 4);
  CHECK(g[3] == doctest::Approx(0.025).epsilon(1e-15));
}

TEST_CASE("rate fit recovers synthetic slopes") {
  for (double p : {1.0, 0.5, 2.0}) {
    const auto f = rate_fit(synthetic(p, 3.0, 6));
    CHECK(f.slope == doctest::Approx(p).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.residual <= 1e-12);
    CHECK(f.points_used == 6);
  }
  CHECK(rate_fit(synthetic(1.0, 1.0, 6), 2).points_used == 4);
  CHECK_THROWS_AS(rate_fit(synthetic(1.0, 1.0, 2)), InsufficientDataError);
  auto floored = synthetic(1.0, 1.0, 6);
  for (auto& r : floored.records) r.tail_bound = 0.01;  // everything below 10 * tail
  CHECK_THROWS_AS(rate_fit(floored), InsufficientDataError);
}

TEST_CASE("norm of the unit is exact up to the tail") {
  const std::vector<double> grid{0.5, 0.1, 0.02};
  for (const auto* fam : {&kUni, &kRat}) {
    const auto s = norm_convergence(coordinate_element("one"), *fam, grid, 1e-5, 100'000'000);
    for (const auto& r : s.records) {
      // the squared norms differ by exactly the omitted trace mass
      const double sides = fam->domain() == DomainKind::Disk ? 1.0 : 2.0;
      CHECK(r.abs_error <= sides * r.tail_bound / (r.primary_value + r.reference_value) * (1 + 1e-9));
      if (fam->domain() == DomainKind::Disk) CHECK(r.abs_error <= 1e-5);
    }
  }
}

TEST_CASE("parametrix of the unit is exact up to the tail") {
  const std::vector<double> grid{0.5, 0.1};
  for (auto mode : {QtKernelMode::Corrected, QtKernelMode::Printed}) {
    const auto s = parametrix_convergence(coordinate_element("one"), kUni, grid, 1e-6, mode,
                                          100'000'000);
    for (const auto& r : s.records) CHECK(r.abs_error <= 1e-6);
  }
}

TEST_CASE("zbar norm error decreases along the grid") {
  const auto grid = geometric_grid(0.2, 0.5, 5);
  const auto s = norm_convergence(coordinate_element("zbar"), kUni, grid, 1e-6, 100'000'000);
  for (std::size_t i = 1; i < s.records.size(); ++i)
    CHECK(s.records[i].abs_error < s.records[i - 1].abs_error);
}

TEST_CASE("inverse residual examples") {
  const auto g = make_element({{BandSide::G, 2, CF::poly({1, 1})}, {BandSide::Diag, 0, CF::poly({1})}});
  for (auto mode : {QtKernelMode::Corrected, QtKernelMode::Printed}) {
    // the window is kept short: 1 / S_t at its far edge scales long double
    // rounding in the telescoped sums
    const auto r = inverse_residual(g, kUni, 0.5, 1e-3, mode, 10'000'000);
    CHECK(r.residual <= 1e-10);
  }
  const auto mixed = make_element({{BandSide::F, 1, CF::poly({1, -0.5})},
                                   {BandSide::G, 2, CF::poly({0.3, 1})},
                                   {BandSide::Diag, 0, CF::poly({0.5, 0, 1})}});
  const auto r = inverse_residual(mixed, kRat, 0.1, 1e-4, QtKernelMode::Corrected, 10'000'000);
  CHECK(r.residual <= r.bound);
  const auto f1 = make_element({{BandSide::F, 1, CF::poly({1})}});
  const auto p = inverse_residual(f1, kUni, 0.5, 1e-4, QtKernelMode::Printed, 10'000'000);
  CHECK(p.residual >= 0.1);
}

TEST_CASE("property: corrected parametrix inverts D_t") {
  gen::Engine rng(0x5eed0401);
  for (int trial = 0; trial < 10; ++trial) {
    const auto fam = gen::integer(rng, 0, 1) ? kUni : kRat;
    const double t = gen::uniform(rng, 0.2, 0.9);
    const auto elem = gen::element(rng, 3);
    const auto r = inverse_residual(elem, fam, t, 1e-4, QtKernelMode::Corrected, 10'000'000);
    INFO("trial " << trial << " " << fam.name() << " t=" << t);
    CHECK(r.residual <= r.bound);
  }
}

TEST_CASE("continuity scan shape") {
  const auto s = continuity_scan(coordinate_element("zbar"), kUni, 0.2, 0.8, 6, 1e-4, 10'000'000);
  REQUIRE(s.rows.size() == 7);
  CHECK(s.rows.front().t == doctest::Approx(0.2));
  CHECK(s.rows.back().t == doctest::Approx(0.8));
  CHECK(s.rows.back().forward_difference == 0.0);
  CHECK(s.max_forward_difference <= 0.05);
}

TEST_CASE("uniform bound below the cap") {
  const std::vector<LambdaElement> elems{coordinate_element("one"), coordinate_element("zbar"),
                                         coordinate_element("z")};
  const std::vector<double> grid{0.5, 0.1};
  for (const auto& row : uniform_bound_scan(elems, kRat, grid, 1e-4, QtKernelMode::Corrected, 10'000'000)) {
    CHECK_FALSE(row.exceeds);
    CHECK(row.max_ratio <= row.schur_cap);
  }
}

TEST_CASE("window resource errors name t") {
  const std::vector<double> grid{1e-4};
  try {
    norm_convergence(coordinate_element("zbar"), kUni, grid, 1e-8, 1000);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("t = ") != std::string::npos);
  }
}
