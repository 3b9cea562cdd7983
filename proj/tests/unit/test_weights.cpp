#include <doctest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "qdbar/errors.hpp"
#include "qdbar/weights.hpp"
#include "qdbar/window.hpp"

using namespace qdbar;

namespace {
const WeightFamily kUni = make_family({FamilyKind::UnilateralExample});
const WeightFamily kRat = make_family({FamilyKind::BilateralRational, 1.0, 0.5});
const WeightFamily kArc = make_family({FamilyKind::BilateralArctan, 2.0, 0.5});
}  // namespace

TEST_CASE("family limits") {
  CHECK(kUni.w_plus() == 1.0);
  CHECK(kUni.w_minus() == 0.0);
  CHECK(kUni.domain() == DomainKind::Disk);
  CHECK(kRat.w_plus_sq() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(kRat.w_minus_sq() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kRat.domain() == DomainKind::Annulus);
}

TEST_CASE("invalid families are rejected") {
  CHECK_THROWS_AS(make_family({FamilyKind::BilateralRational, 1.0, 1.5}), ParameterError);
  CHECK_THROWS_AS(make_family({FamilyKind::BilateralRational, 1.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(make_family({FamilyKind::BilateralRational, 1.0, -0.5}), ParameterError);
  CHECK_THROWS_AS(make_family({FamilyKind::BilateralArctan, 0.5, 0.5}), ParameterError);
  CHECK_THROWS_AS(make_family({FamilyKind::UnilateralExample, 0, 0, DomainKind::Annulus}),
                  ParameterError);
}

TEST_CASE("weight values") {
  CHECK(weight_value(kUni, 1.0, 0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(weight_value(kUni, 0.3, -1) == 0.0);
  CHECK(weight_value(kRat, 0.5, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(weight_value(kUni, 0.0, 3), DomainError);
  CHECK_THROWS_AS(weight_value(kUni, 1.5, 3), DomainError);
  CHECK_THROWS_AS(weight_value(kUni, -0.1, 3), DomainError);
}

TEST_CASE("commutator values") {
  CHECK(s_value(kUni, 1.0, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(s_value(kUni, 1.0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("closed-form commutator agrees with the difference of squares") {
  for (const auto* fam : {&kUni, &kRat, &kArc}) {
    for (double t : {0.9, 0.3, 0.01}) {
      for (Index k : {-50, -3, -1, 0, 1, 2, 17, 1000}) {
        if (!fam->in_index_set(k)) continue;
        const double direct = fam->weight_sq<long double>(t, k) - fam->weight_sq<long double>(t, k - 1);
        CHECK(fam->s_value<double>(t, k) == doctest::Approx(direct).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("unilateral commutation relation") {
  for (double t : {0.5, 0.25, 0.1, 0.01}) {
    for (Index k = 0; k <= 1000; ++k) {
      const double wm = weight_value(kUni, t, k - 1);
      const double w = weight_value(kUni, t, k);
      const double rhs = t * (1 - wm * wm) * (1 - w * w);
      REQUIRE(std::abs(s_value(kUni, t, k) - rhs) <= 1e-14);
    }
  }
}

TEST_CASE("closed-form moduli of the unilateral example") {
  const std::vector<double> grid{0.5, 0.25};
  const auto rep = condition_report(kUni, grid, {0, 10000}, 5000);
  CHECK(rep.h1[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(rep.h2[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  REQUIRE(rep.h3_index.front() == 0);
  CHECK(rep.h3.front() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t j = 0; j < rep.h3.size(); ++j) {
    const double k = static_cast<double>(rep.h3_index[j]);
    CHECK(std::abs(rep.h3[j] - 1.0 / (k + 1 + std::sqrt(k * k + k))) <= 1e-12);
  }
  CHECK(rep.monotonicity_ok);
  CHECK(rep.positivity_ok);
  REQUIRE(rep.commutation_deviation.has_value());
  CHECK(*rep.commutation_deviation <= 1e-14);
}

TEST_CASE("trace formula within the omitted tail mass") {
  for (const auto* fam : {&kUni, &kRat, &kArc}) {
    const std::vector<double> grid{0.5, 0.1};
    const IndexRange win = fam->domain() == DomainKind::Disk ? IndexRange{0, 20000}
                                                             : IndexRange{-20000, 20000};
    const auto rep = condition_report(*fam, grid, win, 100);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      CHECK(rep.trace_deviation[j] <= rep.trace_tail_bound[j] * (1 + 1e-9) + 1e-14);
    }
  }
}

TEST_CASE("s-ratio margin") {
  const IndexRange win{0, 100000};
  CHECK(std::abs(s_ratio_margin(kUni, 0.3, 1, win)) <= 1e-15);
  CHECK(s_ratio_margin(kUni, 0.5, 2, win) >= 0.0);
  CHECK(s_ratio_margin(kUni, 0.1, 3, win) >= 0.0);
  CHECK_THROWS_AS(s_ratio_margin(kUni, 0.3, 0, win), ParameterError);
}

TEST_CASE("property: weights increase toward their limits") {
  gen::Engine rng(0x5eed0001);
  for (int trial = 0; trial < 200; ++trial) {
    const auto fam = gen::family(rng);
    const double t = gen::t_value(rng);
    const Index k = gen::integer(rng, fam.domain() == DomainKind::Disk ? 0 : -100000, 100000);
    const double w0 = fam.weight_sq<double>(t, k);
    const double w1 = fam.weight_sq<double>(t, k + 1);
    INFO("trial " << trial << " family " << fam.name() << " t " << t << " k " << k);
    CHECK(w1 > w0);
    CHECK(w1 < fam.w_plus_sq());
    CHECK(w0 >= fam.w_minus_sq());
    CHECK(fam.s_value<double>(t, k) > 0.0);
    // tails are the exact complements of the partial sums
    CHECK(fam.upper_tail<double>(t, k) == doctest::Approx(fam.w_plus_sq() - w0).epsilon(1e-9));
  }
}

TEST_CASE("property: truncation window is minimal and agrees with the search oracle") {
  gen::Engine rng(0x5eed0002);
  for (int trial = 0; trial < 60; ++trial) {
    const auto fam = gen::family(rng);
    const double t = gen::t_value(rng);
    const double tol = std::exp(gen::uniform(rng, std::log(1e-4), std::log(1e-1)));
    INFO("trial " << trial << " family " << fam.name() << " t " << t << " tol " << tol);
    IndexWindow a, b;
    try {
      a = truncation_window(fam, t, tol, 50'000'000);
    } catch (const ResourceError&) {
      CHECK_THROWS_AS(truncation_window_search(fam, t, tol, 50'000'000), ResourceError);
      continue;
    }
    b = truncation_window_search(fam, t, tol, 50'000'000);
    CHECK(a.k_lo == b.k_lo);
    CHECK(a.k_hi == b.k_hi);
    CHECK(a.tail_bound_hi <= tol);
    CHECK(a.tail_bound_lo <= tol);
    // one index fewer on the upper side would violate the tolerance
    if (a.k_hi > a.k_lo)
      CHECK(fam.w_plus_sq() - fam.weight_sq<double>(t, a.k_hi - 1) > tol);
  }
}

TEST_CASE("window examples") {
  const auto w = truncation_window(kUni, 0.1, 1e-4, 10'000'000);
  CHECK(w.k_lo == 0);
  CHECK(w.k_hi == 99989);
  const auto whole = truncation_window(kUni, 0.5, 1.0, 100);
  CHECK(whole.k_lo == 0);
  CHECK(whole.k_hi == 0);
  const auto r = truncation_window(kRat, 0.1, 1e-3, 10'000'000);
  CHECK(r.k_lo == -(r.k_hi - 1));
  CHECK(r.tail_bound_hi <= 1e-3);
  CHECK(r.tail_bound_lo <= 1e-3);
  CHECK_THROWS_AS(truncation_window(kUni, 0.001, 1e-6, 1000), ResourceError);
  try {
    truncation_window(kUni, 0.001, 1e-6, 1000);
  } catch (const ResourceError& e) {
    CHECK(e.needed() > 1000);
  }
}
