#include <doctest.h>

#include <cmath>
#include <vector>

#include "lacvar/error.hpp"
#include "lacvar/gridfn.hpp"
#include "lacvar/weights.hpp"

using namespace lacvar;

TEST_CASE("power weight samples") {
  const GridGeometry g{1.0, 0.25, 4};
  CHECK(power_weight(0.0, g).samples()[2] == 1.0);
  CHECK(power_weight(0.5, g).samples()[0] == doctest::Approx(1.0606602).epsilon(1e-7));
  const GridGeometry around{-1.0, 0.125, 16};
  const auto w = power_weight(-0.5, around);
  for (std::size_t i = 0; i < w.samples().size(); ++i) {
    CHECK(w.samples()[i] > 0.0);
    CHECK(std::isfinite(w.samples()[i]));
  }
  CHECK_THROWS_AS(power_weight(-1.0, around), Error);
}

TEST_CASE("A_p constants") {
  const GridGeometry g{-2.0, 0.25, 16};
  const auto fam = weight_family(g);
  for (double p : {1.5, 2.0, 3.0}) {
    CHECK(ap_constant(WeightLaw::constant(1.0).sample(g), p, fam) == doctest::Approx(1.0));
    CHECK(ap_constant(WeightLaw::constant(7.5).sample(g), p, fam) == doctest::Approx(1.0));
  }
  const auto w = WeightLaw::power(0.5).sample(g);
  const double a2 = ap_constant(w, 2.0, fam);
  const double a3 = ap_constant(w, 3.0, fam);
  CHECK(a2 >= 1.0 - 1e-12);
  CHECK(a3 <= a2 + 1e-12);
  // Larger family: value can only grow.
  IntervalFamily small{{fam.intervals.front()}};
  CHECK(ap_constant(w, 2.0, small) <= a2 + 1e-12);
}

TEST_CASE("A_1 constants") {
  const GridGeometry g{-2.0, 0.5, 8};
  CHECK(a1_constant(WeightLaw::constant(1.0).sample(g), weight_family(g)) == doctest::Approx(1.0));
  std::vector<double> v(8, 1.0);
  v[4] = v[5] = 2.0;
  const Weight w(GridFunction(g, v), "bump");
  CHECK(a1_constant(w, IntervalFamily{{{-2.0, 2.0}}}) == doctest::Approx(1.25));
}

TEST_CASE("refinement witnesses") {
  const auto bounded = ap_refinement(WeightLaw::power(0.5), 2.0, {-10.0, 10.0}, 1.0 / 16.0, 6);
  CHECK(bounded.estimates.size() == 6);
  CHECK(bounded.last_change() < 0.05);
  const auto divergent = ap_refinement(WeightLaw::power(1.5), 2.0, {-10.0, 10.0}, 1.0 / 16.0, 9);
  CHECK(divergent.monotone_increasing());
  CHECK(divergent.growth() >= 10.0);
}

TEST_CASE("weight laws") {
  const auto w = weight_law_from_literal("power:0.5");
  CHECK(w.mass(0.0, 4.0) == doctest::Approx(16.0 / 3.0));
  CHECK(w.mass(-1.0, 1.0) == doctest::Approx(4.0 / 3.0));
  CHECK(w.raised(2.0).mass(0.0, 1.0) == doctest::Approx(0.5));
  CHECK(weight_law_from_literal("constant:3").mass(1.0, 2.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(weight_law_from_literal("gauss:1"), Error);
  CHECK_THROWS_AS(WeightLaw::constant(0.0), Error);
}
