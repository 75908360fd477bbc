#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "lacvar/error.hpp"
#include "lacvar/gridfn.hpp"
#include "lacvar/numeric.hpp"
#include "lacvar/weights.hpp"

using namespace lacvar;

namespace {

GridFunction random_function(Rng& rng, std::size_t n, double h, double x0 = 0.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return GridFunction(x0, h, std::move(v));
}

}  // namespace

TEST_CASE("lp_norm examples") {
  const GridFunction ind(0.0, 0.25, {1, 1, 1, 1});
  CHECK(lp_norm(ind, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  const auto two = WeightLaw::constant(2.0);
  CHECK(lp_norm(ind, 1.0, two) == doctest::Approx(2.0).epsilon(1e-15));
  const Weight sampled = two.sample(ind.geometry());
  CHECK(lp_norm(ind, 1.0, &sampled) == doctest::Approx(2.0).epsilon(1e-15));
  const GridFunction f(0.0, 0.5, {3, -4});
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
  CHECK_THROWS_AS(lp_norm(f, 0.5), Error);
}

TEST_CASE("lp_norm homogeneity and triangle inequality") {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto f = random_function(rng, 64, 0.125);
    const auto g = random_function(rng, 64, 0.125);
    const double c = rng.uniform(-5.0, 5.0);
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      CHECK(std::abs(lp_norm(f.scaled(c), p) - std::abs(c) * lp_norm(f, p)) <=
            1e-14 * std::abs(c) * lp_norm(f, p));
      std::vector<double> sum(64);
      for (std::size_t i = 0; i < 64; ++i) sum[i] = f[i] + g[i];
      const GridFunction fg(0.0, 0.125, sum);
      CHECK(lp_norm(fg, p) <= lp_norm(f, p) + lp_norm(g, p) + 1e-12);
    }
  }
}

TEST_CASE("superlevel measure and weak-type sup") {
  const GridFunction one(0.0, 0.25, {1, 1, 1, 1});
  CHECK(superlevel_measure(one, 2.0) == 0.0);
  CHECK(superlevel_measure(one, 0.5) == 1.0);
  const GridFunction f(0.0, 1.0, {0.2, 0.7, 1.3});
  CHECK(superlevel_measure(f, 0.5) == 2.0);
  double prev = 1e300;
  for (double l = 0.05; l < 1.5; l += 0.05) {
    const double m = superlevel_measure(f, l);
    CHECK(m <= prev);
    prev = m;
  }
  // sup over lambda just below each value: 0.2*3, 0.7*2, 1.3*1.
  CHECK(weak_type_sup(f) == doctest::Approx(1.4));
}

TEST_CASE("bmo examples") {
  const GridFunction c(0.0, 0.5, {2, 2, 2, 2});
  CHECK(bmo_norm(c, dyadic_family(c.geometry())) == doctest::Approx(0.0));
  const GridFunction haar(0.0, 0.5, {1, 1, -1, -1});
  CHECK(bmo_norm(haar, IntervalFamily{{{0.0, 2.0}}}) == doctest::Approx(1.0));
  const GridFunction ind(0.0, 0.5, {1, 1});
  CHECK(bmo_norm(ind, IntervalFamily{{{0.0, 1.0}}}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(bmo_norm(ind, IntervalFamily{}), Error);

  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_function(rng, 32, 0.25);
    CHECK(bmo_norm(f, dyadic_family(f.geometry())) <= 2.0 * f.linf() + 1e-12);
  }
}

TEST_CASE("mean oscillation handles partial cells") {
  const GridFunction f(0.0, 1.0, {0, 1});
  const PrefixIntegral prefix(f);
  // On (0.5, 1.5): half zeros, half ones; mean 1/2, oscillation 1/2.
  CHECK(mean_oscillation(f, prefix, {0.5, 1.5}) == doctest::Approx(0.5));
}

TEST_CASE("atoms") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto a = make_atom({0.0, 1.0}, seed, 1.0 / 64.0, 16);
    CHECK_FALSE(atom_violation(a.function, a.interval).has_value());
    CHECK(a.function.linf() == doctest::Approx(1.0));
    CHECK(std::abs(a.function.mass()) <= 1e-15);
  }
  const double L = std::ldexp(1.0, 10);
  const auto big = make_atom({0.0, L}, 7, L / 64.0, 16);
  CHECK_FALSE(atom_violation(big.function, big.interval).has_value());
  CHECK(big.function.linf() == doctest::Approx(1.0 / L));
  CHECK(std::abs(big.function.mass()) <= 1e-15);
  CHECK_THROWS_AS(make_atom({0.0, 1.0}, 1, 1.0, 0), Error);
}

TEST_CASE("families") {
  FamilyParams p;
  p.scale_min = 1.0;
  p.scale_max = 8.0;
  const auto ind = make_family(FamilyKind::Indicator, p);
  REQUIRE(ind.size() == 4);
  for (const auto& f : ind) CHECK(f.linf() == 1.0);

  p.epsilons = {p.h};
  const auto spike = make_family(FamilyKind::Spike, p);
  REQUIRE(spike.size() == 1);
  CHECK(spike[0].size() == 1);
  CHECK(spike[0].mass() == doctest::Approx(1.0));

  p.count = 100;
  p.seed = 1;
  const auto a = make_family(FamilyKind::RandomStep, p);
  const auto b = make_family(FamilyKind::RandomStep, p);
  REQUIRE(a.size() == 100);
  std::set<std::vector<double>> distinct;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::equal(a[i].values().begin(), a[i].values().end(), b[i].values().begin(),
                     b[i].values().end()));
    distinct.emplace(a[i].values().begin(), a[i].values().end());
  }
  CHECK(distinct.size() == 100);
  CHECK_THROWS_AS(family_kind_from_string("gauss"), Error);
}

TEST_CASE("csv round trip") {
  Rng rng(9);
  const auto f = random_function(rng, 37, 0.1, -1.3);
  std::stringstream io;
  write_csv(f, io);
  const auto g = read_csv(io);
  CHECK(g.geometry() == f.geometry());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);

  std::stringstream bad("x,value\n0,1\n");
  CHECK_THROWS_AS(read_csv(bad), Error);
}

TEST_CASE("profile norms over uneven cells") {
  Profile p;
  p.edges = {0.0, 1.0, 3.0, 3.5};
  p.values = {1.0, 2.0, 4.0};
  CHECK(lp_norm(p, 1.0) == doctest::Approx(1.0 + 4.0 + 2.0));
  CHECK(superlevel_measure(p, 1.5) == doctest::Approx(2.5));
  // lambda -> 4: 0.5*4 = 2; lambda -> 2: 2*2.5 = 5; lambda -> 1: 1*3.5.
  CHECK(weak_type_sup(p) == doctest::Approx(5.0));
  CHECK(weak_type_sup(p, WeightLaw::constant(2.0)) == doctest::Approx(10.0));
  const auto mids = p.sample_points();
  CHECK(mids == std::vector<double>{0.5, 2.0, 3.25});
}
