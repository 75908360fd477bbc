#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lacvar/avgops.hpp"
#include "lacvar/error.hpp"
#include "lacvar/gridfn.hpp"
#include "lacvar/lacunary.hpp"
#include "lacvar/numeric.hpp"

using namespace lacvar;

namespace {

GridFunction random_step(Rng& rng, std::size_t n, double h, double x0 = 0.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return GridFunction(x0, h, std::move(v));
}

GridFunction unit_indicator() { return GridFunction(0.0, 0.25, {1, 1, 1, 1}); }

VariationSpec spec_for(double s, int K, bool waive = true) {
  VariationSpec spec;
  spec.s = s;
  spec.K = K;
  spec.waive_tail = waive;
  return spec;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("average examples") {
  const auto ind = unit_indicator();
  const PrefixIntegral prefix(ind);
  CHECK(average_at(prefix, 2.0, 2.0) == doctest::Approx(0.5));
  CHECK(average_at(prefix, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(average_at(prefix, 1.0, 0.0) == 0.0);

  const GridFunction c(0.0, 0.5, std::vector<double>(40, 3.25));
  CHECK(average_at(PrefixIntegral(c), 5.0, 12.0) == doctest::Approx(3.25).epsilon(1e-14));

  const double h = 1.0 / 64.0;
  std::vector<double> ramp(6400);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = (static_cast<double>(i) + 0.5) * h;
  const GridFunction x(0.0, h, ramp);
  CHECK(std::abs(average_at(PrefixIntegral(x), 10.0, 50.0) - 45.0) <= h);
  CHECK_THROWS_AS(average_at(prefix, 0.0, 1.0), Error);
}

TEST_CASE("fast averages match the direct oracle") {
  Rng rng(21);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto n_cells = static_cast<std::size_t>(rng.integer(1, 300));
    const double h = std::ldexp(1.0, static_cast<int>(rng.integer(-6, 2)));
    const auto f = random_step(rng, n_cells, h, rng.uniform(-5.0, 5.0));
    const double n = rng.uniform(0.01, 2.0) * h * static_cast<double>(n_cells);
    const double x = rng.uniform(f.left() - n, f.right() + n);
    const double fast = average_at(PrefixIntegral(f), n, x);
    const double slow = average_oracle_at(f, n, x);
    // Relative to the scale of the window's content.
    std::vector<double> absval(f.values().begin(), f.values().end());
    for (auto& v : absval) v = std::abs(v);
    const double scale = average_oracle_at(GridFunction(f.geometry(), absval), n, x);
    if (scale > 0.0) worst = std::max(worst, std::abs(fast - slow) / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("scale stack") {
  const auto seq = sequence_from_literal("geometric:1:2:8");
  const auto ind = unit_indicator();
  const EvalGrid at_one{{0.5, 1.0, 1}, 0.5};
  const auto stack = scale_stack(ind, seq, 7, at_one);
  REQUIRE(stack.levels.size() == 8);
  for (int k = 0; k <= 7; ++k) CHECK(stack.levels[k][0] == doctest::Approx(std::ldexp(1.0, -k)));

  const EvalGrid left{{-4.0, 0.5, 8}, 0.5};
  for (const auto& level : scale_stack(ind, seq, 7, left).levels) CHECK(level.linf() == 0.0);

  const GridFunction one(0.0, 1.0, std::vector<double>(400, 1.0));
  const EvalGrid inside{{200.0, 1.0, 100}, 0.5};
  for (const auto& level : scale_stack(one, seq, 7, inside).levels) {
    for (double v : level.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("variation examples") {
  const auto seq = sequence_from_literal("geometric:1:2:41");
  const auto ind = unit_indicator();
  const std::vector<double> x1{1.0};
  CHECK(variation_at(ind, seq, spec_for(2.0, 40), x1)[0] ==
        doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
  const std::vector<double> neg{-0.5, -3.0};
  for (double v : variation_at(ind, seq, spec_for(2.0, 40), neg)) CHECK(v == 0.0);

  const GridFunction one(0.0, 1.0, std::vector<double>(4000, 1.0));
  const std::vector<double> interior{1000.5, 2500.5};
  for (double v : variation_at(one, seq, spec_for(2.0, 8), interior)) CHECK(v == 0.0);
}

TEST_CASE("tail bound") {
  const auto seq = sequence_from_literal("geometric:1:2:21");
  const GridFunction f(0.0, 1.0, {1.0});
  CHECK(tail_bound(f, seq, 2.0, 20) == doctest::Approx(2.0 / std::ldexp(1.0, 20) / std::sqrt(3.0)));
  CHECK(tail_bound(GridFunction(0.0, 1.0, {0.0}), seq, 2.0, 20) == 0.0);

  VariationSpec strict = spec_for(2.0, 5, false);
  strict.tail_tol = 1e-8;
  try {
    check_tail(f, seq, strict, 1.0);
    FAIL("expected TailTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TailTooLarge);
    REQUIRE(e.index().has_value());
    // The suggested truncation does pass.
    strict.K = static_cast<int>(*e.index());
    const auto longer = sequence_from_literal("geometric:1:2:60");
    CHECK_NOTHROW(check_tail(f, longer, strict, 1.0));
    strict.K -= 1;
    CHECK_THROWS_AS(check_tail(f, longer, strict, 1.0), Error);
  }
}

TEST_CASE("variation invariants") {
  Rng rng(5);
  const auto seq = sequence_from_literal("geometric:0.3:2:12");
  const auto spec = spec_for(2.0, 11);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_step(rng, 64, 0.125);
    const auto g = random_step(rng, 64, 0.125);
    std::vector<double> xs;
    for (int i = 0; i < 200; ++i) xs.push_back(rng.uniform(-1.0, 8.0 + 614.4));
    const double c = rng.uniform(-3.0, 3.0);
    std::vector<double> sum(64);
    for (std::size_t i = 0; i < 64; ++i) sum[i] = f[i] + g[i];
    const auto vf = variation_at(f, seq, spec, xs);
    const auto vg = variation_at(g, seq, spec, xs);
    const auto vc = variation_at(f.scaled(c), seq, spec, xs);
    const auto vs = variation_at(GridFunction(f.geometry(), sum), seq, spec, xs);
    const auto v1 = variation_at(f, seq, spec_for(1.0, 11), xs);
    const auto v3 = variation_at(f, seq, spec_for(3.0, 11), xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(vf[i] >= 0.0);
      CHECK(std::abs(vc[i] - std::abs(c) * vf[i]) <= 1e-12 * std::abs(c) * vf[i] + 1e-300);
      CHECK(vs[i] <= vf[i] + vg[i] + 1e-12);
      CHECK(vf[i] <= v1[i] * (1 + 1e-12));
      CHECK(v3[i] <= vf[i] * (1 + 1e-12));
    }
  }
}

TEST_CASE("translation and dilation") {
  Rng rng(8);
  const auto f = random_step(rng, 32, 0.25);
  const auto seq = sequence_from_literal("geometric:0.5:2:10");
  const auto spec = spec_for(2.0, 9);
  const double a = 0.25 * 13;
  const GridFunction shifted(f.x0() + a, f.h(), {f.values().begin(), f.values().end()});
  std::vector<double> xs;
  std::vector<double> xs_shift;
  for (int i = 0; i < 100; ++i) {
    xs.push_back(rng.uniform(-1.0, 300.0));
    xs_shift.push_back(xs.back() + a);
  }
  const auto v = variation_at(f, seq, spec, xs);
  const auto vt = variation_at(shifted, seq, spec, xs_shift);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(v[i] - vt[i]) <= 1e-12 * (v[i] + 1e-300));

  // g(x) = f(2x) with scales n_k against f with scales 2 n_k at 2x.
  const double lam = 2.0;
  const GridFunction g(f.x0() / lam, f.h() / lam, {f.values().begin(), f.values().end()});
  const auto wide = sequence_from_literal("geometric:1:2:10");
  std::vector<double> ys;
  for (double x : xs) ys.push_back(lam * x);
  const auto vg = variation_at(g, seq, spec, xs);
  const auto vf = variation_at(f, wide, spec, ys);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(rel(vg[i], vf[i]) <= 1e-12);
}

TEST_CASE("profile cells carry the breakpoint structure") {
  Rng rng(13);
  const auto seq = sequence_from_literal("geometric:0.01:2:14");  // n_0 < h
  const auto spec = spec_for(2.0, 13);
  const auto f = random_step(rng, 16, 0.25);
  auto prof = variation_profile(f, seq, spec, f.h());
  CHECK(prof.left() == doctest::Approx(f.left()));
  CHECK(prof.right() == doctest::Approx(f.right() + seq[13]));
  const auto mids = prof.sample_points();
  const auto direct = variation_at(f, seq, spec, mids);
  for (std::size_t i = 0; i < mids.size(); ++i) CHECK(prof.values[i] == direct[i]);

  // L^2 norm against a fine midpoint grid over the same range. Inside a
  // cell every average is linear but V is not, so the cell values are a
  // midpoint rule; cells right after a jump are n_0 wide and steep, so the
  // resolution has to drop below n_0 before the error is small.
  const double coarse_l2 = lp_norm(prof, 2.0);
  prof = variation_profile(f, seq, spec, f.h() / 64.0);
  const double fine_h = f.h() / 256.0;
  const auto n = static_cast<std::size_t>((prof.right() - prof.left()) / fine_h);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = prof.left() + (static_cast<double>(i) + 0.5) * fine_h;
  CompensatedSum s;
  for (double v : variation_at(f, seq, spec, xs)) s.add(v * v * fine_h);
  const double exact = std::sqrt(s.value());
  CHECK(rel(lp_norm(prof, 2.0), exact) <= 1e-3);
  CHECK(rel(lp_norm(prof, 2.0), exact) < rel(coarse_l2, exact));
}

TEST_CASE("vector variation") {
  Rng rng(17);
  const auto seq = sequence_from_literal("geometric:0.5:2:10");
  const auto spec = spec_for(2.0, 9);
  const EvalGrid eval{{0.0, 0.25, 1200}, 0.5};
  const auto f = random_step(rng, 32, 0.25);
  const auto single = vector_variation(std::vector<GridFunction>{f}, seq, spec, 1.5, eval);
  const auto plain = variation(f, seq, spec, eval);
  for (std::size_t i = 0; i < eval.size(); ++i) CHECK(single[i] == doctest::Approx(plain[i]).epsilon(1e-14));

  const auto twice = vector_variation(std::vector<GridFunction>{f, f}, seq, spec, 2.0, eval);
  for (std::size_t i = 0; i < eval.size(); ++i) {
    CHECK(twice[i] == doctest::Approx(std::sqrt(2.0) * plain[i]).epsilon(1e-13));
  }

  std::vector<GridFunction> eight;
  for (int j = 0; j < 8; ++j) eight.push_back(random_step(rng, 32, 0.25));
  const auto r2 = vector_variation(eight, seq, spec, 2.0, eval);
  const auto r3 = vector_variation(eight, seq, spec, 3.0, eval);
  for (std::size_t i = 0; i < eval.size(); ++i) CHECK(r3[i] <= r2[i] * (1 + 1e-12));

  const auto other = random_step(rng, 16, 0.5);
  CHECK_THROWS_AS(vector_variation(std::vector<GridFunction>{f, other}, seq, spec, 2.0, eval),
                  Error);
  CHECK_THROWS_AS(vector_variation(eight, seq, spec, 0.5, eval), Error);
}

TEST_CASE("spec validation") {
  const auto seq = sequence_from_literal("geometric:1:2:5");
  CHECK_THROWS_AS(spec_for(0.5, 2).validate(seq), Error);
  CHECK_THROWS_AS(spec_for(2.0, 5).validate(seq), Error);
  CHECK_THROWS_AS(spec_for(INFINITY, 2).validate(seq), Error);
  CHECK_NOTHROW(spec_for(2.0, 4).validate(seq));
}
