#include <doctest.h>

#include <cmath>
#include <vector>

#include "lacvar/error.hpp"
#include "lacvar/kernel.hpp"
#include "lacvar/lacunary.hpp"
#include "lacvar/numeric.hpp"

using namespace lacvar;

namespace {

KernelSpec dyadic(int count, double s = 2.0) {
  return {sequence_from_literal("geometric:1:2:" + std::to_string(count)), s, count - 1};
}

/// Stratified Monte Carlo estimate of int_a^b ||K(x - y) - K(x)||^r dx with
/// 1000 equal strata. The integrand is supported on a few short windows, so
/// unstratified sampling needs far more than 10^6 points for 0.5%.
double monte_carlo(double a, double b, double y, const KernelSpec& spec, double r,
                   std::size_t samples, std::uint64_t seed) {
  constexpr std::size_t kStrata = 1000;
  Rng rng(seed);
  const double width = (b - a) / kStrata;
  CompensatedSum s;
  for (std::size_t i = 0; i < samples; ++i) {
    const double lo = a + static_cast<double>(i % kStrata) * width;
    s.add(std::pow(kernel_difference_norm(lo + width * rng.uniform(), y, spec), r));
  }
  return (b - a) * s.value() / static_cast<double>(samples);
}

}  // namespace

TEST_CASE("kernel norms") {
  const auto spec = dyadic(10);
  CHECK(kernel_norm(-0.5, spec) == 0.0);
  // At x = 1.5: phi_0 = 0, phi_1 = 1/2, phi_k = 2^-k after; differences
  // 1/2, -1/4, -1/8, ...
  double expect = 0.25;
  for (int k = 2; k <= 9; ++k) expect += std::ldexp(1.0, -2 * k);
  CHECK(kernel_norm(1.5, spec) == doctest::Approx(std::sqrt(expect)));
  CHECK(kernel_difference_norm(5.0, 0.0, spec) == 0.0);
}

TEST_CASE("exact integrals agree with Monte Carlo") {
  const auto spec = dyadic(12);
  for (double r : {1.0, 2.0}) {
    const double exact = kernel_difference_integral(2.0, 64.0, 1.0, spec, r);
    const double mc = monte_carlo(2.0, 64.0, 1.0, spec, r, 1'000'000, 42);
    CHECK(std::abs(mc - exact) <= 0.005 * exact);
  }
  const auto wb = window_bound_check(3, 0, 1.0, spec, 1.0);
  const double mc = monte_carlo(8.0, 16.0, 1.0, spec, 1.0, 1'000'000, 7);
  CHECK(std::abs(mc - wb.lhs) <= 0.005 * wb.lhs);
  const auto shells = shell_integrals(0.75, spec, 2.0, 1, 4);
  for (int l = 1; l <= 4; ++l) {
    const double lo = std::ldexp(0.75, l);
    const double est = monte_carlo(lo, 2.0 * lo, 0.75, spec, 2.0, 1'000'000, 100 + l);
    CHECK(std::abs(est - shells.integrals[l - 1]) <= 0.005 * shells.integrals[l - 1]);
  }
}

TEST_CASE("shells") {
  const auto spec = dyadic(31);
  const auto rep = shell_integrals(1.0, spec, 1.0, 1, 20);
  CHECK(rep.c.size() == 20);
  CHECK(rep.tail_fraction < 0.01);
  // Shells beyond n_K + y carry nothing.
  const auto small = dyadic(6);
  const auto far = shell_integrals(64.0, small, 1.0, 1, 3);
  for (double c : far.c) CHECK(c == 0.0);
  CHECK_THROWS_AS(shell_integrals(0.0, spec, 1.0, 1, 20), Error);
}

TEST_CASE("window bound") {
  const auto spec = dyadic(30);
  const auto wb = window_bound_check(3, 0, 1.0, spec, 1.0);
  CHECK(wb.pass);
  CHECK(wb.lhs == doctest::Approx(wb.closed_form).epsilon(1e-12));
  CHECK(wb.lhs == doctest::Approx(std::sqrt(2.0) / 8.0));
  CHECK(window_bound_check(3, 0, 1e-9, spec, 1.0).lhs < 1e-9);
  CHECK_THROWS_AS(window_bound_check(3, 0, 2.0, spec, 1.0), Error);
  CHECK_THROWS_AS(window_bound_check(29, 0, 1.0, spec, 1.0), Error);
  const KernelSpec tight{validate_lacunary({1, 1.2, 1.44, 1.728, 2.0736, 2.48832}, 1.2), 2.0, 5};
  // lacunary_gamma(1.2) = 10 > 4.
  CHECK_THROWS_AS(window_bound_check(4, 0, 1.0, tight, 1.0), Error);
  const auto wide = window_bound_check(3, 0, 1.0, spec, 2.0);
  CHECK(wide.reference_constant > 0.0);
}

TEST_CASE("indicator identity") {
  const auto seq = sequence_from_literal("geometric:1:2:12");
  CHECK(indicator_identity(1, 0, 0.5, 2.25, seq, 11) == IndicatorCase::EqualsWindow);
  CHECK(indicator_identity(1, 0, 0.5, 3.0, seq, 11) == IndicatorCase::Zero);
  CHECK_THROWS_AS(indicator_identity(1, 0, 0.5, 5.0, seq, 11), Error);
  // lacunary_gamma(1.25) = 8, so i = 2, j = 0 is not admissible.
  const auto slow = validate_lacunary({1, 2, 4, 5, 10, 20}, 1.25);
  CHECK_THROWS_AS(indicator_identity(2, 0, 1.0, 4.5, slow, 4), Error);
}

TEST_CASE("Hormander integral and slope fit") {
  const auto spec = dyadic(31);
  const double at1 = hormander_integral(1.0, spec);
  CHECK(at1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  for (double y : {2.0, 16.0, 1024.0}) CHECK(hormander_integral(y, spec) == doctest::Approx(at1).epsilon(1e-6));
  CHECK(log_slope({1, 2, 3}, {2.0, 4.0, 8.0}) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(log_slope({1}, {1}), Error);
}
