#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "lacvar/lacunary.hpp"

namespace lacvar {

/// Transform of the unit box average, F(r) = (1 - e^{-ir}) / (ir), F(0) = 1.
/// |F(r)| = 2|sin(r/2)| / |r|.
std::complex<double> box_transform(double r);

/// dF/dr; Taylor series near 0 where the closed form cancels.
std::complex<double> box_transform_derivative(double r);

/// Transform of (1/n) chi_(0,n) at xi: F(xi n).
std::complex<double> phi_hat(double n, double xi);

struct MultiplierSums {
  double I = 0.0;
  /// Terms k with |xi| n_k >= 1.
  double I1 = 0.0;
  /// Terms k with |xi| n_k < 1.
  double I2 = 0.0;
  /// Sum of squared moduli.
  double Q = 0.0;
  /// Largest single term |phi_hat_k - phi_hat_{k-1}|.
  double max_term = 0.0;
};

/// Sums over k = 1..K of |phi_hat_k(xi) - phi_hat_{k-1}(xi)|, split by the
/// index of the larger scale. I is formed as I1 + I2.
MultiplierSums multiplier_sums(const LacunarySeq& seq, double xi, int K);

struct MultiplierScan {
  int K = 0;
  std::vector<double> xi;
  std::vector<MultiplierSums> sums;

  double sup_I = 0.0;
  double sup_I1 = 0.0;
  double sup_I2 = 0.0;
  double sup_Q = 0.0;
  double argmax_xi = 0.0;
  /// Largest term over the whole scan (Q <= I whenever this is <= 1).
  double max_term = 0.0;
};

/// Throws EmptyGrid for an empty xi list.
MultiplierScan sup_scan(const LacunarySeq& seq, std::span<const double> xi, int K);

/// `count` log-spaced magnitudes in [lo, hi]; with `symmetric` also 0 and the
/// negatives, sorted ascending.
std::vector<double> log_frequency_grid(double lo, double hi, std::size_t count,
                                       bool symmetric = true);

/// "log:<lo>:<hi>:<count>" (symmetric grid) or a comma-separated list.
std::vector<double> frequency_grid_from_literal(std::string_view literal);

/// 8192 magnitudes in [1e-6, 1e6], plus 0 and reflections.
std::vector<double> default_frequency_grid();

struct DerivativeCheck {
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// max |F'(r)| / ((r + 2) / r^2).
  double worst_bound_ratio = 0.0;
  double worst_bound_r = 0.0;
  /// max relative gap between F' and a central difference of F.
  double max_difference_error = 0.0;
  double worst_difference_r = 0.0;
};

/// Checks |F'(r)| <= (r + 2) / r^2 and compares F' against a central
/// difference with step 1e-6 max(1, r). Throws BoundViolation (index and
/// value of the first failing sample) if the bound fails anywhere.
DerivativeCheck derivative_bound_check(std::span<const double> r);

}  // namespace lacvar
