#pragma once

#include <vector>

#include "lacvar/lacunary.hpp"

namespace lacvar {

/// l^s-valued kernel x -> {phi_k(x) - phi_{k-1}(x)}_{k=1..K} with
/// phi_k = (1/n_k) chi_(0, n_k).
struct KernelSpec {
  LacunarySeq seq;
  double s = 2.0;
  int K = 1;

  void validate() const;
};

double kernel_norm(double x, const KernelSpec& spec);

/// ||K(x - y) - K(x)||_{l^s}.
double kernel_difference_norm(double x, double y, const KernelSpec& spec);

/// int_a^b ||K(x - y) - K(x)||^r dx, exact: the integrand is constant
/// between consecutive points of {0, y, n_k, n_k + y}.
double kernel_difference_integral(double a, double b, double y, const KernelSpec& spec, double r);

/// Shell constants c_l = (int_{S_l} ||K(x-y) - K(x)||^r)^{1/r} |S_l|^{1 - 1/r}
/// over S_l = {2^l y < |x| < 2^{l+1} y}. The kernel vanishes for x < 0, so
/// only the right half contributes to the integral; |S_l| counts both halves.
struct ShellReport {
  double y = 0.0;
  double r = 1.0;
  int l_min = 1;
  std::vector<double> integrals;
  std::vector<double> measures;
  std::vector<double> c;
  double total = 0.0;
  /// Share of the total carried by the last `tail_count` shells.
  double tail_fraction = 0.0;
  int tail_count = 5;
};

ShellReport shell_integrals(double y, const KernelSpec& spec, double r, int l_min, int l_max);

/// Integral of the difference over (n_i, n_{i+1}) against
/// C_i n_i^{1/r - 1} with C_i = 2 beta^3 / (beta - 1) beta^{-(i-j)/r}.
struct WindowBound {
  int i = 0;
  int j = 0;
  double y = 0.0;
  double r = 1.0;
  /// (int_{n_i}^{n_{i+1}} ||K(x - y) - K(x)||^r dx)^{1/r}.
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  /// 2 (beta^2 + 1/(1 - beta^2)) beta^{-(i-j)/r}, for comparison; negative
  /// when beta < sqrt(2).
  double reference_constant = 0.0;
  /// Closed form of lhs: only the k = i and k = i + 1 entries differ, by
  /// 1/n_i on (n_i, n_i + y), so lhs = 2^{1/s} y^{1/r} / n_i.
  double closed_form = 0.0;
  /// lhs n_i^{1 - 1/r}.
  double normalized = 0.0;
  bool pass = false;
};

/// Requires i >= j + lacunary_gamma(beta), 0 < y <= n_j and i + 1 <= K; throws
/// PreconditionViolated otherwise.
WindowBound window_bound_check(int i, int j, double y, const KernelSpec& spec, double r);

enum class IndicatorCase { Zero, EqualsWindow };

/// chi_(y, y + n_k)(x) - chi_(0, n_k)(x) for every k <= K: zero for k != i,
/// chi_(n_i, n_i + y)(x) for k = i. Returns which of the two the k = i entry
/// is; throws IdentityViolated(k, x) on a mismatch. Same preconditions as
/// window_bound_check plus n_i < x < n_{i+1}.
IndicatorCase indicator_identity(int i, int j, double y, double x, const LacunarySeq& seq, int K);

/// int_{x > 2y} ||K(x - y) - K(x)|| dx (the truncated kernel vanishes
/// beyond n_K + y).
double hormander_integral(double y, const KernelSpec& spec);

/// Least-squares slope of log(values) against positions.
double log_slope(const std::vector<double>& positions, const std::vector<double>& values);

}  // namespace lacvar
