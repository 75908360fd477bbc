#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace lacvar {

/// Finite increasing positive scales n_0 < n_1 < ... < n_K with
/// n_{k+1}/n_k >= beta (up to kRatioSlack relative).
class LacunarySeq {
 public:
  std::span<const double> scales() const noexcept { return scales_; }
  double beta() const noexcept { return beta_; }
  std::size_t size() const noexcept { return scales_.size(); }
  double operator[](std::size_t k) const { return scales_[k]; }
  /// Largest usable truncation index (size - 1).
  int max_index() const noexcept { return static_cast<int>(scales_.size()) - 1; }

  /// First K+1 scales as a new sequence with the same beta.
  LacunarySeq truncated(int K) const;

 private:
  friend LacunarySeq validate_lacunary(std::vector<double> scales, double beta);
  LacunarySeq(std::vector<double> scales, double beta)
      : scales_(std::move(scales)), beta_(beta) {}

  std::vector<double> scales_;
  double beta_ = 2.0;
};

/// Output of the gap-filling refinement: every consecutive ratio lies in
/// [beta, beta^2] and the original scales sit at `origin_indices`.
struct RefinedSeq {
  std::vector<double> scales;
  double beta = 2.0;
  std::vector<std::size_t> origin_indices;

  LacunarySeq as_lacunary() const;
};

/// Throws Error{NonPositiveScale | NotIncreasing | RatioBelowBeta} with the
/// first violating index, or InvalidArgument for an empty list / beta <= 1.
LacunarySeq validate_lacunary(std::vector<double> scales, double beta);

/// Smallest integer g >= 1 with 1/beta + beta^{-g} <= 1.
int lacunary_gamma(double beta);

/// Inserts geometric steps m_prev * beta into every gap with ratio above
/// beta^2 until the remaining ratio is at most beta^2.
RefinedSeq refine(const LacunarySeq& seq);

/// n_j + n_k <= n_{k+1}; exact comparison.
bool gap_separated(std::span<const double> scales, std::size_t j, std::size_t k);

/// Pairs (j, k) with k >= j + gamma - 1, k + 1 < size, violating gap_separated.
std::vector<std::pair<std::size_t, std::size_t>> gap_separation_violations(
    std::span<const double> scales, int gamma_value);

/// Pairs (l, k), l < k, violating beta^{-2(k-l)} <= n_l/n_k <= beta^{-(k-l)}
/// (relative slack kRatioSlack on both sides).
std::vector<std::pair<std::size_t, std::size_t>> ratio_bracket_violations(
    std::span<const double> scales, double beta);

/// Parses "geometric:<base>:<ratio>:<count>" (beta = ratio).
LacunarySeq sequence_from_literal(std::string_view literal);

/// Explicit scales; beta is the smallest consecutive ratio.
LacunarySeq sequence_from_scales(std::vector<double> scales);

}  // namespace lacvar
