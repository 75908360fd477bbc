#pragma once

#include <span>
#include <vector>

#include "lacvar/gridfn.hpp"
#include "lacvar/lacunary.hpp"

namespace lacvar {

/// Evaluation points x_i = x0 + (i + offset) h. Outputs sampled on an
/// EvalGrid are stored as GridFunctions on its geometry.
struct EvalGrid {
  GridGeometry geometry;
  double offset = 0.5;

  double point(std::size_t i) const noexcept {
    return geometry.x0 + (static_cast<double>(i) + offset) * geometry.h;
  }
  std::size_t size() const noexcept { return geometry.n; }
};

/// Support of f extended by `reach` on the right, step f.h() / subdivide.
EvalGrid padded_eval_grid(const GridFunction& f, double reach, int subdivide = 1);

struct VariationSpec {
  double s = 2.0;
  int K = 1;
  double tail_tol = 1e-8;
  /// Absolute floor added to the largest computed value in the tail test.
  double tail_floor = 0.0;
  bool waive_tail = false;

  /// s >= 1 finite, 1 <= K <= seq.max_index(), tail_tol > 0.
  void validate(const LacunarySeq& seq) const;
};

/// Levels A_{n_k} f, k = 0..K, on a common grid.
struct ScaleStack {
  std::vector<GridFunction> levels;
};

/// A_n f(x) = (1/n) int_0^n f(x - t) dt from the exact antiderivative.
double average_at(const PrefixIntegral& prefix, double n, double x);
GridFunction average_fast(const GridFunction& f, double n, const EvalGrid& eval);

/// Direct summation over the cells meeting [x - n, x]; cross-check only.
double average_oracle_at(const GridFunction& f, double n, double x);
GridFunction average_oracle(const GridFunction& f, double n, const EvalGrid& eval);

ScaleStack scale_stack(const GridFunction& f, const LacunarySeq& seq, int K,
                       const EvalGrid& eval);

/// Upper bound for the l^s norm of the differences beyond index K:
/// |A_a f - A_b f| <= |f|_1 / a for a < b, and n_{K+j} >= n_K beta^j, so
/// the tail is at most (|f|_1 / n_K) (1 - beta^{-s})^{-1/s}.
double tail_bound(const GridFunction& f, const LacunarySeq& seq, double s, int K);

/// Throws TailTooLarge (index = truncation index that would pass) unless
/// tail_bound <= tail_tol * (largest + tail_floor) or the spec waives it.
void check_tail(const GridFunction& f, const LacunarySeq& seq, const VariationSpec& spec,
                double largest);

/// (sum_{k=1..K} |A_{n_k} f - A_{n_{k-1}} f|^s)^{1/s}, ascending k,
/// compensated. No tail test.
std::vector<double> variation_at(const GridFunction& f, const LacunarySeq& seq,
                                 const VariationSpec& spec, std::span<const double> xs);

GridFunction variation(const GridFunction& f, const LacunarySeq& seq,
                       const VariationSpec& spec, const EvalGrid& eval);

/// Pointwise l^rho aggregate of the variations of every f_j.
GridFunction vector_variation(std::span<const GridFunction> fs, const LacunarySeq& seq,
                              const VariationSpec& spec, double rho, const EvalGrid& eval);

/// Cell edges covering [a, b + n_K] for f on the grid `support` = [a, b].
/// Each A_{n_k} f is linear between consecutive points of the lattice
/// a + i h and its shifts a + n_k + i h, so every cell lies between two such
/// breakpoints; cells wider than `resolution` are split evenly. Between the
/// bands [a + n_k, b + n_k] every A_{n_k} f is constant, so each gap is a
/// single cell.
std::vector<double> profile_edges(const GridGeometry& support, const LacunarySeq& seq, int K,
                                  double resolution);

/// Truncated variation on the full support [a, b + n_K] of its nonzero part.
Profile variation_profile(const GridFunction& f, const LacunarySeq& seq,
                          const VariationSpec& spec, double resolution);

/// l^rho aggregate on the shared profile layout; all f_j on one grid.
Profile vector_variation_profile(std::span<const GridFunction> fs, const LacunarySeq& seq,
                                 const VariationSpec& spec, double rho, double resolution);

}  // namespace lacvar
