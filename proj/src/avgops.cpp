#include "lacvar/avgops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lacvar/error.hpp"
#include "lacvar/numeric.hpp"

namespace lacvar {

namespace {

void check_window(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::NonPositiveWindow, "window length must be positive", std::nullopt,
                n);
  }
}

double pow_abs(double v, double s) {
  const double a = std::abs(v);
  return s == 1.0 ? a : (s == 2.0 ? a * a : std::pow(a, s));
}

double root(double sum, double s) {
  return s == 1.0 ? sum : (s == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / s));
}

/// Pointwise variation with per-level averages supplied by `avg(k)`.
template <class Avg>
double variation_point(int K, double s, Avg&& avg) {
  CompensatedSum sum;
  double prev = avg(0);
  for (int k = 1; k <= K; ++k) {
    const double cur = avg(k);
    sum.add(pow_abs(cur - prev, s));
    prev = cur;
  }
  return root(std::max(0.0, sum.value()), s);
}

void check_same_grid(std::span<const GridFunction> fs) {
  if (fs.empty()) throw Error(ErrorCode::InvalidArgument, "no functions");
  for (const auto& f : fs) {
    if (!(f.geometry() == fs.front().geometry())) {
      throw Error(ErrorCode::GridMismatch, "functions live on different grids");
    }
  }
}

void check_rho(double rho) {
  if (!(rho >= 1.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::InvalidArgument, "rho must satisfy 1 <= rho < inf");
  }
}

double aggregate(std::span<const double> parts, double rho) {
  CompensatedSum s;
  for (double v : parts) s.add(pow_abs(v, rho));
  return root(s.value(), rho);
}

constexpr std::size_t kMaxProfileEdges = 50'000'000;

std::vector<double> midpoints(const std::vector<double>& edges) {
  std::vector<double> xs(edges.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = edges[i] + 0.5 * (edges[i + 1] - edges[i]);
  return xs;
}

}  // namespace

EvalGrid padded_eval_grid(const GridFunction& f, double reach, int subdivide) {
  if (subdivide < 1 || !(reach >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bad eval grid parameters");
  }
  const double h = f.h() / subdivide;
  const double span = f.right() + reach - f.left();
  const auto n = static_cast<std::size_t>(std::ceil(span / h - 1e-9));
  return EvalGrid{{f.left(), h, std::max<std::size_t>(n, 1)}, 0.5};
}

void VariationSpec::validate(const LacunarySeq& seq) const {
  if (!(s >= 1.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::InvalidArgument, "variation exponent must satisfy 1 <= s < inf");
  }
  if (K < 1 || K > seq.max_index()) {
    throw Error(ErrorCode::InvalidArgument,
                "truncation index K=" + std::to_string(K) + " outside [1, " +
                    std::to_string(seq.max_index()) + "]");
  }
  if (!(tail_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tail_tol must be positive");
}

double average_at(const PrefixIntegral& prefix, double n, double x) {
  check_window(n);
  return prefix.integral(x - n, x) / n;
}

GridFunction average_fast(const GridFunction& f, double n, const EvalGrid& eval) {
  check_window(n);
  const PrefixIntegral prefix(f);
  std::vector<double> out(eval.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = eval.point(i);
    out[i] = prefix.integral(x - n, x) / n;
  }
  return GridFunction(eval.geometry, std::move(out));
}

double average_oracle_at(const GridFunction& f, double n, double x) {
  check_window(n);
  const auto g = f.geometry();
  const double a = x - n;
  const auto first = static_cast<std::ptrdiff_t>(std::floor((a - g.x0) / g.h)) - 1;
  const auto last = static_cast<std::ptrdiff_t>(std::floor((x - g.x0) / g.h)) + 1;
  const auto lo = std::max<std::ptrdiff_t>(first, 0);
  const auto hi = std::min<std::ptrdiff_t>(last, static_cast<std::ptrdiff_t>(g.n) - 1);
  CompensatedSum sum;
  for (auto i = lo; i <= hi; ++i) {
    const double cl = g.x0 + static_cast<double>(i) * g.h;
    const double overlap = std::min(cl + g.h, x) - std::max(cl, a);
    if (overlap > 0.0) sum.add(overlap * f[static_cast<std::size_t>(i)]);
  }
  return sum.value() / n;
}

GridFunction average_oracle(const GridFunction& f, double n, const EvalGrid& eval) {
  check_window(n);
  std::vector<double> out(eval.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = average_oracle_at(f, n, eval.point(i));
  return GridFunction(eval.geometry, std::move(out));
}

ScaleStack scale_stack(const GridFunction& f, const LacunarySeq& seq, int K,
                       const EvalGrid& eval) {
  if (K < 0 || K > seq.max_index()) {
    throw Error(ErrorCode::InvalidArgument, "K + 1 exceeds the sequence length");
  }
  ScaleStack stack;
  for (int k = 0; k <= K; ++k) {
    stack.levels.push_back(average_fast(f, seq[static_cast<std::size_t>(k)], eval));
  }
  return stack;
}

double tail_bound(const GridFunction& f, const LacunarySeq& seq, double s, int K) {
  if (K < 0 || K > seq.max_index()) throw Error(ErrorCode::InvalidArgument, "bad K");
  if (!(s >= 1.0)) throw Error(ErrorCode::InvalidArgument, "s must be >= 1");
  const double mass = f.l1();
  if (mass == 0.0) return 0.0;
  const double nk = seq[static_cast<std::size_t>(K)];
  return mass / nk * std::pow(1.0 - std::pow(seq.beta(), -s), -1.0 / s);
}

void check_tail(const GridFunction& f, const LacunarySeq& seq, const VariationSpec& spec,
                double largest) {
  if (spec.waive_tail) return;
  const double bound = tail_bound(f, seq, spec.s, spec.K);
  const double target = spec.tail_tol * (largest + spec.tail_floor);
  if (bound <= target) return;
  std::int64_t needed = spec.K;
  if (target > 0.0) {
    needed += static_cast<std::int64_t>(std::ceil(std::log(bound / target) / std::log(seq.beta())));
  } else {
    needed = -1;
  }
  throw Error(ErrorCode::TailTooLarge,
              "analytic tail bound " + std::to_string(bound) + " exceeds tolerance " +
                  std::to_string(target) +
                  (needed >= 0 ? "; need K >= " + std::to_string(needed) : std::string()),
              needed, bound);
}

std::vector<double> variation_at(const GridFunction& f, const LacunarySeq& seq,
                                 const VariationSpec& spec, std::span<const double> xs) {
  spec.validate(seq);
  const PrefixIntegral prefix(f);
  const auto scales = seq.scales();
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    out[i] = variation_point(spec.K, spec.s, [&](int k) {
      const double n = scales[static_cast<std::size_t>(k)];
      return prefix.integral(x - n, x) / n;
    });
  }
  return out;
}

GridFunction variation(const GridFunction& f, const LacunarySeq& seq,
                       const VariationSpec& spec, const EvalGrid& eval) {
  std::vector<double> xs(eval.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = eval.point(i);
  auto v = variation_at(f, seq, spec, xs);
  check_tail(f, seq, spec, *std::max_element(v.begin(), v.end()));
  return GridFunction(eval.geometry, std::move(v));
}

GridFunction vector_variation(std::span<const GridFunction> fs, const LacunarySeq& seq,
                              const VariationSpec& spec, double rho, const EvalGrid& eval) {
  check_same_grid(fs);
  check_rho(rho);
  std::vector<GridFunction> parts;
  for (const auto& f : fs) parts.push_back(variation(f, seq, spec, eval));
  std::vector<double> out(eval.size());
  std::vector<double> column(fs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < parts.size(); ++j) column[j] = parts[j][i];
    out[i] = aggregate(column, rho);
  }
  return GridFunction(eval.geometry, std::move(out));
}

std::vector<double> profile_edges(const GridGeometry& support, const LacunarySeq& seq, int K,
                                  double resolution) {
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be > 0");
  if (K < 0 || K > seq.max_index()) throw Error(ErrorCode::InvalidArgument, "bad K");
  const double a = support.left();
  const double b = support.right();
  const double h = support.h;
  struct Group {
    double left;
    double right;
    std::vector<double> shifts;
  };
  std::vector<Group> groups{{a, b, {0.0}}};
  for (int k = 0; k <= K; ++k) {
    const double n = seq[static_cast<std::size_t>(k)];
    if (a + n <= groups.back().right) {
      groups.back().right = std::max(groups.back().right, b + n);
      groups.back().shifts.push_back(n);
    } else {
      groups.push_back({a + n, b + n, {n}});
    }
  }

  std::vector<double> edges;
  auto push = [&](double c, bool subdivide) {
    const double tol = 1e-9 * h + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(c);
    if (edges.empty()) {
      edges.push_back(c);
      return;
    }
    if (c <= edges.back() + tol) return;
    const double start = edges.back();
    const double width = c - start;
    const auto parts = subdivide ? static_cast<std::size_t>(
                                       std::max(1.0, std::ceil(width / resolution - 1e-9)))
                                 : std::size_t{1};
    for (std::size_t m = 1; m < parts; ++m) {
      edges.push_back(start + width * static_cast<double>(m) / static_cast<double>(parts));
    }
    edges.push_back(c);
    if (edges.size() > kMaxProfileEdges) {
      throw Error(ErrorCode::BadParams, "variation profile needs too many cells");
    }
  };

  std::vector<double> offsets;
  for (const auto& group : groups) {
    // Breakpoints a + shift + i h all sit at lattice points x0 + i h plus one
    // of the offsets fmod(shift, h).
    offsets.clear();
    for (double shift : group.shifts) {
      double o = std::fmod(shift, h);
      if (o < 1e-12 * h || o > h * (1.0 - 1e-12)) o = 0.0;
      offsets.push_back(o);
    }
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

    push(group.left, false);
    const auto i_lo = static_cast<std::int64_t>(std::floor((group.left - a) / h)) - 1;
    const auto i_hi = static_cast<std::int64_t>(std::ceil((group.right - a) / h)) + 1;
    const double tol = 1e-9 * h;
    for (auto i = i_lo; i <= i_hi; ++i) {
      const double base = a + static_cast<double>(i) * h;
      for (double o : offsets) {
        const double c = base + o;
        if (c <= group.left + tol || c >= group.right - tol) continue;
        push(c, true);
      }
    }
    push(group.right, true);
  }
  return edges;
}

Profile variation_profile(const GridFunction& f, const LacunarySeq& seq,
                          const VariationSpec& spec, double resolution) {
  spec.validate(seq);
  Profile out;
  out.edges = profile_edges(f.geometry(), seq, spec.K, resolution);
  out.values = variation_at(f, seq, spec, midpoints(out.edges));
  check_tail(f, seq, spec, out.max_value());
  return out;
}

Profile vector_variation_profile(std::span<const GridFunction> fs, const LacunarySeq& seq,
                                 const VariationSpec& spec, double rho, double resolution) {
  check_same_grid(fs);
  check_rho(rho);
  std::vector<Profile> parts;
  for (const auto& f : fs) parts.push_back(variation_profile(f, seq, spec, resolution));
  Profile out;
  out.edges = parts.front().edges;
  out.values.resize(out.edges.size() - 1);
  std::vector<double> column(fs.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    for (std::size_t j = 0; j < parts.size(); ++j) column[j] = parts[j].values[i];
    out.values[i] = aggregate(column, rho);
  }
  return out;
}

}  // namespace lacvar
