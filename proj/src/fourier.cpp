#include "lacvar/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lacvar/error.hpp"
#include "lacvar/numeric.hpp"
#include "lacvar/parallel.hpp"

namespace lacvar {

namespace {

constexpr double kSeriesCutoff = 0.1;

double parse_number(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse frequency value '" + s + "'");
  }
  return v;
}

}  // namespace

std::complex<double> box_transform(double r) {
  if (r == 0.0) return {1.0, 0.0};
  // (1 - e^{-ir}) / (ir) = sin(r)/r - i (1 - cos r)/r, with 1 - cos r = 2 sin^2(r/2).
  const double half = std::sin(0.5 * r);
  return {std::sin(r) / r, -2.0 * half * half / r};
}

std::complex<double> box_transform_derivative(double r) {
  if (std::abs(r) < kSeriesCutoff) {
    // Real part: d/dr sin(r)/r = sum_{m>=1} (-1)^m 2m r^{2m-1} / (2m+1)!
    // Imag part: -d/dr (1 - cos r)/r = -sum_{m>=1} (-1)^{m+1} (2m-1) r^{2m-2} / (2m)!
    double re = 0.0;
    double im = 0.0;
    double fact_odd = 1.0;   // (2m+1)!
    double fact_even = 1.0;  // (2m)!
    for (int m = 1; m <= 12; ++m) {
      fact_even = fact_odd * (2 * m);
      fact_odd = fact_even * (2 * m + 1);
      const double sign = (m % 2 == 1) ? -1.0 : 1.0;
      re += sign * 2.0 * m * std::pow(r, 2 * m - 1) / fact_odd;
      im += sign * (2.0 * m - 1.0) * std::pow(r, 2 * m - 2) / fact_even;
    }
    return {re, im};
  }
  const double half = std::sin(0.5 * r);
  const double one_minus_cos = 2.0 * half * half;
  const double r2 = r * r;
  return {(r * std::cos(r) - std::sin(r)) / r2, -(r * std::sin(r) - one_minus_cos) / r2};
}

std::complex<double> phi_hat(double n, double xi) {
  if (!(n > 0.0)) {
    throw Error(ErrorCode::NonPositiveWindow, "window length must be positive", std::nullopt, n);
  }
  return box_transform(xi * n);
}

MultiplierSums multiplier_sums(const LacunarySeq& seq, double xi, int K) {
  if (K < 0 || K > seq.max_index()) {
    throw Error(ErrorCode::InvalidArgument, "truncation index outside the sequence");
  }
  // Evenness: |F(-r) - F(-t)| = |F(r) - F(t)|, so evaluate at |xi| only.
  const double ax = std::abs(xi);
  CompensatedSum i1;
  CompensatedSum i2;
  CompensatedSum q;
  MultiplierSums out;
  auto prev = box_transform(ax * seq[0]);
  for (int k = 1; k <= K; ++k) {
    const double n = seq[static_cast<std::size_t>(k)];
    const auto cur = box_transform(ax * n);
    const double term = std::abs(cur - prev);
    (ax * n >= 1.0 ? i1 : i2).add(term);
    q.add(term * term);
    out.max_term = std::max(out.max_term, term);
    prev = cur;
  }
  out.I1 = i1.value();
  out.I2 = i2.value();
  out.I = out.I1 + out.I2;
  out.Q = q.value();
  return out;
}

MultiplierScan sup_scan(const LacunarySeq& seq, std::span<const double> xi, int K) {
  if (xi.empty()) throw Error(ErrorCode::EmptyGrid, "empty frequency grid");
  MultiplierScan scan;
  scan.K = K;
  scan.xi.assign(xi.begin(), xi.end());
  scan.sums.resize(xi.size());
  parallel_for(xi.size(), [&](std::size_t i) { scan.sums[i] = multiplier_sums(seq, xi[i], K); });
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const auto& s = scan.sums[i];
    if (s.I > scan.sup_I) {
      scan.sup_I = s.I;
      scan.argmax_xi = xi[i];
    }
    scan.sup_I1 = std::max(scan.sup_I1, s.I1);
    scan.sup_I2 = std::max(scan.sup_I2, s.I2);
    scan.sup_Q = std::max(scan.sup_Q, s.Q);
    scan.max_term = std::max(scan.max_term, s.max_term);
  }
  return scan;
}

std::vector<double> log_frequency_grid(double lo, double hi, std::size_t count, bool symmetric) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw Error(ErrorCode::InvalidArgument, "log grid needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> mags(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    mags[i] = std::exp(a + (b - a) * t);
  }
  if (count > 1) {
    mags.front() = lo;
    mags.back() = hi;
  }
  if (!symmetric) return mags;
  std::vector<double> out;
  out.reserve(2 * count + 1);
  for (auto it = mags.rbegin(); it != mags.rend(); ++it) out.push_back(-*it);
  out.push_back(0.0);
  out.insert(out.end(), mags.begin(), mags.end());
  return out;
}

std::vector<double> frequency_grid_from_literal(std::string_view literal) {
  if (literal.rfind("log:", 0) == 0) {
    std::vector<std::string_view> parts;
    std::size_t start = 4;
    while (true) {
      const auto pos = literal.find(':', start);
      parts.push_back(literal.substr(start, pos == std::string_view::npos ? pos : pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (parts.size() != 3) {
      throw Error(ErrorCode::InvalidArgument, "expected log:<lo>:<hi>:<count>");
    }
    const double count = parse_number(parts[2]);
    if (count < 1 || count != std::floor(count) || count > 1e7) {
      throw Error(ErrorCode::InvalidArgument, "bad frequency count");
    }
    return log_frequency_grid(parse_number(parts[0]), parse_number(parts[1]),
                              static_cast<std::size_t>(count));
  }
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= literal.size()) {
    const auto pos = literal.find(',', start);
    const auto piece =
        literal.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    out.push_back(parse_number(piece));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (out.empty()) throw Error(ErrorCode::EmptyGrid, "empty frequency grid");
  return out;
}

std::vector<double> default_frequency_grid() { return log_frequency_grid(1e-6, 1e6, 8192); }

DerivativeCheck derivative_bound_check(std::span<const double> r) {
  DerivativeCheck out;
  out.samples = r.size();
  std::int64_t first_bad = -1;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = r[i];
    if (!(x > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "derivative samples must be positive",
                  static_cast<std::int64_t>(i), x);
    }
    const double d = std::abs(box_transform_derivative(x));
    const double bound = (x + 2.0) / (x * x);
    const double ratio = d / bound;
    if (ratio > out.worst_bound_ratio) {
      out.worst_bound_ratio = ratio;
      out.worst_bound_r = x;
    }
    if (d > bound) {
      ++out.violations;
      if (first_bad < 0) first_bad = static_cast<std::int64_t>(i);
    }
    const double step = 1e-6 * std::max(1.0, x);
    const auto fd = (box_transform(x + step) - box_transform(x - step)) / (2.0 * step);
    const double rel = std::abs(fd - box_transform_derivative(x)) / d;
    if (rel > out.max_difference_error) {
      out.max_difference_error = rel;
      out.worst_difference_r = x;
    }
  }
  if (first_bad >= 0) {
    throw Error(ErrorCode::BoundViolation,
                "|F'(r)| exceeds (r + 2) / r^2 at " + std::to_string(out.violations) +
                    " samples",
                first_bad, r[static_cast<std::size_t>(first_bad)]);
  }
  return out;
}

}  // namespace lacvar
