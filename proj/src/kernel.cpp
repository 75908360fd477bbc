#include "lacvar/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lacvar/error.hpp"
#include "lacvar/numeric.hpp"

namespace lacvar {

namespace {

double phi(double n, double t) { return (t > 0.0 && t < n) ? 1.0 / n : 0.0; }

double pow_abs(double v, double s) {
  const double a = std::abs(v);
  return s == 1.0 ? a : (s == 2.0 ? a * a : std::pow(a, s));
}

double root(double sum, double s) {
  return s == 1.0 ? sum : (s == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / s));
}

void check_r(double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::InvalidArgument, "r must satisfy 1 <= r < inf");
  }
}

void check_window_preconditions(int i, int j, double y, const LacunarySeq& seq, int K) {
  const int g = lacunary_gamma(seq.beta());
  if (j < 0 || i < j + g) {
    throw Error(ErrorCode::PreconditionViolated,
                "need i >= j + gamma (gamma = " + std::to_string(g) + ")", i);
  }
  if (i + 1 > K || K > seq.max_index()) {
    throw Error(ErrorCode::PreconditionViolated, "need i + 1 <= K <= sequence length - 1", i);
  }
  if (!(y > 0.0) || y > seq[static_cast<std::size_t>(j)]) {
    throw Error(ErrorCode::PreconditionViolated, "need 0 < y <= n_j", j, y);
  }
}

}  // namespace

void KernelSpec::validate() const {
  if (!(s >= 1.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::InvalidArgument, "s must satisfy 1 <= s < inf");
  }
  if (K < 1 || K > seq.max_index()) {
    throw Error(ErrorCode::InvalidArgument, "truncation index outside the sequence");
  }
}

double kernel_norm(double x, const KernelSpec& spec) {
  CompensatedSum sum;
  double prev = phi(spec.seq[0], x);
  for (int k = 1; k <= spec.K; ++k) {
    const double cur = phi(spec.seq[static_cast<std::size_t>(k)], x);
    sum.add(pow_abs(cur - prev, spec.s));
    prev = cur;
  }
  return root(sum.value(), spec.s);
}

double kernel_difference_norm(double x, double y, const KernelSpec& spec) {
  CompensatedSum sum;
  const double xy = x - y;
  double prev_shift = phi(spec.seq[0], xy);
  double prev = phi(spec.seq[0], x);
  for (int k = 1; k <= spec.K; ++k) {
    const double n = spec.seq[static_cast<std::size_t>(k)];
    const double cur_shift = phi(n, xy);
    const double cur = phi(n, x);
    sum.add(pow_abs((cur_shift - prev_shift) - (cur - prev), spec.s));
    prev_shift = cur_shift;
    prev = cur;
  }
  return root(sum.value(), spec.s);
}

double kernel_difference_integral(double a, double b, double y, const KernelSpec& spec,
                                  double r) {
  check_r(r);
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a, b};
  auto add = [&](double t) {
    if (t > a && t < b) cuts.push_back(t);
  };
  add(0.0);
  add(y);
  for (int k = 0; k <= spec.K; ++k) {
    const double n = spec.seq[static_cast<std::size_t>(k)];
    add(n);
    add(n + y);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  CompensatedSum total;
  for (std::size_t m = 0; m + 1 < cuts.size(); ++m) {
    const double len = cuts[m + 1] - cuts[m];
    const double v = kernel_difference_norm(cuts[m] + 0.5 * len, y, spec);
    if (v != 0.0) total.add(pow_abs(v, r) * len);
  }
  return total.value();
}

ShellReport shell_integrals(double y, const KernelSpec& spec, double r, int l_min, int l_max) {
  spec.validate();
  check_r(r);
  if (!(y > 0.0)) throw Error(ErrorCode::InvalidArgument, "y must be positive", std::nullopt, y);
  if (l_min < 0 || l_max < l_min) throw Error(ErrorCode::InvalidArgument, "bad shell range");
  ShellReport rep;
  rep.y = y;
  rep.r = r;
  rep.l_min = l_min;
  CompensatedSum total;
  for (int l = l_min; l <= l_max; ++l) {
    const double lo = std::ldexp(y, l);
    const double hi = std::ldexp(y, l + 1);
    const double integral = kernel_difference_integral(lo, hi, y, spec, r);
    const double measure = 2.0 * (hi - lo);
    const double c = std::pow(integral, 1.0 / r) * std::pow(measure, 1.0 - 1.0 / r);
    rep.integrals.push_back(integral);
    rep.measures.push_back(measure);
    rep.c.push_back(c);
    total.add(c);
  }
  rep.total = total.value();
  CompensatedSum tail;
  const std::size_t first_tail =
      rep.c.size() > static_cast<std::size_t>(rep.tail_count) ? rep.c.size() - rep.tail_count : 0;
  for (std::size_t m = first_tail; m < rep.c.size(); ++m) tail.add(rep.c[m]);
  rep.tail_fraction = rep.total > 0.0 ? tail.value() / rep.total : 0.0;
  return rep;
}

WindowBound window_bound_check(int i, int j, double y, const KernelSpec& spec, double r) {
  spec.validate();
  check_r(r);
  check_window_preconditions(i, j, y, spec.seq, spec.K);
  const double beta = spec.seq.beta();
  const double ni = spec.seq[static_cast<std::size_t>(i)];
  const double ni1 = spec.seq[static_cast<std::size_t>(i + 1)];
  const double decay = std::pow(beta, -static_cast<double>(i - j) / r);
  WindowBound out;
  out.i = i;
  out.j = j;
  out.y = y;
  out.r = r;
  out.lhs = std::pow(kernel_difference_integral(ni, ni1, y, spec, r), 1.0 / r);
  out.constant = 2.0 * beta * beta * beta / (beta - 1.0) * decay;
  out.reference_constant = 2.0 * (beta * beta + 1.0 / (1.0 - beta * beta)) * decay;
  out.rhs = out.constant * std::pow(ni, 1.0 / r - 1.0);
  out.closed_form = std::pow(2.0, 1.0 / spec.s) * std::pow(y, 1.0 / r) / ni;
  out.normalized = out.lhs * std::pow(ni, 1.0 - 1.0 / r);
  out.pass = out.lhs <= out.rhs;
  return out;
}

IndicatorCase indicator_identity(int i, int j, double y, double x, const LacunarySeq& seq,
                                 int K) {
  check_window_preconditions(i, j, y, seq, K);
  const double ni = seq[static_cast<std::size_t>(i)];
  if (!(x > ni && x < seq[static_cast<std::size_t>(i + 1)])) {
    throw Error(ErrorCode::PreconditionViolated, "need n_i < x < n_{i+1}", i, x);
  }
  const int window = (x > ni && x < y + ni) ? 1 : 0;
  for (int k = 0; k <= K; ++k) {
    const double n = seq[static_cast<std::size_t>(k)];
    const int shifted = (x > y && x < y + n) ? 1 : 0;
    const int plain = (x > 0.0 && x < n) ? 1 : 0;
    const int expected = k == i ? window : 0;
    if (shifted - plain != expected) {
      throw Error(ErrorCode::IdentityViolated,
                  "indicator difference at k = " + std::to_string(k) + " is " +
                      std::to_string(shifted - plain) + ", expected " + std::to_string(expected),
                  k, x);
    }
  }
  return window ? IndicatorCase::EqualsWindow : IndicatorCase::Zero;
}

double hormander_integral(double y, const KernelSpec& spec) {
  spec.validate();
  if (!(y > 0.0)) throw Error(ErrorCode::InvalidArgument, "y must be positive", std::nullopt, y);
  const double end = spec.seq[static_cast<std::size_t>(spec.K)] + y;
  return kernel_difference_integral(2.0 * y, end, y, spec, 1.0);
}

double log_slope(const std::vector<double>& positions, const std::vector<double>& values) {
  if (positions.size() != values.size() || positions.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "slope fit needs two or more matching points");
  }
  const double n = static_cast<double>(positions.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t m = 0; m < positions.size(); ++m) {
    if (!(values[m] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "slope fit needs positive values",
                  static_cast<std::int64_t>(m), values[m]);
    }
    mx += positions[m];
    my += std::log(values[m]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t m = 0; m < positions.size(); ++m) {
    sxy += (positions[m] - mx) * (std::log(values[m]) - my);
    sxx += (positions[m] - mx) * (positions[m] - mx);
  }
  return sxy / sxx;
}

}  // namespace lacvar
