#include "lacvar/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lacvar/error.hpp"

namespace lacvar {

namespace {

/// int_a^b x^alpha for 0 <= a < b, accurate for narrow far-away cells.
double power_mass_positive(double a, double b, double alpha) {
  const double e = alpha + 1.0;
  if (a == 0.0) return std::pow(b, e) / e;
  return std::pow(a, e) / e * std::expm1(e * std::log1p((b - a) / a));
}

double power_mass(double a, double b, double alpha) {
  if (b <= a) return 0.0;
  if (a >= 0.0) return power_mass_positive(a, b, alpha);
  if (b <= 0.0) return power_mass_positive(-b, -a, alpha);
  return power_mass_positive(0.0, -a, alpha) + power_mass_positive(0.0, b, alpha);
}

void check_inside(const GridGeometry& g, Interval I) {
  const double slack = 1e-12 * std::max(1.0, std::abs(g.right() - g.left()));
  if (I.left < g.left() - slack || I.right > g.right() + slack ||
      !(I.right > I.left)) {
    throw Error(ErrorCode::InvalidArgument, "interval outside the weight domain");
  }
}

}  // namespace

Weight::Weight(GridFunction samples, std::string label)
    : samples_(std::move(samples)), label_(std::move(label)) {
  const auto v = samples_.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw Error(ErrorCode::NonPositiveWeight, "weight sample is not positive",
                  static_cast<std::int64_t>(i), v[i]);
    }
  }
}

WeightLaw WeightLaw::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::NonPositiveWeight, "constant weight must be positive");
  }
  WeightLaw law;
  law.kind = Kind::Constant;
  law.c = c;
  return law;
}

WeightLaw WeightLaw::power(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "power weight needs alpha > -1");
  }
  WeightLaw law;
  law.kind = Kind::Power;
  law.alpha = alpha;
  return law;
}

WeightLaw WeightLaw::tabulated(GridFunction table) {
  Weight check(table, "tabulated");
  WeightLaw law;
  law.kind = Kind::Tabulated;
  law.table = std::make_shared<const GridFunction>(std::move(table));
  law.table_prefix = std::make_shared<const PrefixIntegral>(*law.table);
  return law;
}

double WeightLaw::at(double x) const {
  switch (kind) {
    case Kind::Constant: return c;
    case Kind::Power: return std::pow(std::abs(x), alpha);
    case Kind::Tabulated: return table->at(x);
  }
  return 0.0;
}

double WeightLaw::mass(double a, double b) const {
  switch (kind) {
    case Kind::Constant: return c * (b - a);
    case Kind::Power: return power_mass(a, b, alpha);
    case Kind::Tabulated: {
      check_inside(table->geometry(), {a, b});
      return table_prefix->integral(a, b);
    }
  }
  return 0.0;
}

Weight WeightLaw::sample(const GridGeometry& g) const {
  std::vector<double> v(g.n);
  for (std::size_t i = 0; i < g.n; ++i) v[i] = at(g.cell_mid(i));
  return Weight(GridFunction(g, std::move(v)), label());
}

WeightLaw WeightLaw::raised(double e) const {
  switch (kind) {
    case Kind::Constant: return constant(std::pow(c, e));
    case Kind::Power: return power(alpha * e);
    case Kind::Tabulated: {
      std::vector<double> v(table->values().begin(), table->values().end());
      for (double& x : v) x = std::pow(x, e);
      return tabulated(GridFunction(table->x0(), table->h(), std::move(v)));
    }
  }
  return *this;
}

std::string WeightLaw::label() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Constant: os << "constant:c=" << c; break;
    case Kind::Power: os << "power:alpha=" << alpha; break;
    case Kind::Tabulated: os << "tabulated:n=" << table->size(); break;
  }
  return os.str();
}

WeightLaw weight_law_from_literal(std::string_view literal) {
  const std::string text(literal);
  auto number_after = [&](std::size_t prefix) {
    std::size_t used = 0;
    const std::string rest = text.substr(prefix);
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) {
      throw Error(ErrorCode::InvalidArgument, "bad weight literal '" + text + "'");
    }
    return v;
  };
  if (text.rfind("constant:", 0) == 0) return WeightLaw::constant(number_after(9));
  if (text.rfind("power:", 0) == 0) return WeightLaw::power(number_after(6));
  std::ifstream in(text);
  if (!in) throw Error(ErrorCode::Io, "cannot open weight file '" + text + "'");
  return WeightLaw::tabulated(read_csv(in));
}

Weight power_weight(double alpha, const GridGeometry& g) {
  return WeightLaw::power(alpha).sample(g);
}

double ap_constant(const Weight& w, double p, const IntervalFamily& family) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::InvalidArgument, "A_p needs 1 < p < inf");
  }
  if (family.intervals.empty()) throw Error(ErrorCode::EmptyFamily, "no intervals");
  const auto& ws = w.samples();
  const double dual = -1.0 / (p - 1.0);
  std::vector<double> inv(ws.values().begin(), ws.values().end());
  for (double& v : inv) v = std::pow(v, dual);
  const GridFunction winv(ws.x0(), ws.h(), std::move(inv));
  const PrefixIntegral pw(ws);
  const PrefixIntegral pinv(winv);
  double best = 0.0;
  for (const Interval& I : family.intervals) {
    check_inside(ws.geometry(), I);
    const double len = I.length();
    const double avg_w = pw.integral(I.left, I.right) / len;
    const double avg_inv = pinv.integral(I.left, I.right) / len;
    best = std::max(best, avg_w * std::pow(avg_inv, p - 1.0));
  }
  return best;
}

double a1_constant(const Weight& w, const IntervalFamily& family) {
  if (family.intervals.empty()) throw Error(ErrorCode::EmptyFamily, "no intervals");
  const auto& ws = w.samples();
  const auto v = ws.values();
  const PrefixIntegral pw(ws);
  double best = 0.0;
  for (const Interval& I : family.intervals) {
    check_inside(ws.geometry(), I);
    const double t0 = (I.left - ws.x0()) / ws.h();
    const double t1 = (I.right - ws.x0()) / ws.h();
    auto i0 = static_cast<std::ptrdiff_t>(std::floor(t0));
    auto i1 = static_cast<std::ptrdiff_t>(std::ceil(t1));
    i0 = std::clamp<std::ptrdiff_t>(i0, 0, static_cast<std::ptrdiff_t>(v.size()) - 1);
    i1 = std::clamp<std::ptrdiff_t>(i1, i0 + 1, static_cast<std::ptrdiff_t>(v.size()));
    double lo = std::numeric_limits<double>::infinity();
    for (auto i = i0; i < i1; ++i) {
      const double cl = ws.x0() + static_cast<double>(i) * ws.h();
      const double overlap = std::min(cl + ws.h(), I.right) - std::max(cl, I.left);
      if (overlap > 0.0) lo = std::min(lo, v[static_cast<std::size_t>(i)]);
    }
    best = std::max(best, pw.integral(I.left, I.right) / I.length() / lo);
  }
  return best;
}

IntervalFamily weight_family(const GridGeometry& g) {
  DyadicOptions opts;
  opts.origin = 0.0;
  opts.clip = DyadicOptions::Clip::Inside;
  opts.half_shifted = true;
  return dyadic_family(g, opts);
}

bool ApRefinement::monotone_increasing() const {
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    if (estimates[i] < estimates[i - 1]) return false;
  }
  return true;
}

double ApRefinement::growth() const {
  if (estimates.empty() || estimates.front() == 0.0) return 0.0;
  return estimates.back() / estimates.front();
}

double ApRefinement::last_change() const {
  if (estimates.size() < 2) return 0.0;
  const double prev = estimates[estimates.size() - 2];
  return std::abs(estimates.back() - prev) / prev;
}

namespace {

template <class Estimate>
ApRefinement refine_levels(Interval domain, double h0, int levels, Estimate&& estimate) {
  if (levels < 1 || !(h0 > 0.0) || !(domain.right > domain.left)) {
    throw Error(ErrorCode::InvalidArgument, "bad refinement parameters");
  }
  ApRefinement out;
  for (int level = 0; level < levels; ++level) {
    const double h = h0 / std::ldexp(1.0, level);
    const auto n = static_cast<std::size_t>(std::llround(domain.length() / h));
    const GridGeometry g{domain.left, domain.length() / static_cast<double>(n), n};
    out.steps.push_back(g.h);
    out.estimates.push_back(estimate(g));
  }
  return out;
}

}  // namespace

ApRefinement ap_refinement(const WeightLaw& law, double p, Interval domain, double h0,
                           int levels) {
  return refine_levels(domain, h0, levels, [&](const GridGeometry& g) {
    return ap_constant(law.sample(g), p, weight_family(g));
  });
}

ApRefinement a1_refinement(const WeightLaw& law, Interval domain, double h0, int levels) {
  return refine_levels(domain, h0, levels, [&](const GridGeometry& g) {
    return a1_constant(law.sample(g), weight_family(g));
  });
}

}  // namespace lacvar
