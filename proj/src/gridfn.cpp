#include "lacvar/gridfn.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "lacvar/error.hpp"
#include "lacvar/numeric.hpp"
#include "lacvar/weights.hpp"

namespace lacvar {

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::InvalidArgument, "L^p exponent must satisfy 1 <= p < inf");
  }
}

double pow_abs(double v, double p) {
  const double a = std::abs(v);
  return p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p));
}

/// Number of grid cells in a length, requiring an (almost) integral count.
std::size_t cells_in(double length, double h, const char* what) {
  const double t = length / h;
  const double n = std::round(t);
  if (!(n >= 1.0) || std::abs(t - n) > 1e-9 * std::max(1.0, n)) {
    throw Error(ErrorCode::BadParams,
                std::string(what) + " is not a whole number of grid cells");
  }
  return static_cast<std::size_t>(n);
}

GridFunction step_function(double origin, double h, std::size_t cells,
                           const std::vector<double>& piece_values) {
  const std::size_t pieces = piece_values.size();
  if (cells % pieces != 0) {
    throw Error(ErrorCode::BadParams, "pieces do not align with the grid");
  }
  const std::size_t per = cells / pieces;
  std::vector<double> v(cells);
  for (std::size_t i = 0; i < cells; ++i) v[i] = piece_values[i / per];
  return GridFunction(origin, h, std::move(v));
}

struct WeightedSample {
  double value;
  double mass;
};

double weak_sup_of(std::vector<WeightedSample> samples) {
  std::sort(samples.begin(), samples.end(),
            [](const WeightedSample& a, const WeightedSample& b) { return a.value > b.value; });
  double best = 0.0;
  CompensatedSum cum;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    cum.add(samples[i].mass);
    const bool group_end = i + 1 == samples.size() || samples[i + 1].value < samples[i].value;
    if (group_end) best = std::max(best, samples[i].value * cum.value());
  }
  return best;
}

}  // namespace

GridFunction::GridFunction(double x0, double h, std::vector<double> values)
    : x0_(x0), h_(h), values_(std::move(values)) {
  if (!(h_ > 0.0) || !std::isfinite(h_) || !std::isfinite(x0_)) {
    throw Error(ErrorCode::InvalidArgument, "grid needs finite x0 and h > 0");
  }
  if (values_.empty()) throw Error(ErrorCode::InvalidArgument, "grid function has no cells");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::InvalidArgument, "non-finite grid value",
                  static_cast<std::int64_t>(i));
    }
  }
}

double GridFunction::at(double x) const noexcept {
  const double t = (x - x0_) / h_;
  if (!(t >= 0.0) || t >= static_cast<double>(values_.size())) return 0.0;
  return values_[static_cast<std::size_t>(t)];
}

double GridFunction::mass() const noexcept {
  CompensatedSum s;
  for (double v : values_) s.add(v);
  return h_ * s.value();
}

double GridFunction::l1() const noexcept {
  CompensatedSum s;
  for (double v : values_) s.add(std::abs(v));
  return h_ * s.value();
}

double GridFunction::linf() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return GridFunction(x0_, h_, std::move(v));
}

PrefixIntegral::PrefixIntegral(const GridFunction& f)
    : geom_(f.geometry()), values_(f.values()), hi_(f.size() + 1), lo_(f.size() + 1) {
  CompensatedSum s;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    s.add(values_[i]);
    hi_[i + 1] = s.high();
    lo_[i + 1] = s.low();
  }
}

namespace {

struct CellPosition {
  std::size_t index;
  double frac;
};

CellPosition locate(const GridGeometry& g, double x) {
  const double t = (x - g.x0) / g.h;
  if (!(t > 0.0)) return {0, 0.0};
  const auto n = static_cast<double>(g.n);
  if (t >= n) return {g.n, 0.0};
  const double i = std::floor(t);
  return {static_cast<std::size_t>(i), t - i};
}

}  // namespace

double PrefixIntegral::operator()(double x) const noexcept {
  const auto pos = locate(geom_, x);
  double units = prefix_at(pos.index);
  if (pos.index < values_.size()) units += pos.frac * values_[pos.index];
  return geom_.h * units;
}

double PrefixIntegral::integral(double a, double b) const noexcept {
  if (b < a) return -integral(b, a);
  const auto pa = locate(geom_, a);
  const auto pb = locate(geom_, b);
  const std::size_t n = values_.size();
  if (pa.index == pb.index) {
    if (pa.index >= n) return 0.0;
    return geom_.h * (pb.frac - pa.frac) * values_[pa.index];
  }
  double units = (hi_[pb.index] - hi_[pa.index]) + (lo_[pb.index] - lo_[pa.index]);
  if (pb.index < n) units += pb.frac * values_[pb.index];
  if (pa.index < n) units -= pa.frac * values_[pa.index];
  return geom_.h * units;
}

IntervalFamily dyadic_family(const GridGeometry& g, const DyadicOptions& opts) {
  const double domain = g.right() - g.left();
  const double min_len = opts.min_length.value_or(g.h);
  const double max_len = opts.max_length.value_or(domain);
  if (!(min_len > 0.0) || !(max_len >= min_len)) {
    throw Error(ErrorCode::BadParams, "dyadic family needs 0 < min_length <= max_length");
  }
  constexpr double kEps = 1e-9;
  constexpr std::size_t kMaxIntervals = 50'000'000;
  IntervalFamily fam;
  const bool inside = opts.clip == DyadicOptions::Clip::Inside;
  const double lo = inside ? g.left() : g.left() - domain;
  const double hi = inside ? g.right() : g.right() + domain;
  for (double len = min_len; len <= max_len * (1.0 + kEps); len *= 2.0) {
    for (int shifted = 0; shifted <= (opts.half_shifted ? 1 : 0); ++shifted) {
      const double origin = opts.origin + (shifted ? 0.5 * len : 0.0);
      const auto m0 = static_cast<std::int64_t>(std::ceil((lo - origin) / len - kEps));
      const auto m1 = static_cast<std::int64_t>(std::floor((hi - origin) / len + kEps)) - 1;
      for (auto m = m0; m <= m1; ++m) {
        const Interval I{origin + static_cast<double>(m) * len,
                         origin + static_cast<double>(m + 1) * len};
        if (I.right <= g.left() || I.left >= g.right()) continue;
        fam.intervals.push_back(I);
      }
      if (fam.intervals.size() > kMaxIntervals) {
        throw Error(ErrorCode::BadParams, "dyadic family too large");
      }
    }
  }
  return fam;
}

double lp_norm(const GridFunction& f, double p, const Weight* w) {
  check_exponent(p);
  const auto v = f.values();
  CompensatedSum s;
  if (w == nullptr) {
    for (double x : v) s.add(pow_abs(x, p));
  } else {
    if (!(w->geometry() == f.geometry())) {
      throw Error(ErrorCode::GridMismatch, "weight is sampled on a different grid");
    }
    const auto wv = w->samples().values();
    for (std::size_t i = 0; i < v.size(); ++i) s.add(pow_abs(v[i], p) * wv[i]);
  }
  return std::pow(f.h() * s.value(), 1.0 / p);
}

double lp_norm(const GridFunction& f, double p, const WeightLaw& law) {
  check_exponent(p);
  const auto g = f.geometry();
  CompensatedSum s;
  for (std::size_t i = 0; i < g.n; ++i) {
    s.add(pow_abs(f[i], p) * law.mass(g.cell_left(i), g.cell_left(i) + g.h));
  }
  return std::pow(s.value(), 1.0 / p);
}

double superlevel_measure(const GridFunction& f, double lambda, const Weight* w) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (w != nullptr && !(w->geometry() == f.geometry())) {
    throw Error(ErrorCode::GridMismatch, "weight is sampled on a different grid");
  }
  const auto v = f.values();
  CompensatedSum s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > lambda) s.add(w == nullptr ? 1.0 : w->samples()[i]);
  }
  return f.h() * s.value();
}

double weak_type_sup(const GridFunction& f, const Weight* w) {
  if (w != nullptr && !(w->geometry() == f.geometry())) {
    throw Error(ErrorCode::GridMismatch, "weight is sampled on a different grid");
  }
  std::vector<WeightedSample> samples;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > 0.0) samples.push_back({f[i], f.h() * (w ? w->samples()[i] : 1.0)});
  }
  return weak_sup_of(std::move(samples));
}

double mean_oscillation(const GridFunction& f, const PrefixIntegral& prefix, Interval I) {
  const double len = I.length();
  const double mean = prefix.integral(I.left, I.right) / len;
  const auto g = f.geometry();
  const double covered =
      std::max(0.0, std::min(I.right, g.right()) - std::max(I.left, g.left()));
  CompensatedSum s;
  s.add((len - covered) * std::abs(mean));
  if (covered > 0.0) {
    const auto i0 = static_cast<std::size_t>(
        std::max(0.0, std::floor((std::max(I.left, g.left()) - g.x0) / g.h)));
    const auto i1 = std::min(
        g.n, static_cast<std::size_t>(std::ceil((std::min(I.right, g.right()) - g.x0) / g.h)));
    for (std::size_t i = i0; i < i1; ++i) {
      const double cl = g.cell_left(i);
      const double overlap = std::min(cl + g.h, I.right) - std::max(cl, I.left);
      if (overlap > 0.0) s.add(overlap * std::abs(f[i] - mean));
    }
  }
  return s.value() / len;
}

double bmo_norm(const GridFunction& f, const IntervalFamily& family) {
  if (family.intervals.empty()) throw Error(ErrorCode::EmptyFamily, "no intervals");
  const PrefixIntegral prefix(f);
  double best = 0.0;
  for (const Interval& I : family.intervals) {
    if (!(I.right > I.left)) throw Error(ErrorCode::InvalidArgument, "empty interval");
    best = std::max(best, mean_oscillation(f, prefix, I));
  }
  return best;
}

double Profile::left() const {
  if (edges.empty()) throw Error(ErrorCode::InvalidArgument, "empty profile");
  return edges.front();
}

double Profile::right() const {
  if (edges.empty()) throw Error(ErrorCode::InvalidArgument, "empty profile");
  return edges.back();
}

std::vector<double> Profile::sample_points() const {
  std::vector<double> xs(values.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = edges[i] + 0.5 * width(i);
  return xs;
}

double Profile::max_value() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

double lp_norm(const Profile& f, double p) {
  check_exponent(p);
  CompensatedSum s;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    if (f.values[i] != 0.0) s.add(pow_abs(f.values[i], p) * f.width(i));
  }
  return std::pow(s.value(), 1.0 / p);
}

double lp_norm(const Profile& f, double p, const WeightLaw& law) {
  check_exponent(p);
  CompensatedSum s;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    if (f.values[i] == 0.0) continue;
    s.add(pow_abs(f.values[i], p) * law.mass(f.edges[i], f.edges[i + 1]));
  }
  return std::pow(s.value(), 1.0 / p);
}

double superlevel_measure(const Profile& f, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  CompensatedSum s;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    if (f.values[i] > lambda) s.add(f.width(i));
  }
  return s.value();
}

double weak_type_sup(const Profile& f) {
  std::vector<WeightedSample> samples;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    if (f.values[i] > 0.0) samples.push_back({f.values[i], f.width(i)});
  }
  return weak_sup_of(std::move(samples));
}

double weak_type_sup(const Profile& f, const WeightLaw& law) {
  std::vector<WeightedSample> samples;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    if (f.values[i] > 0.0) {
      samples.push_back({f.values[i], law.mass(f.edges[i], f.edges[i + 1])});
    }
  }
  return weak_sup_of(std::move(samples));
}

std::optional<std::string> atom_violation(const GridFunction& f, Interval I) {
  const double len = I.length();
  if (!(len > 0.0)) return "interval has no length";
  const double slack = 1e-12 * len;
  const auto g = f.geometry();
  for (std::size_t i = 0; i < g.n; ++i) {
    if (f[i] == 0.0) continue;
    if (g.cell_left(i) < I.left - slack || g.cell_left(i) + g.h > I.right + slack) {
      return "support leaves the interval at cell " + std::to_string(i);
    }
  }
  const double sup = f.linf();
  if (sup > (1.0 + 1e-12) / len) return "sup norm exceeds 1/|I|";
  if (std::abs(f.mass()) > 1e-14 * std::max(sup * len, 1e-300)) {
    return "integral is not zero";
  }
  return std::nullopt;
}

Atom make_atom(Interval I, std::uint64_t seed, double h, std::size_t pieces) {
  const double len = I.length();
  if (!(len > 0.0) || !(h > 0.0)) throw Error(ErrorCode::BadParams, "bad atom interval");
  const double t = len / h;
  if (t < 2.0 - 1e-9) {
    throw Error(ErrorCode::IntervalTooSmall, "atom interval needs at least two cells");
  }
  const std::size_t cells = cells_in(len, h, "atom interval");
  if (pieces == 0) pieces = cells;
  if (pieces < 2 || cells % pieces != 0) {
    throw Error(ErrorCode::BadParams, "atom pieces must be >= 2 and divide the cell count");
  }
  Rng rng(seed);
  std::vector<double> piece_values(pieces);
  for (double& v : piece_values) v = rng.uniform(-1.0, 1.0);
  for (int pass = 0; pass < 2; ++pass) {
    CompensatedSum s;
    for (double v : piece_values) s.add(v);
    const double mean = s.value() / static_cast<double>(pieces);
    for (double& v : piece_values) v -= mean;
  }
  double sup = 0.0;
  for (double v : piece_values) sup = std::max(sup, std::abs(v));
  if (!(sup > 0.0)) throw Error(ErrorCode::BadParams, "degenerate atom draw");
  for (double& v : piece_values) v /= sup * len;
  const double h_exact = len / static_cast<double>(cells);
  return Atom{step_function(I.left, h_exact, cells, piece_values), I};
}

FamilyKind family_kind_from_string(const std::string& name) {
  if (name == "indicator") return FamilyKind::Indicator;
  if (name == "haar") return FamilyKind::Haar;
  if (name == "bump") return FamilyKind::Bump;
  if (name == "random_step") return FamilyKind::RandomStep;
  if (name == "spike") return FamilyKind::Spike;
  if (name == "constant") return FamilyKind::Constant;
  throw Error(ErrorCode::BadParams, "unknown family kind '" + name + "'");
}

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Indicator: return "indicator";
    case FamilyKind::Haar: return "haar";
    case FamilyKind::Bump: return "bump";
    case FamilyKind::RandomStep: return "random_step";
    case FamilyKind::Spike: return "spike";
    case FamilyKind::Constant: return "constant";
  }
  return "unknown";
}

std::vector<GridFunction> make_family(FamilyKind kind, const FamilyParams& params) {
  const double h = params.h;
  if (!(h > 0.0) || !(params.scale_min > 0.0) || !(params.scale_max >= params.scale_min)) {
    throw Error(ErrorCode::BadParams, "family needs h > 0 and 0 < scale_min <= scale_max");
  }
  std::vector<double> scales;
  for (double L = params.scale_min; L <= params.scale_max * (1.0 + 1e-12); L *= 2.0) {
    scales.push_back(L);
  }
  std::vector<GridFunction> out;
  switch (kind) {
    case FamilyKind::Indicator:
      for (double L : scales) {
        out.push_back(step_function(params.origin, h, cells_in(L, h, "scale"), {1.0}));
      }
      break;
    case FamilyKind::Haar:
      for (double L : scales) {
        out.push_back(step_function(params.origin, h, cells_in(L, h, "scale"), {1.0, -1.0}));
      }
      break;
    case FamilyKind::Bump:
      for (double L : scales) {
        const std::size_t n = cells_in(L, h, "scale");
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
          v[i] = 1.0 - std::abs(2.0 * u - 1.0);
        }
        out.emplace_back(params.origin, h, std::move(v));
      }
      break;
    case FamilyKind::RandomStep: {
      if (params.count == 0) throw Error(ErrorCode::BadParams, "random_step needs count >= 1");
      int max_q = 0;
      while ((std::size_t{2} << max_q) <= params.max_pieces) ++max_q;
      Rng rng(params.seed);
      for (std::size_t c = 0; c < params.count; ++c) {
        const double L = scales[static_cast<std::size_t>(
            rng.integer(0, static_cast<std::int64_t>(scales.size()) - 1))];
        const std::size_t cells = cells_in(L, h, "scale");
        auto q = static_cast<int>(rng.integer(0, max_q));
        while (q > 0 && cells % (std::size_t{1} << q) != 0) --q;
        std::vector<double> pv(std::size_t{1} << q);
        for (double& v : pv) v = rng.uniform(-1.0, 1.0);
        out.push_back(step_function(params.origin, h, cells, pv));
      }
      break;
    }
    case FamilyKind::Spike:
      if (params.epsilons.empty()) throw Error(ErrorCode::BadParams, "spike needs epsilons");
      for (double eps : params.epsilons) {
        if (!(eps > 0.0)) throw Error(ErrorCode::BadParams, "spike width must be positive");
        out.push_back(step_function(params.origin, h, cells_in(eps, h, "spike width"),
                                    {1.0 / eps}));
      }
      break;
    case FamilyKind::Constant:
      out.push_back(step_function(params.origin, h, cells_in(params.scale_max, h, "scale"),
                                  {params.value}));
      break;
  }
  return out;
}

void write_csv(const GridFunction& f, std::ostream& out) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# x0=%.17g h=%.17g n=%zu\n", f.x0(), f.h(), f.size());
  out << buf << "x,value\n";
  const auto g = f.geometry();
  for (std::size_t i = 0; i < g.n; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.cell_left(i), f[i]);
    out << buf;
  }
}

GridFunction read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, "empty function file");
  double x0 = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  if (std::sscanf(line.c_str(), "# x0=%lf h=%lf n=%zu", &x0, &h, &n) != 3) {
    throw Error(ErrorCode::Io, "missing '# x0=<v> h=<v> n=<v>' metadata line");
  }
  if (!std::getline(in, line) || line.rfind("x,value", 0) != 0) {
    throw Error(ErrorCode::Io, "missing 'x,value' header");
  }
  std::vector<double> values;
  values.reserve(n);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double x = 0.0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &x, &v) != 2) {
      throw Error(ErrorCode::Io, "bad data row '" + line + "'");
    }
    const double expected = x0 + static_cast<double>(values.size()) * h;
    if (std::abs(x - expected) > 1e-9 * std::max(std::abs(expected), h)) {
      throw Error(ErrorCode::Io, "row x does not match the grid metadata",
                  static_cast<std::int64_t>(values.size()));
    }
    values.push_back(v);
  }
  if (values.size() != n) throw Error(ErrorCode::Io, "row count does not match n");
  return GridFunction(x0, h, std::move(values));
}

void write_profile_csv(const Profile& f, std::ostream& out) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# profile cells=%zu\n", f.cell_count());
  out << buf << "left,right,value\n";
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.edges[i], f.edges[i + 1],
                  f.values[i]);
    out << buf;
  }
}

}  // namespace lacvar
