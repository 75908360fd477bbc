#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lacvar {

class Weight;
struct WeightLaw;

struct GridGeometry {
  double x0 = 0.0;
  double h = 1.0;
  std::size_t n = 1;

  double left() const noexcept { return x0; }
  double right() const noexcept { return x0 + static_cast<double>(n) * h; }
  double cell_left(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * h; }
  double cell_mid(std::size_t i) const noexcept {
    return x0 + (static_cast<double>(i) + 0.5) * h;
  }
  bool operator==(const GridGeometry&) const = default;
};

/// Piecewise-constant function: values[i] on [x0 + i h, x0 + (i+1) h),
/// zero outside [x0, x0 + N h).
class GridFunction {
 public:
  GridFunction(double x0, double h, std::vector<double> values);
  GridFunction(const GridGeometry& g, std::vector<double> values)
      : GridFunction(g.x0, g.h, std::move(values)) {}

  double x0() const noexcept { return x0_; }
  double h() const noexcept { return h_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  GridGeometry geometry() const noexcept { return {x0_, h_, values_.size()}; }
  double left() const noexcept { return x0_; }
  double right() const noexcept { return x0_ + static_cast<double>(values_.size()) * h_; }

  /// Value at x; zero outside the domain.
  double at(double x) const noexcept;
  /// Exact integral h * sum(v), compensated.
  double mass() const noexcept;
  double l1() const noexcept;
  double linf() const noexcept;

  GridFunction scaled(double c) const;

 private:
  double x0_;
  double h_;
  std::vector<double> values_;
};

/// Exact antiderivative S(x) = int_{-inf}^x f of a piecewise-constant f,
/// stored as compensated prefix sums.
class PrefixIntegral {
 public:
  explicit PrefixIntegral(const GridFunction& f);

  double operator()(double x) const noexcept;
  /// int_a^b f, exact up to rounding of the prefix differences.
  double integral(double a, double b) const noexcept;

 private:
  double prefix_at(std::size_t i) const noexcept { return hi_[i] + lo_[i]; }

  GridGeometry geom_;
  std::span<const double> values_;
  std::vector<double> hi_;
  std::vector<double> lo_;
};

struct Interval {
  double left = 0.0;
  double right = 1.0;
  double length() const noexcept { return right - left; }
};

struct IntervalFamily {
  std::vector<Interval> intervals;
};

struct DyadicOptions {
  /// Lattice anchor: intervals are [origin + m L, origin + (m+1) L).
  double origin = 0.0;
  /// Smallest length; defaults to the grid step.
  std::optional<double> min_length;
  /// Largest length; defaults to the domain length.
  std::optional<double> max_length;
  /// Inside: intervals contained in the domain. Margin: intervals that meet
  /// the domain and lie within one domain length of it.
  enum class Clip { Inside, Margin } clip = Clip::Margin;
  /// Also add the copy shifted by half a length.
  bool half_shifted = false;
};

IntervalFamily dyadic_family(const GridGeometry& g, const DyadicOptions& opts = {});

/// (h sum |v_i|^p w_i)^{1/p}; w_i = 1 without a weight. GridMismatch if the
/// weight lives on another grid.
double lp_norm(const GridFunction& f, double p, const Weight* w = nullptr);
/// Same with exact weight mass per cell.
double lp_norm(const GridFunction& f, double p, const WeightLaw& law);

/// h sum_{v_i > lambda} w_i.
double superlevel_measure(const GridFunction& f, double lambda, const Weight* w = nullptr);

/// sup_lambda lambda * |{f > lambda}|, exact over the distinct values.
double weak_type_sup(const GridFunction& f, const Weight* w = nullptr);

double mean_oscillation(const GridFunction& f, const PrefixIntegral& prefix, Interval I);
double bmo_norm(const GridFunction& f, const IntervalFamily& family);

/// Piecewise-constant function on non-uniform cells [edges[i], edges[i+1]),
/// zero outside. Used for variation outputs, whose interesting part is
/// sparse on a long range.
struct Profile {
  std::vector<double> edges;
  std::vector<double> values;

  std::size_t cell_count() const noexcept { return values.size(); }
  double width(std::size_t i) const noexcept { return edges[i + 1] - edges[i]; }
  double left() const;
  double right() const;
  /// Cell midpoints, in order.
  std::vector<double> sample_points() const;
  double max_value() const noexcept;
};

double lp_norm(const Profile& f, double p);
double lp_norm(const Profile& f, double p, const WeightLaw& law);
double superlevel_measure(const Profile& f, double lambda);
double weak_type_sup(const Profile& f);
double weak_type_sup(const Profile& f, const WeightLaw& law);

/// H^1 atom: support in I, zero integral, sup norm at most 1/|I|.
struct Atom {
  GridFunction function;
  Interval interval;
};

/// Empty when the atom invariants hold, otherwise a description.
std::optional<std::string> atom_violation(const GridFunction& f, Interval I);

/// Random piecewise-constant atom on I with grid step h (I must hold an
/// integral number of cells, at least 2). `pieces` = 0 draws one value per
/// cell; otherwise `pieces` equal-width pieces are drawn.
Atom make_atom(Interval I, std::uint64_t seed, double h, std::size_t pieces = 0);

enum class FamilyKind { Indicator, Haar, Bump, RandomStep, Spike, Constant };

FamilyKind family_kind_from_string(const std::string& name);
const char* to_string(FamilyKind kind);

struct FamilyParams {
  /// Raster step.
  double h = 1.0 / 16.0;
  /// Left end of every support.
  double origin = 0.0;
  /// Support lengths run over scale_min * 2^j <= scale_max.
  double scale_min = 1.0;
  double scale_max = 8.0;
  /// Number of functions (random_step).
  std::size_t count = 1;
  std::uint64_t seed = 1;
  /// Maximum number of equal pieces per random_step function (power of 2).
  std::size_t max_pieces = 16;
  /// Spike widths.
  std::vector<double> epsilons;
  /// Height for the constant kind.
  double value = 1.0;
};

/// Deterministic test corpora:
///  indicator   chi_[o, o+L) for each scale L
///  haar        chi_[o, o+L/2) - chi_[o+L/2, o+L)
///  bump        hat function on [o, o+L) sampled at cell midpoints
///  random_step `count` functions; L drawn from the scales, 2^q equal pieces
///              (q uniform, 2^q <= max_pieces), values uniform in [-1, 1]
///  spike       (1/eps) chi_[o, o+eps) for each eps
///  constant    value * chi_[o, o+scale_max)
std::vector<GridFunction> make_family(FamilyKind kind, const FamilyParams& params);

/// "# x0=<v> h=<v> n=<v>" then "x,value", one row per cell left edge, %.17g.
void write_csv(const GridFunction& f, std::ostream& out);
GridFunction read_csv(std::istream& in);
/// Rows "left,right,value" after "# profile cells=<c>".
void write_profile_csv(const Profile& f, std::ostream& out);

}  // namespace lacvar
