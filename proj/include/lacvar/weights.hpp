#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lacvar/gridfn.hpp"

namespace lacvar {

/// Positive weight sampled on a working grid.
class Weight {
 public:
  Weight(GridFunction samples, std::string label);

  const GridFunction& samples() const noexcept { return samples_; }
  const std::string& label() const noexcept { return label_; }
  GridGeometry geometry() const noexcept { return samples_.geometry(); }

 private:
  GridFunction samples_;
  std::string label_;
};

/// Analytic description of a weight, sampled on demand. `mass` integrates
/// exactly (used on variation profiles whose cells can be long).
struct WeightLaw {
  enum class Kind { Constant, Power, Tabulated };

  Kind kind = Kind::Constant;
  double c = 1.0;
  double alpha = 0.0;
  std::shared_ptr<const GridFunction> table;
  std::shared_ptr<const PrefixIntegral> table_prefix;

  static WeightLaw constant(double c);
  static WeightLaw power(double alpha);
  static WeightLaw tabulated(GridFunction table);

  double at(double x) const;
  /// int_a^b w.
  double mass(double a, double b) const;
  /// Midpoint samples on g.
  Weight sample(const GridGeometry& g) const;
  /// The same law raised to a power (w^e). Tabulated laws are raised pointwise.
  WeightLaw raised(double e) const;
  std::string label() const;
};

/// "constant:<c>", "power:<alpha>", or a CSV path in the function format.
WeightLaw weight_law_from_literal(std::string_view literal);

/// w(x) = |x|^alpha at cell midpoints.
Weight power_weight(double alpha, const GridGeometry& g);

/// max over I of (avg_I w) (avg_I w^{-1/(p-1)})^{p-1}.
double ap_constant(const Weight& w, double p, const IntervalFamily& family);

/// max over I of (avg_I w) / (min over cells meeting I of w).
double a1_constant(const Weight& w, const IntervalFamily& family);

/// A_p estimates on successively halved grids over `domain`, each with the
/// dyadic family (anchored at 0, inside the domain) plus its half-shifted copy.
struct ApRefinement {
  std::vector<double> steps;
  std::vector<double> estimates;

  /// estimates[i+1] >= estimates[i] for all i.
  bool monotone_increasing() const;
  double growth() const;
  /// |last - previous| / previous.
  double last_change() const;
};

ApRefinement ap_refinement(const WeightLaw& law, double p, Interval domain,
                           double h0, int levels);
ApRefinement a1_refinement(const WeightLaw& law, Interval domain, double h0, int levels);

IntervalFamily weight_family(const GridGeometry& g);

}  // namespace lacvar
