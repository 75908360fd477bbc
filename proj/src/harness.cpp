#include "lacvar/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "lacvar/avgops.hpp"
#include "lacvar/error.hpp"
#include "lacvar/fourier.hpp"
#include "lacvar/gridfn.hpp"
#include "lacvar/kernel.hpp"
#include "lacvar/lacunary.hpp"
#include "lacvar/numeric.hpp"
#include "lacvar/parallel.hpp"
#include "lacvar/weights.hpp"

namespace lacvar {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::ScenarioInvalid, message);
}

// ---------------------------------------------------------------- defaults

ojson family_defaults(const char* kind, std::size_t count, double scale_min, double scale_max,
                      double h, double origin = 0.0) {
  ojson f;
  f["kind"] = kind;
  f["count"] = count;
  f["seed"] = nullptr;
  f["scale_min"] = scale_min;
  f["scale_max"] = scale_max;
  f["h"] = h;
  f["origin"] = origin;
  f["max_pieces"] = 16;
  f["epsilons"] = json::array();
  f["value"] = 1.0;
  return f;
}

ojson base_defaults(ScenarioKind kind, const char* seq) {
  ojson c;
  c["kind"] = to_string(kind);
  c["seed"] = 1;
  c["seq"] = seq;
  c["s"] = 2.0;
  c["K"] = nullptr;
  c["tail_tol"] = 1e-8;
  c["tail_floor"] = 0.0;
  c["waive_tail"] = false;
  c["refine"] = true;
  c["subdivide"] = 1;
  return c;
}

ojson defaults_for(ScenarioKind kind) {
  constexpr const char* kDyadicFromStep = "geometric:0.0625:2:40";
  switch (kind) {
    case ScenarioKind::StrongPP: {
      auto c = base_defaults(kind, kDyadicFromStep);
      c["p"] = 2.0;
      c["eval_region"] = "full";
      c["family"] = family_defaults("random_step", 20, 1.0, 8.0, 0.0625);
      c["thresholds"] = {{"stability", 0.10}};
      return c;
    }
    case ScenarioKind::Weak11: {
      auto c = base_defaults(kind, kDyadicFromStep);
      c["family"] = family_defaults("spike", 1, 1.0, 8.0, 0.0625);
      c["family"]["epsilons"] = {0.0625, 0.125, 0.25};
      c["thresholds"] = {{"stability", 0.10}, {"spread", 0.10}};
      return c;
    }
    case ScenarioKind::H1L1: {
      auto c = base_defaults(kind, "geometric:0.00048828125:2:48");
      c["atoms"] = {{"count", 200}, {"scale_min", 0.03125}, {"scale_max", 32.0},
                    {"cells", 64},  {"pieces", 16},        {"seed", nullptr}};
      c["thresholds"] = {{"stability", 0.15}, {"scale_variation", 0.15}};
      return c;
    }
    case ScenarioKind::LinfBmo: {
      auto c = base_defaults(kind, kDyadicFromStep);
      c["family"] = family_defaults("random_step", 10, 1.0, 8.0, 0.0625);
      c["pad_left"] = 1.0;
      c["pad_right"] = 3.0;
      c["thresholds"] = {{"stability", 0.15}};
      return c;
    }
    case ScenarioKind::L2Multiplier: {
      auto c = base_defaults(kind, "geometric:0.0625:2:17");
      c["waive_tail"] = true;
      c["refine"] = false;
      c["xi"] = "log:1e-6:1e6:8192";
      c["family"] = family_defaults("random_step", 100, 1024.0, 1024.0, 1.0 / 64.0);
      c["family"]["max_pieces"] = 1024;
      c["thresholds"] = {{"multiplier_slack", 0.05}};
      return c;
    }
    case ScenarioKind::WeightedPP: {
      auto c = base_defaults(kind, kDyadicFromStep);
      c["p"] = 2.0;
      c["r"] = 8.0;
      c["weight"] = "power:0.5";
      c["family"] = family_defaults("random_step", 10, 1.0, 8.0, 0.0625, -4.0);
      c["ap"] = {{"domain", {-10.0, 10.0}}, {"h0", 0.0625}, {"levels", 6},
                 {"expect_bounded", true}};
      c["thresholds"] = {{"stability", 0.15}, {"ap", 0.05}, {"growth", 10.0}};
      return c;
    }
    case ScenarioKind::WeightedWeak11: {
      auto c = base_defaults(kind, kDyadicFromStep);
      c["subdivide"] = 8;
      c["r"] = 8.0;
      c["weight"] = "power:-0.5";
      c["family"] = family_defaults("spike", 1, 1.0, 8.0, 0.0625, 0.5);
      c["family"]["epsilons"] = {0.0625, 0.125, 0.25};
      c["a1"] = {{"domain", {-10.0, 10.0}}, {"h0", 0.0625}, {"levels", 6}};
      c["thresholds"] = {{"stability", 0.10}, {"ap", 0.05}};
      return c;
    }
    case ScenarioKind::VectorValued: {
      auto c = base_defaults(kind, kDyadicFromStep);
      c["p"] = 2.0;
      c["rho"] = {1.5, 2.0, 3.0};
      c["weight"] = nullptr;
      c["family"] = family_defaults("random_step", 8, 1.0, 8.0, 0.0625);
      c["thresholds"] = {{"stability", 0.10}};
      return c;
    }
    case ScenarioKind::RefineDomination: {
      auto c = base_defaults(kind, kDyadicFromStep);
      c["refine"] = false;
      c["waive_tail"] = true;
      c["s_values"] = {1.0, 2.0};
      c["sequences"] = {{"count", 500},      {"beta_min", 1.1}, {"beta_max", 3.0},
                        {"length_min", 2},   {"length_max", 12}, {"gap_max", 1.5},
                        {"n0_min", 0.25},    {"n0_max", 1.0}};
      c["family"] = family_defaults("random_step", 20, 1.0, 8.0, 0.0625);
      c["thresholds"] = {{"slack", 1e-12}};
      return c;
    }
    case ScenarioKind::DrCondition: {
      auto c = base_defaults(kind, "geometric:1:2:31");
      c["refine"] = false;
      c.erase("subdivide");
      c["r"] = {1.0, 2.0};
      c["j"] = 0;
      c["i_min"] = 1;
      c["i_max"] = 8;
      c["y"] = nullptr;
      c["l_min"] = 1;
      c["l_max"] = 20;
      c["hormander"] = {{"y_min", 1.0}, {"y_max", 1024.0}, {"count", 11}};
      c["thresholds"] = {{"decay_slack", 0.2}, {"shell_tail", 0.01}, {"hormander_spread", 10.0}};
      return c;
    }
    case ScenarioKind::FourierBound: {
      auto c = base_defaults(kind, "geometric:1:2:41");
      c["refine"] = false;
      c.erase("subdivide");
      c["K_compare"] = 20;
      c["xi"] = "log:1e-6:1e6:8192";
      c["derivative"] = {{"count", 100000}, {"r_min", 1e-3}, {"r_max", 1e3}};
      c["thresholds"] = {{"stability_abs", 1e-6}, {"i2_bound", 16.0}, {"fd_agreement", 1e-6}};
      return c;
    }
    case ScenarioKind::IndicatorIdentity: {
      auto c = base_defaults(kind, "geometric:1:2:12");
      c["refine"] = false;
      c.erase("subdivide");
      c["i_min"] = 1;
      c["i_max"] = 8;
      c["y_samples"] = 16;
      c["x_samples"] = 64;
      c["thresholds"] = json::object();
      return c;
    }
  }
  invalid("unknown scenario kind");
}

void merge_into(ojson& base, const json& user, const std::string& path) {
  if (!user.is_object()) invalid(path + " must be a JSON object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string where = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) invalid("unknown key '" + where + "'");
    auto& slot = base[it.key()];
    const auto& value = it.value();
    if (slot.is_object() && !slot.empty()) {
      merge_into(slot, value, where);
    } else if (!slot.is_null() && slot.is_number() && !value.is_number() && !value.is_null()) {
      invalid("'" + where + "' must be a number");
    } else if (slot.is_boolean() && !value.is_boolean()) {
      invalid("'" + where + "' must be true or false");
    } else {
      slot = value;
    }
  }
}

// ---------------------------------------------------------------- readers

double num(const ojson& c, const char* key) {
  const auto& v = c.at(key);
  if (!v.is_number()) invalid(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t integer(const ojson& c, const char* key) {
  const double v = num(c, key);
  if (v != std::floor(v) || std::abs(v) > 1e15) {
    invalid(std::string("'") + key + "' must be an integer");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<double> numbers(const ojson& c, const char* key) {
  const auto& v = c.at(key);
  if (!v.is_array()) invalid(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) invalid(std::string("'") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

LacunarySeq seq_from(const ojson& v) {
  if (v.is_string()) return sequence_from_literal(v.get<std::string>());
  if (v.is_array()) {
    std::vector<double> scales;
    for (const auto& x : v) {
      if (!x.is_number()) invalid("seq array must hold numbers");
      scales.push_back(x.get<double>());
    }
    return sequence_from_scales(std::move(scales));
  }
  if (v.is_object() && v.contains("scales") && v.contains("beta")) {
    std::vector<double> scales;
    for (const auto& x : v.at("scales")) scales.push_back(x.get<double>());
    return validate_lacunary(std::move(scales), v.at("beta").get<double>());
  }
  invalid("seq must be a literal string, an array, or {scales, beta}");
}

VariationSpec spec_from(const ojson& c, const LacunarySeq& seq) {
  VariationSpec spec;
  spec.s = num(c, "s");
  spec.K = c.at("K").is_null() ? seq.max_index() : static_cast<int>(integer(c, "K"));
  spec.tail_tol = num(c, "tail_tol");
  spec.tail_floor = num(c, "tail_floor");
  spec.waive_tail = c.at("waive_tail").get<bool>();
  spec.validate(seq);
  return spec;
}

std::uint64_t seed_of(const ojson& c, const ojson& section) {
  if (section.contains("seed") && !section.at("seed").is_null()) {
    return static_cast<std::uint64_t>(integer(section, "seed"));
  }
  return static_cast<std::uint64_t>(integer(c, "seed"));
}

struct FamilySpec {
  FamilyKind kind = FamilyKind::RandomStep;
  FamilyParams params;
};

FamilySpec family_from(const ojson& c) {
  const auto& f = c.at("family");
  FamilySpec out;
  out.kind = family_kind_from_string(f.at("kind").get<std::string>());
  auto& p = out.params;
  p.h = num(f, "h");
  p.origin = num(f, "origin");
  p.scale_min = num(f, "scale_min");
  p.scale_max = num(f, "scale_max");
  p.count = static_cast<std::size_t>(integer(f, "count"));
  p.seed = seed_of(c, f);
  p.max_pieces = static_cast<std::size_t>(integer(f, "max_pieces"));
  p.epsilons = numbers(f, "epsilons");
  p.value = num(f, "value");
  return out;
}

std::vector<std::string> family_labels(const FamilySpec& fam, const std::vector<GridFunction>& fs) {
  std::vector<std::string> labels;
  char buf[96];
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fam.kind == FamilyKind::Spike) {
      std::snprintf(buf, sizeof buf, "spike eps=%.6g", fam.params.epsilons.at(i));
    } else {
      std::snprintf(buf, sizeof buf, "%s #%zu L=%.6g", to_string(fam.kind), i,
                    fs[i].right() - fs[i].left());
    }
    labels.emplace_back(buf);
  }
  return labels;
}

std::optional<WeightLaw> weight_from(const ojson& c) {
  const auto& w = c.at("weight");
  if (w.is_null()) return std::nullopt;
  if (!w.is_string()) invalid("weight must be a literal string");
  return weight_law_from_literal(w.get<std::string>());
}

Interval domain_from(const ojson& section) {
  const auto d = numbers(section, "domain");
  if (d.size() != 2 || !(d[1] > d[0])) invalid("domain must be [left, right] with left < right");
  return {d[0], d[1]};
}

/// Profile cells are at most h / subdivide wide.
double subdivision(const ojson& c) {
  const auto sub = integer(c, "subdivide");
  if (sub < 1) invalid("subdivide must be a positive integer");
  return static_cast<double>(sub);
}

double threshold(const ojson& c, const char* key) { return num(c.at("thresholds"), key); }

// ---------------------------------------------------------------- report helpers

double relative_change(double coarse, double fine) {
  if (coarse == 0.0 && fine == 0.0) return 0.0;
  if (coarse == 0.0) return kInf;
  return std::abs(fine - coarse) / std::abs(coarse);
}

double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 0.0 : kInf;
}

void add_check(VerificationReport& rep, std::string name, double value, double limit,
               const std::string& relation) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = limit;
  c.relation = relation;
  if (relation == "<=") {
    c.pass = value <= limit;
  } else if (relation == ">=") {
    c.pass = value >= limit;
  } else if (relation == "==") {
    c.pass = value == limit;
  } else {
    c.pass = std::isfinite(value);
  }
  rep.checks.push_back(std::move(c));
}

std::string case_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "case-%04zu", i);
  return buf;
}

struct Measure {
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<std::pair<std::string, double>> extra;
};

/// Evaluates every function (and its half-step twin when given) in parallel
/// and fills rep.cases in input order.
template <class Eval>
void measure_cases(VerificationReport& rep, const std::vector<GridFunction>& coarse,
                   const std::vector<GridFunction>* fine, const std::vector<std::string>& labels,
                   Eval&& eval) {
  rep.cases.assign(coarse.size(), CaseResult{});
  parallel_for(coarse.size(), [&](std::size_t i) {
    auto& c = rep.cases[i];
    c.id = case_id(i);
    c.label = labels.at(i);
    Measure m = eval(coarse[i]);
    c.lhs = m.lhs;
    c.rhs = m.rhs;
    c.ratio = safe_ratio(m.lhs, m.rhs);
    c.extra = std::move(m.extra);
    if (fine != nullptr) {
      const Measure mf = eval((*fine)[i]);
      c.lhs_fine = mf.lhs;
      c.rhs_fine = mf.rhs;
      c.ratio_fine = safe_ratio(mf.lhs, mf.rhs);
      c.change = relative_change(c.ratio, c.ratio_fine);
    }
  });
}

void summarize(VerificationReport& rep, bool refine) {
  rep.sup_ratio = 0.0;
  rep.sup_ratio_fine = refine ? 0.0 : kNaN;
  for (const auto& c : rep.cases) {
    rep.sup_ratio = std::max(rep.sup_ratio, c.ratio);
    if (refine) rep.sup_ratio_fine = std::max(rep.sup_ratio_fine, c.ratio_fine);
  }
  rep.refinement_change = refine ? relative_change(rep.sup_ratio, rep.sup_ratio_fine) : kNaN;
}

/// Finite sup ratio and, when refining, its h -> h/2 change.
void standard_checks(VerificationReport& rep, bool refine, double stability) {
  add_check(rep, "sup_ratio_finite", rep.sup_ratio, kNaN, "finite");
  if (refine) add_check(rep, "refinement_change", rep.refinement_change, stability, "<=");
}

FamilyParams halved(FamilyParams p) {
  p.h *= 0.5;
  return p;
}

// ---------------------------------------------------------------- scenarios

VerificationReport run_strong(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const double sub = subdivision(c);
  const double p = num(c, "p");
  if (!(p > 1.0)) invalid("strong_pp needs p > 1");
  const bool refine = c.at("refine").get<bool>();
  const std::string region = c.at("eval_region").get<std::string>();
  if (region != "full" && region != "interior") invalid("eval_region must be full or interior");
  const auto fam = family_from(c);
  const auto coarse = make_family(fam.kind, fam.params);
  std::vector<GridFunction> fine;
  if (refine) fine = make_family(fam.kind, halved(fam.params));

  const double reach = seq[static_cast<std::size_t>(spec.K)];
  measure_cases(rep, coarse, refine ? &fine : nullptr, family_labels(fam, coarse),
                [&](const GridFunction& f) {
                  Measure m;
                  m.rhs = lp_norm(f, p);
                  if (region == "full") {
                    m.lhs = lp_norm(variation_profile(f, seq, spec, f.h() / sub), p);
                    return m;
                  }
                  // Points whose every window lies inside the support.
                  std::vector<double> xs;
                  for (std::size_t i = 0; i < f.size(); ++i) {
                    const double x = f.geometry().cell_mid(i);
                    if (x - reach >= f.left()) xs.push_back(x);
                  }
                  const auto v = variation_at(f, seq, spec, xs);
                  double largest = 0.0;
                  CompensatedSum s;
                  for (double x : v) {
                    largest = std::max(largest, x);
                    s.add(std::pow(x, p) * f.h());
                  }
                  check_tail(f, seq, spec, largest);
                  m.lhs = std::pow(s.value(), 1.0 / p);
                  m.extra.emplace_back("interior_points", static_cast<double>(xs.size()));
                  return m;
                });
  summarize(rep, refine);
  standard_checks(rep, refine, threshold(c, "stability"));
  return rep;
}

VerificationReport run_weak(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const double sub = subdivision(c);
  const bool refine = c.at("refine").get<bool>();
  const auto fam = family_from(c);
  const auto coarse = make_family(fam.kind, fam.params);
  std::vector<GridFunction> fine;
  if (refine) fine = make_family(fam.kind, halved(fam.params));
  measure_cases(rep, coarse, refine ? &fine : nullptr, family_labels(fam, coarse),
                [&](const GridFunction& f) {
                  return Measure{weak_type_sup(variation_profile(f, seq, spec, f.h() / sub)), f.l1(), {}};
                });
  summarize(rep, refine);
  standard_checks(rep, refine, threshold(c, "stability"));
  if (fam.kind == FamilyKind::Spike && rep.cases.size() >= 2) {
    double lo = kInf;
    double hi = 0.0;
    for (const auto& cs : rep.cases) {
      lo = std::min(lo, cs.ratio);
      hi = std::max(hi, cs.ratio);
    }
    add_check(rep, "spike_width_spread", lo > 0.0 ? hi / lo - 1.0 : kInf,
              threshold(c, "spread"), "<=");
  }
  return rep;
}

VerificationReport run_h1(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const double sub = subdivision(c);
  const bool refine = c.at("refine").get<bool>();
  const auto& a = c.at("atoms");
  const auto count = static_cast<std::size_t>(integer(a, "count"));
  const double scale_min = num(a, "scale_min");
  const double scale_max = num(a, "scale_max");
  const auto cells = static_cast<double>(integer(a, "cells"));
  const auto pieces = static_cast<std::size_t>(integer(a, "pieces"));
  const std::uint64_t seed = seed_of(c, a);
  if (count == 0 || !(scale_min > 0.0) || !(scale_max >= scale_min)) {
    invalid("atoms need count >= 1 and 0 < scale_min <= scale_max");
  }
  std::vector<double> scales;
  for (double L = scale_min; L <= scale_max * (1.0 + 1e-12); L *= 2.0) scales.push_back(L);

  std::vector<GridFunction> coarse;
  std::vector<GridFunction> fine;
  std::vector<std::string> labels;
  std::vector<std::uint64_t> seeds;
  std::vector<double> lengths;
  char buf[96];
  for (std::size_t i = 0; i < count; ++i) {
    const double L = scales[i % scales.size()];
    const std::uint64_t s = seed + i / scales.size();
    const Interval I{0.0, L};
    auto atom = make_atom(I, s, L / cells, pieces);
    if (auto why = atom_violation(atom.function, I)) invalid("atom invariant failed: " + *why);
    coarse.push_back(std::move(atom.function));
    if (refine) fine.push_back(make_atom(I, s, 0.5 * L / cells, pieces).function);
    std::snprintf(buf, sizeof buf, "atom L=%.6g seed=%llu", L, static_cast<unsigned long long>(s));
    labels.emplace_back(buf);
    seeds.push_back(s);
    lengths.push_back(L);
  }
  measure_cases(rep, coarse, refine ? &fine : nullptr, labels, [&](const GridFunction& f) {
    return Measure{lp_norm(variation_profile(f, seq, spec, f.h() / sub), 1.0), 1.0, {}};
  });
  for (std::size_t i = 0; i < rep.cases.size(); ++i) {
    rep.cases[i].extra.emplace_back("scale", lengths[i]);
    rep.cases[i].extra.emplace_back("seed", static_cast<double>(seeds[i]));
  }
  summarize(rep, refine);
  standard_checks(rep, refine, threshold(c, "stability"));

  // The same random pattern dilated across scales: dyadic dilation maps the
  // sequence to itself, so the ratio should not depend on the scale.
  std::map<std::uint64_t, std::pair<double, double>> by_seed;
  std::map<std::uint64_t, int> seen;
  for (std::size_t i = 0; i < rep.cases.size(); ++i) {
    auto [it, inserted] = by_seed.try_emplace(seeds[i], rep.cases[i].ratio, rep.cases[i].ratio);
    if (!inserted) {
      it->second.first = std::min(it->second.first, rep.cases[i].ratio);
      it->second.second = std::max(it->second.second, rep.cases[i].ratio);
    }
    ++seen[seeds[i]];
  }
  double variation = 0.0;
  for (const auto& [s, range] : by_seed) {
    if (seen[s] < 2) continue;
    variation = std::max(variation, range.first > 0.0 ? range.second / range.first - 1.0 : kInf);
  }
  rep.constants.emplace_back("scale_variation", variation);
  add_check(rep, "scale_variation", variation, threshold(c, "scale_variation"), "<=");
  return rep;
}

VerificationReport run_bmo(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const double sub = subdivision(c);
  const bool refine = c.at("refine").get<bool>();
  const double pad_left = num(c, "pad_left");
  const double pad_right = num(c, "pad_right");
  if (!(pad_left >= 0.0) || !(pad_right >= 0.0)) invalid("pads must be non-negative");
  const auto fam = family_from(c);
  const auto coarse = make_family(fam.kind, fam.params);
  std::vector<GridFunction> fine;
  if (refine) fine = make_family(fam.kind, halved(fam.params));
  measure_cases(rep, coarse, refine ? &fine : nullptr, family_labels(fam, coarse),
                [&](const GridFunction& f) {
                  const double width = f.right() - f.left();
                  const double left = f.left() - pad_left * width;
                  const double span = (1.0 + pad_left + pad_right) * width;
                  const auto n = static_cast<std::size_t>(std::llround(span * sub / f.h()));
                  const EvalGrid eval{{left, span / static_cast<double>(n), n}, 0.5};
                  const auto v = variation(f, seq, spec, eval);
                  DyadicOptions opts;
                  opts.origin = f.left();
                  opts.clip = DyadicOptions::Clip::Inside;
                  const auto family = dyadic_family(v.geometry(), opts);
                  Measure m{bmo_norm(v, family), f.linf(), {}};
                  m.extra.emplace_back("intervals", static_cast<double>(family.intervals.size()));
                  return m;
                });
  summarize(rep, refine);
  standard_checks(rep, refine, threshold(c, "stability"));
  return rep;
}

VerificationReport run_l2(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const double sub = subdivision(c);
  if (spec.s < 2.0) invalid("l2_multiplier needs s >= 2");
  const bool refine = c.at("refine").get<bool>();
  const auto fam = family_from(c);
  const auto xi = frequency_grid_from_literal(c.at("xi").get<std::string>());
  const auto scan = sup_scan(seq, xi, spec.K);
  const double bound = std::sqrt(scan.sup_Q);
  const auto coarse = make_family(fam.kind, fam.params);
  std::vector<GridFunction> fine;
  if (refine) fine = make_family(fam.kind, halved(fam.params));
  measure_cases(rep, coarse, refine ? &fine : nullptr, family_labels(fam, coarse),
                [&](const GridFunction& f) {
                  return Measure{lp_norm(variation_profile(f, seq, spec, f.h() / sub), 2.0),
                                 lp_norm(f, 2.0), {}};
                });
  summarize(rep, refine);
  rep.constants.emplace_back("sup_Q", scan.sup_Q);
  rep.constants.emplace_back("sqrt_sup_Q", bound);
  rep.constants.emplace_back("sup_I", scan.sup_I);
  rep.constants.emplace_back("max_term", scan.max_term);
  const double slack = threshold(c, "multiplier_slack");
  add_check(rep, "sup_ratio_finite", rep.sup_ratio, kNaN, "finite");
  add_check(rep, "ratio_below_multiplier", rep.sup_ratio, bound * (1.0 + slack), "<=");
  if (refine) {
    add_check(rep, "ratio_below_multiplier_fine", rep.sup_ratio_fine, bound * (1.0 + slack), "<=");
  }
  return rep;
}

void report_refinement(VerificationReport& rep, const std::string& name, const ApRefinement& r) {
  rep.constants.emplace_back(name + "_estimate", r.estimates.back());
  rep.constants.emplace_back(name + "_last_change", r.last_change());
  rep.constants.emplace_back(name + "_growth", r.growth());
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    rep.constants.emplace_back(name + "_level" + std::to_string(i), r.estimates[i]);
  }
}

VerificationReport run_weighted(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const double sub = subdivision(c);
  const bool refine = c.at("refine").get<bool>();
  const double p = num(c, "p");
  const double r = num(c, "r");
  if (!(p > 1.0) || !(r > 1.0)) invalid("weighted_pp needs p > 1 and r > 1");
  const double r_dual = r / (r - 1.0);
  if (p < r_dual) invalid("weighted_pp needs r' <= p");
  const auto law = weight_from(c);
  if (!law) invalid("weighted_pp needs a weight");
  const auto& ap = c.at("ap");
  const Interval domain = domain_from(ap);
  const double h0 = num(ap, "h0");
  const int levels = static_cast<int>(integer(ap, "levels"));
  const bool expect_bounded = ap.at("expect_bounded").get<bool>();

  const auto ap_p = ap_refinement(*law, p, domain, h0, levels);
  report_refinement(rep, "ap", ap_p);
  // Weighted bounds need w in A_{p/r'}; p/r' = 1 means A_1.
  const double q = p / r_dual;
  const auto ap_q = q > 1.0 + 1e-12 ? ap_refinement(*law, q, domain, h0, levels)
                                    : a1_refinement(*law, domain, h0, levels);
  report_refinement(rep, "ap_over_rdual", ap_q);
  rep.constants.emplace_back("p_over_rdual", q);

  const auto fam = family_from(c);
  const auto coarse = make_family(fam.kind, fam.params);
  std::vector<GridFunction> fine;
  if (refine) fine = make_family(fam.kind, halved(fam.params));
  measure_cases(rep, coarse, refine ? &fine : nullptr, family_labels(fam, coarse),
                [&](const GridFunction& f) {
                  return Measure{lp_norm(variation_profile(f, seq, spec, f.h() / sub), p, *law),
                                 lp_norm(f, p, *law), {}};
                });
  summarize(rep, refine);
  add_check(rep, "sup_ratio_finite", rep.sup_ratio, kNaN, "finite");
  if (expect_bounded) {
    if (refine) add_check(rep, "refinement_change", rep.refinement_change,
                          threshold(c, "stability"), "<=");
    add_check(rep, "ap_stable", ap_p.last_change(), threshold(c, "ap"), "<=");
    add_check(rep, "ap_over_rdual_stable", ap_q.last_change(), threshold(c, "ap"), "<=");
  } else {
    add_check(rep, "ap_monotone_increasing", ap_p.monotone_increasing() ? 1.0 : 0.0, 1.0, "==");
    add_check(rep, "ap_growth", ap_p.growth(), threshold(c, "growth"), ">=");
  }
  return rep;
}

VerificationReport run_weighted_weak(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const double sub = subdivision(c);
  const bool refine = c.at("refine").get<bool>();
  const double r = num(c, "r");
  if (!(r > 1.0)) invalid("weighted_weak11 needs r > 1");
  const double r_dual = r / (r - 1.0);
  const auto law = weight_from(c);
  if (!law) invalid("weighted_weak11 needs a weight");
  const auto& a1 = c.at("a1");
  const auto a1_ref = a1_refinement(law->raised(r_dual), domain_from(a1), num(a1, "h0"),
                                    static_cast<int>(integer(a1, "levels")));
  report_refinement(rep, "a1_of_w_rdual", a1_ref);
  rep.constants.emplace_back("r_dual", r_dual);

  const auto fam = family_from(c);
  const auto coarse = make_family(fam.kind, fam.params);
  std::vector<GridFunction> fine;
  if (refine) fine = make_family(fam.kind, halved(fam.params));
  measure_cases(rep, coarse, refine ? &fine : nullptr, family_labels(fam, coarse),
                [&](const GridFunction& f) {
                  return Measure{weak_type_sup(variation_profile(f, seq, spec, f.h() / sub), *law),
                                 lp_norm(f, 1.0, *law), {}};
                });
  summarize(rep, refine);
  standard_checks(rep, refine, threshold(c, "stability"));
  add_check(rep, "a1_stable", a1_ref.last_change(), threshold(c, "ap"), "<=");
  return rep;
}

GridFunction pad_to(const GridFunction& f, const GridGeometry& g) {
  std::vector<double> v(g.n, 0.0);
  const auto offset = static_cast<std::ptrdiff_t>(std::llround((f.x0() - g.x0) / g.h));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto j = offset + static_cast<std::ptrdiff_t>(i);
    if (j < 0 || j >= static_cast<std::ptrdiff_t>(g.n)) {
      throw Error(ErrorCode::GridMismatch, "function does not fit the common grid");
    }
    v[static_cast<std::size_t>(j)] = f[i];
  }
  return GridFunction(g, std::move(v));
}

std::vector<GridFunction> on_common_grid(const std::vector<GridFunction>& fs) {
  double left = kInf;
  double right = -kInf;
  for (const auto& f : fs) {
    left = std::min(left, f.left());
    right = std::max(right, f.right());
  }
  const double h = fs.front().h();
  const GridGeometry g{left, h, static_cast<std::size_t>(std::llround((right - left) / h))};
  std::vector<GridFunction> out;
  for (const auto& f : fs) out.push_back(pad_to(f, g));
  return out;
}

VerificationReport run_vector(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const double sub = subdivision(c);
  const bool refine = c.at("refine").get<bool>();
  const double p = num(c, "p");
  if (!(p > 1.0)) invalid("vector_valued needs p > 1");
  auto rhos = numbers(c, "rho");
  if (rhos.empty()) invalid("rho list is empty");
  std::sort(rhos.begin(), rhos.end());
  const auto law = weight_from(c);
  const auto fam = family_from(c);
  const auto coarse = on_common_grid(make_family(fam.kind, fam.params));
  std::vector<GridFunction> fine;
  if (refine) fine = on_common_grid(make_family(fam.kind, halved(fam.params)));

  auto rhs_of = [&](const std::vector<GridFunction>& fs, double rho) {
    std::vector<double> agg(fs.front().size());
    for (std::size_t i = 0; i < agg.size(); ++i) {
      CompensatedSum s;
      for (const auto& f : fs) s.add(std::pow(std::abs(f[i]), rho));
      agg[i] = std::pow(s.value(), 1.0 / rho);
    }
    const GridFunction g(fs.front().geometry(), std::move(agg));
    return law ? lp_norm(g, p, *law) : lp_norm(g, p);
  };

  std::vector<Profile> coarse_profiles(rhos.size());
  std::vector<Profile> fine_profiles(rhos.size());
  rep.cases.assign(rhos.size(), CaseResult{});
  parallel_for(rhos.size(), [&](std::size_t k) {
    auto& cs = rep.cases[k];
    char buf[64];
    std::snprintf(buf, sizeof buf, "rho=%.6g", rhos[k]);
    cs.id = case_id(k);
    cs.label = buf;
    coarse_profiles[k] = vector_variation_profile(coarse, seq, spec, rhos[k], coarse.front().h() / sub);
    cs.lhs = law ? lp_norm(coarse_profiles[k], p, *law) : lp_norm(coarse_profiles[k], p);
    cs.rhs = rhs_of(coarse, rhos[k]);
    cs.ratio = safe_ratio(cs.lhs, cs.rhs);
    if (refine) {
      fine_profiles[k] = vector_variation_profile(fine, seq, spec, rhos[k], fine.front().h() / sub);
      cs.lhs_fine = law ? lp_norm(fine_profiles[k], p, *law) : lp_norm(fine_profiles[k], p);
      cs.rhs_fine = rhs_of(fine, rhos[k]);
      cs.ratio_fine = safe_ratio(cs.lhs_fine, cs.rhs_fine);
      cs.change = relative_change(cs.ratio, cs.ratio_fine);
    }
  });
  summarize(rep, refine);
  standard_checks(rep, refine, threshold(c, "stability"));

  // l^rho norms decrease in rho, pointwise.
  std::size_t violations = 0;
  for (std::size_t k = 1; k < rhos.size(); ++k) {
    const auto& lo = coarse_profiles[k - 1].values;
    const auto& hi = coarse_profiles[k].values;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (hi[i] > lo[i] * (1.0 + 1e-12) + 1e-300) ++violations;
    }
  }
  add_check(rep, "rho_monotone_violations", static_cast<double>(violations), 0.0, "==");
  return rep;
}

/// Random lacunary sequence: ratios beta^{1 + gap_max U}, so some gaps exceed
/// beta^2 and force insertions.
LacunarySeq random_lacunary(Rng& rng, const ojson& cfg) {
  const double beta = rng.uniform(num(cfg, "beta_min"), num(cfg, "beta_max"));
  const auto len = rng.integer(integer(cfg, "length_min"), integer(cfg, "length_max"));
  std::vector<double> scales{rng.uniform(num(cfg, "n0_min"), num(cfg, "n0_max"))};
  const double gap_max = num(cfg, "gap_max");
  for (std::int64_t k = 1; k < len; ++k) {
    scales.push_back(scales.back() * std::pow(beta, 1.0 + gap_max * rng.uniform()));
  }
  return validate_lacunary(std::move(scales), beta);
}

VerificationReport run_refine(const ojson& c) {
  VerificationReport rep;
  const auto& sc = c.at("sequences");
  Rng rng(seed_of(c, sc));
  const auto count = static_cast<std::size_t>(integer(sc, "count"));
  std::vector<LacunarySeq> seqs;
  std::vector<RefinedSeq> refined;
  std::size_t bracket_violations = 0;
  std::size_t containment_violations = 0;
  for (std::size_t i = 0; i < count; ++i) {
    seqs.push_back(random_lacunary(rng, sc));
    refined.push_back(refine(seqs.back()));
    const auto& rs = refined.back();
    const double b = rs.beta;
    for (std::size_t k = 1; k < rs.scales.size(); ++k) {
      const double ratio = rs.scales[k] / rs.scales[k - 1];
      if (ratio < b * (1.0 - kRatioSlack) || ratio > b * b * (1.0 + kRatioSlack)) {
        ++bracket_violations;
      }
    }
    const auto orig = seqs.back().scales();
    bool ok = rs.origin_indices.size() == orig.size();
    for (std::size_t k = 0; ok && k < orig.size(); ++k) {
      ok = rs.origin_indices[k] < rs.scales.size() && rs.scales[rs.origin_indices[k]] == orig[k] &&
           (k == 0 || rs.origin_indices[k] > rs.origin_indices[k - 1]);
    }
    if (!ok) ++containment_violations;
  }
  add_check(rep, "refined_ratio_bracket_violations", static_cast<double>(bracket_violations), 0.0,
            "==");
  add_check(rep, "refined_containment_violations", static_cast<double>(containment_violations),
            0.0, "==");

  const double sub = subdivision(c);
  const auto s_values = numbers(c, "s_values");
  const double slack = threshold(c, "slack");
  const auto fam = family_from(c);
  const auto fs = make_family(fam.kind, fam.params);
  if (fs.size() > seqs.size()) invalid("need at least as many sequences as functions");
  const std::size_t cases = fs.size() * s_values.size();
  std::vector<std::size_t> violations(cases, 0);
  rep.cases.assign(cases, CaseResult{});
  parallel_for(cases, [&](std::size_t idx) {
    const std::size_t j = idx / s_values.size();
    const double s = s_values[idx % s_values.size()];
    const auto& f = fs[j];
    const auto& orig = seqs[j];
    const auto ref = refined[j].as_lacunary();
    VariationSpec so;
    so.s = s;
    so.K = orig.max_index();
    so.waive_tail = true;
    VariationSpec sr = so;
    sr.K = ref.max_index();
    if (so.K < 1) return;
    const auto edges = profile_edges(f.geometry(), ref, sr.K, f.h() / sub);
    std::vector<double> xs(edges.size() - 1);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 0.5 * (edges[i] + edges[i + 1]);
    const auto vo = variation_at(f, orig, so, xs);
    const auto vr = variation_at(f, ref, sr, xs);
    auto& cs = rep.cases[idx];
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      cs.lhs = std::max(cs.lhs, vo[i]);
      cs.rhs = std::max(cs.rhs, vr[i]);
      if (vo[i] > vr[i] * (1.0 + slack) + 1e-300) ++violations[idx];
      if (vr[i] > 0.0) worst = std::max(worst, vo[i] / vr[i]);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "f%02zu s=%.6g scales=%zu->%zu", j, s, orig.size(), ref.size());
    cs.id = case_id(idx);
    cs.label = buf;
    cs.ratio = worst;
    cs.extra.emplace_back("s", s);
    cs.extra.emplace_back("points", static_cast<double>(xs.size()));
    cs.extra.emplace_back("violations", static_cast<double>(violations[idx]));
  });
  for (std::size_t idx = 0; idx < cases; ++idx) {
    if (rep.cases[idx].id.empty()) {
      rep.cases[idx].id = case_id(idx);
      rep.cases[idx].label = "single-scale sequence";
    }
  }
  summarize(rep, false);
  for (double s : s_values) {
    std::size_t total = 0;
    for (std::size_t idx = 0; idx < cases; ++idx) {
      if (s_values[idx % s_values.size()] == s) total += violations[idx];
    }
    char name[64];
    std::snprintf(name, sizeof name, "domination_violations_s=%.6g", s);
    add_check(rep, name, static_cast<double>(total), 0.0, "==");
  }
  return rep;
}

VerificationReport run_dr(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec_v = spec_from(c, seq);
  const KernelSpec ks{seq, spec_v.s, spec_v.K};
  const auto rs = numbers(c, "r");
  const int j = static_cast<int>(integer(c, "j"));
  const int i_min = static_cast<int>(integer(c, "i_min"));
  const int i_max = static_cast<int>(integer(c, "i_max"));
  if (j < 0 || j > seq.max_index() || i_min > i_max) invalid("bad index range");
  const double y = c.at("y").is_null() ? seq[static_cast<std::size_t>(j)] : num(c, "y");
  const int l_min = static_cast<int>(integer(c, "l_min"));
  const int l_max = static_cast<int>(integer(c, "l_max"));
  const double reach = std::ldexp(y, l_max + 1) + y;
  if (!(seq[static_cast<std::size_t>(ks.K)] > reach)) {
    invalid("truncation too short: need n_K > 2^{l_max+1} y + y");
  }
  const double beta = seq.beta();
  const double slack = threshold(c, "decay_slack");

  std::vector<std::pair<double, int>> tasks;
  for (double r : rs) {
    for (int i = i_min; i <= i_max; ++i) tasks.emplace_back(r, i);
  }
  std::vector<WindowBound> bounds(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    bounds[t] = window_bound_check(tasks[t].second, j, y, ks, tasks[t].first);
  });
  rep.cases.assign(tasks.size(), CaseResult{});
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    auto& cs = rep.cases[t];
    const auto& b = bounds[t];
    char buf[64];
    std::snprintf(buf, sizeof buf, "r=%.6g i=%d j=%d", b.r, b.i, b.j);
    cs.id = case_id(t);
    cs.label = buf;
    cs.lhs = b.lhs;
    cs.rhs = b.rhs;
    cs.ratio = safe_ratio(b.lhs, b.rhs);
    cs.extra = {{"constant", b.constant},
                {"reference_constant", b.reference_constant},
                {"closed_form", b.closed_form},
                {"normalized", b.normalized},
                {"y", b.y}};
  }
  summarize(rep, false);
  rep.constants.emplace_back("gamma", lacunary_gamma(beta));
  for (double r : rs) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "r=%.6g", r);
    std::size_t failures = 0;
    std::vector<double> pos;
    std::vector<double> vals;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].first != r) continue;
      failures += bounds[t].pass ? 0 : 1;
      pos.push_back(static_cast<double>(bounds[t].i - bounds[t].j));
      vals.push_back(bounds[t].normalized);
    }
    add_check(rep, std::string("window_bound_failures_") + tag, static_cast<double>(failures),
              0.0, "==");
    if (pos.size() >= 2) {
      const double slope = log_slope(pos, vals);
      rep.constants.emplace_back(std::string("decay_slope_") + tag, slope);
      add_check(rep, std::string("decay_slope_") + tag, slope,
                -std::log(beta) / r * (1.0 - slack), "<=");
    }
    const auto shells = shell_integrals(y, ks, r, l_min, l_max);
    rep.constants.emplace_back(std::string("shell_total_") + tag, shells.total);
    add_check(rep, std::string("shell_tail_fraction_") + tag, shells.tail_fraction,
              threshold(c, "shell_tail"), "<=");
  }
  const auto& hc = c.at("hormander");
  const auto ys = log_frequency_grid(num(hc, "y_min"), num(hc, "y_max"),
                                     static_cast<std::size_t>(integer(hc, "count")), false);
  double lo = kInf;
  double hi = 0.0;
  for (double yy : ys) {
    const double v = hormander_integral(yy, ks);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  rep.constants.emplace_back("hormander_min", lo);
  rep.constants.emplace_back("hormander_max", hi);
  add_check(rep, "hormander_spread", lo > 0.0 ? hi / lo : kInf,
            threshold(c, "hormander_spread"), "<=");
  return rep;
}

VerificationReport run_fourier(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const int K = spec.K;
  const int Kc = static_cast<int>(integer(c, "K_compare"));
  if (Kc < 1 || Kc > K) invalid("K_compare must lie in [1, K]");
  const auto xi = frequency_grid_from_literal(c.at("xi").get<std::string>());
  const auto full = sup_scan(seq, xi, K);
  const auto part = sup_scan(seq, xi, Kc);
  const double beta = seq.beta();
  const double bound = 4.0 / (1.0 - 1.0 / beta) + 16.0;

  auto add_case = [&](const MultiplierScan& s) {
    CaseResult cs;
    cs.id = case_id(rep.cases.size());
    cs.label = "K=" + std::to_string(s.K);
    cs.lhs = s.sup_I;
    cs.rhs = bound;
    cs.ratio = safe_ratio(s.sup_I, bound);
    cs.extra = {{"sup_I1", s.sup_I1}, {"sup_I2", s.sup_I2}, {"sup_Q", s.sup_Q},
                {"argmax_xi", s.argmax_xi}, {"max_term", s.max_term}};
    rep.cases.push_back(std::move(cs));
  };
  add_case(part);
  add_case(full);
  summarize(rep, false);

  std::size_t q_violations = 0;
  for (const auto& s : full.sums) {
    if (s.max_term <= 1.0 && s.Q > s.I * (1.0 + 1e-12)) ++q_violations;
  }
  const double at_zero = multiplier_sums(seq, 0.0, K).I;
  const double diff = std::abs(full.sup_I - part.sup_I);
  rep.constants.emplace_back("sup_I", full.sup_I);
  rep.constants.emplace_back("sup_I_compare", part.sup_I);
  rep.constants.emplace_back("sup_I_difference", diff);
  rep.constants.emplace_back("sup_I2", full.sup_I2);
  rep.constants.emplace_back("sup_Q", full.sup_Q);
  rep.constants.emplace_back("argmax_xi", full.argmax_xi);
  rep.constants.emplace_back("bound", bound);

  add_check(rep, "sup_I_finite", full.sup_I, kNaN, "finite");
  add_check(rep, "truncation_stability", diff, threshold(c, "stability_abs"), "<=");
  add_check(rep, "sup_I2", full.sup_I2, threshold(c, "i2_bound"), "<=");
  add_check(rep, "sup_I_below_bound", full.sup_I, bound, "<=");
  add_check(rep, "I_at_zero", at_zero, 0.0, "==");
  add_check(rep, "Q_below_I_violations", static_cast<double>(q_violations), 0.0, "==");

  const auto& d = c.at("derivative");
  const auto r = log_frequency_grid(num(d, "r_min"), num(d, "r_max"),
                                    static_cast<std::size_t>(integer(d, "count")), false);
  DerivativeCheck dc;
  double violations = 0.0;
  try {
    dc = derivative_bound_check(r);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BoundViolation) throw;
    violations = 1.0;  // at least one; the exact count is in the message
    rep.constants.emplace_back("first_violation_r", e.value().value_or(kNaN));
  }
  violations = std::max(violations, static_cast<double>(dc.violations));
  rep.constants.emplace_back("fprime_worst_bound_ratio", dc.worst_bound_ratio);
  rep.constants.emplace_back("fprime_max_difference_error", dc.max_difference_error);
  add_check(rep, "fprime_bound_violations", violations, 0.0, "==");
  add_check(rep, "fprime_difference_agreement", dc.max_difference_error,
            threshold(c, "fd_agreement"), "<=");
  return rep;
}

VerificationReport run_indicator(const ojson& c) {
  VerificationReport rep;
  const auto seq = seq_from(c.at("seq"));
  const auto spec = spec_from(c, seq);
  const int g = lacunary_gamma(seq.beta());
  const int i_min = static_cast<int>(integer(c, "i_min"));
  const int i_max = static_cast<int>(integer(c, "i_max"));
  const auto ny = integer(c, "y_samples");
  const auto nx = integer(c, "x_samples");
  if (i_max + 1 > spec.K || ny < 1 || nx < 1) invalid("need i_max + 1 <= K and positive samples");
  std::size_t total = 0;
  for (int i = std::max(i_min, g); i <= i_max; ++i) {
    for (int j = 0; j <= i - g; ++j) {
      const double nj = seq[static_cast<std::size_t>(j)];
      const double ni = seq[static_cast<std::size_t>(i)];
      const double ni1 = seq[static_cast<std::size_t>(i + 1)];
      std::size_t bad = 0;
      std::size_t window = 0;
      for (std::int64_t a = 0; a < ny; ++a) {
        const double y = nj * static_cast<double>(a + 1) / static_cast<double>(ny);
        for (std::int64_t b = 0; b < nx; ++b) {
          const double x = ni + (ni1 - ni) * (static_cast<double>(b) + 0.5) / static_cast<double>(nx);
          try {
            if (indicator_identity(i, j, y, x, seq, spec.K) == IndicatorCase::EqualsWindow) {
              ++window;
            }
          } catch (const Error& e) {
            if (e.code() != ErrorCode::IdentityViolated) throw;
            ++bad;
          }
        }
      }
      CaseResult cs;
      cs.id = case_id(rep.cases.size());
      cs.label = "i=" + std::to_string(i) + " j=" + std::to_string(j);
      cs.lhs = static_cast<double>(bad);
      cs.rhs = static_cast<double>(ny * nx);
      cs.ratio = cs.lhs / cs.rhs;
      cs.extra = {{"window_hits", static_cast<double>(window)}};
      rep.cases.push_back(std::move(cs));
      total += bad;
    }
  }
  summarize(rep, false);
  rep.constants.emplace_back("gamma", g);
  add_check(rep, "identity_violations", static_cast<double>(total), 0.0, "==");
  return rep;
}

// ---------------------------------------------------------------- emission

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

CaseResult::CaseResult() : lhs_fine(kNaN), rhs_fine(kNaN), ratio_fine(kNaN), change(kNaN) {}

VerificationReport::VerificationReport() : sup_ratio_fine(kNaN), refinement_change(kNaN) {}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  for (auto k : all_scenario_kinds()) {
    if (name == to_string(k)) return k;
  }
  invalid("unknown scenario kind '" + name + "'");
}

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::StrongPP: return "strong_pp";
    case ScenarioKind::Weak11: return "weak_11";
    case ScenarioKind::H1L1: return "h1_l1";
    case ScenarioKind::LinfBmo: return "linf_bmo";
    case ScenarioKind::L2Multiplier: return "l2_multiplier";
    case ScenarioKind::WeightedPP: return "weighted_pp";
    case ScenarioKind::WeightedWeak11: return "weighted_weak11";
    case ScenarioKind::VectorValued: return "vector_valued";
    case ScenarioKind::RefineDomination: return "refine_domination";
    case ScenarioKind::DrCondition: return "dr_condition";
    case ScenarioKind::FourierBound: return "fourier_bound";
    case ScenarioKind::IndicatorIdentity: return "indicator_identity";
  }
  return "unknown";
}

std::vector<ScenarioKind> all_scenario_kinds() {
  return {ScenarioKind::StrongPP,       ScenarioKind::Weak11,       ScenarioKind::H1L1,
          ScenarioKind::LinfBmo,        ScenarioKind::L2Multiplier, ScenarioKind::WeightedPP,
          ScenarioKind::WeightedWeak11, ScenarioKind::VectorValued, ScenarioKind::RefineDomination,
          ScenarioKind::DrCondition,    ScenarioKind::FourierBound, ScenarioKind::IndicatorIdentity};
}

Scenario make_scenario(ScenarioKind kind, const json& config) {
  Scenario sc;
  sc.kind = kind;
  sc.config = defaults_for(kind);
  if (config.is_null()) return sc;
  if (!config.is_object()) invalid("scenario config must be a JSON object");
  if (config.contains("kind")) {
    if (!config.at("kind").is_string() || config.at("kind").get<std::string>() != to_string(kind)) {
      invalid(std::string("config kind does not match scenario ") + to_string(kind));
    }
  }
  merge_into(sc.config, config, "");
  return sc;
}

Scenario load_scenario(ScenarioKind kind, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open scenario config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    invalid("config '" + path + "' is not valid JSON: " + e.what());
  }
  return make_scenario(kind, doc);
}

VerificationReport run_scenario(const Scenario& scenario) {
  const auto start = std::chrono::steady_clock::now();
  const auto& c = scenario.config;
  VerificationReport rep;
  try {
    switch (scenario.kind) {
      case ScenarioKind::StrongPP: rep = run_strong(c); break;
      case ScenarioKind::Weak11: rep = run_weak(c); break;
      case ScenarioKind::H1L1: rep = run_h1(c); break;
      case ScenarioKind::LinfBmo: rep = run_bmo(c); break;
      case ScenarioKind::L2Multiplier: rep = run_l2(c); break;
      case ScenarioKind::WeightedPP: rep = run_weighted(c); break;
      case ScenarioKind::WeightedWeak11: rep = run_weighted_weak(c); break;
      case ScenarioKind::VectorValued: rep = run_vector(c); break;
      case ScenarioKind::RefineDomination: rep = run_refine(c); break;
      case ScenarioKind::DrCondition: rep = run_dr(c); break;
      case ScenarioKind::FourierBound: rep = run_fourier(c); break;
      case ScenarioKind::IndicatorIdentity: rep = run_indicator(c); break;
    }
  } catch (const json::exception& e) {
    invalid(std::string("bad config value: ") + e.what());
  }
  rep.kind = scenario.kind;
  rep.scenario = c;
  rep.seed = static_cast<std::uint64_t>(c.at("seed").get<double>());
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& k) { return k.pass; });
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string emit_report(const VerificationReport& rep, ReportFormat format, bool include_timing) {
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << "case_id,label,lhs,rhs,ratio,lhs_fine,rhs_fine,ratio_fine,change\n";
    char buf[64];
    auto field = [&](double v) {
      if (std::isnan(v)) {
        out << ',';
        return;
      }
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out << buf;
    };
    for (const auto& cs : rep.cases) {
      out << cs.id << ",\"" << cs.label << '"';
      for (double v : {cs.lhs, cs.rhs, cs.ratio, cs.lhs_fine, cs.rhs_fine, cs.ratio_fine, cs.change}) {
        field(v);
      }
      out << '\n';
    }
    return out.str();
  }

  ojson doc;
  doc["schema"] = kReportSchema;
  doc["kind"] = to_string(rep.kind);
  doc["rng"] = Rng::kName;
  doc["seed"] = rep.seed;
  doc["scenario"] = rep.scenario;
  ojson summary;
  summary["cases"] = rep.cases.size();
  summary["sup_ratio"] = number_or_null(rep.sup_ratio);
  summary["sup_ratio_fine"] = number_or_null(rep.sup_ratio_fine);
  summary["refinement_change"] = number_or_null(rep.refinement_change);
  ojson constants = ojson::object();
  for (const auto& [k, v] : rep.constants) constants[k] = number_or_null(v);
  summary["constants"] = constants;
  doc["summary"] = summary;
  ojson checks = ojson::array();
  for (const auto& k : rep.checks) {
    ojson e;
    e["name"] = k.name;
    e["pass"] = k.pass;
    e["value"] = number_or_null(k.value);
    e["relation"] = k.relation;
    e["threshold"] = number_or_null(k.threshold);
    checks.push_back(e);
  }
  doc["checks"] = checks;
  ojson cases = ojson::array();
  for (const auto& cs : rep.cases) {
    ojson e;
    e["id"] = cs.id;
    e["label"] = cs.label;
    e["lhs"] = number_or_null(cs.lhs);
    e["rhs"] = number_or_null(cs.rhs);
    e["ratio"] = number_or_null(cs.ratio);
    e["lhs_fine"] = number_or_null(cs.lhs_fine);
    e["rhs_fine"] = number_or_null(cs.rhs_fine);
    e["ratio_fine"] = number_or_null(cs.ratio_fine);
    e["change"] = number_or_null(cs.change);
    for (const auto& [k, v] : cs.extra) e[k] = number_or_null(v);
    cases.push_back(e);
  }
  doc["cases"] = cases;
  doc["pass"] = rep.pass;
  if (include_timing) doc["seconds"] = rep.seconds;
  return doc.dump(2) + "\n";
}

}  // namespace lacvar
