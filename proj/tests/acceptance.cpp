// Acceptance gate: one PASS/FAIL line per criterion. Optional argument: a
// directory that receives every scenario report as JSON.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lacvar/avgops.hpp"
#include "lacvar/gridfn.hpp"
#include "lacvar/harness.hpp"
#include "lacvar/lacunary.hpp"
#include "lacvar/numeric.hpp"

using namespace lacvar;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string report_dir;

struct Run {
  VerificationReport report;
  std::string bytes;
  double seconds = 0.0;
};

std::map<std::string, Run> runs;

const Run& run(const std::string& name, ScenarioKind kind, const json& cfg = json::object()) {
  if (auto it = runs.find(name); it != runs.end()) return it->second;
  const auto t0 = Clock::now();
  Run r;
  r.report = run_scenario(make_scenario(kind, cfg));
  r.seconds = seconds_since(t0);
  r.bytes = emit_report(r.report, ReportFormat::Json);
  if (!report_dir.empty()) std::ofstream(report_dir + "/" + name + ".json") << r.bytes;
  return runs.emplace(name, std::move(r)).first->second;
}

std::string describe(const Check& c) {
  char buf[160];
  if (c.relation == "finite") {
    std::snprintf(buf, sizeof buf, "%s=%.4g(finite)", c.name.c_str(), c.value);
  } else {
    std::snprintf(buf, sizeof buf, "%s=%.4g%s%.4g", c.name.c_str(), c.value, c.relation.c_str(),
                  c.threshold);
  }
  return c.pass ? buf : "[" + std::string(buf) + "]";
}

/// Pass when every listed check (all checks if empty) passes.
bool gather(const Run& r, const std::vector<std::string>& names, std::string& detail) {
  bool ok = true;
  for (const auto& c : r.report.checks) {
    if (!names.empty() && std::find(names.begin(), names.end(), c.name) == names.end()) continue;
    ok = ok && c.pass;
    detail += " " + describe(c);
  }
  return ok;
}

int failures = 0;

void line(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s %2d %s:%s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void criterion(int id, const char* name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" error: ") + e.what();
  }
  line(id, name, pass, detail);
}

bool oracle_equivalence(std::string& detail) {
  const auto t0 = Clock::now();
  FamilyParams p;
  p.h = 1.0 / 16.0;
  p.scale_min = p.scale_max = 256.0;  // N = 4096 cells
  p.count = 100;
  p.seed = 1;
  p.max_pieces = 4096;
  const auto fs = make_family(FamilyKind::RandomStep, p);
  // Windows are deliberately not grid multiples.
  const auto seq = sequence_from_literal("geometric:0.3:2:13");
  const int K = 12;
  Rng pick(99);
  double worst = 0.0;
  std::size_t compared = 0;
  for (const auto& f : fs) {
    std::vector<double> abs_values(f.values().begin(), f.values().end());
    for (auto& v : abs_values) v = std::abs(v);
    const GridFunction abs_f(f.geometry(), std::move(abs_values));
    const auto eval = padded_eval_grid(f, seq[K]);
    for (int k = 0; k <= K; ++k) {
      const auto fast = average_fast(f, seq[k], eval);
      for (int m = 0; m < 64; ++m) {
        const auto i = static_cast<std::size_t>(pick.integer(0, static_cast<std::int64_t>(eval.size()) - 1));
        const double x = eval.point(i);
        const double oracle = average_oracle_at(f, seq[k], x);
        const double scale = std::max(std::abs(oracle), average_oracle_at(abs_f, seq[k], x));
        if (scale > 0.0) worst = std::max(worst, std::abs(fast[i] - oracle) / scale);
        ++compared;
      }
    }
  }
  const double t = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, " functions=%zu N=%zu K=%d points=%zu max_rel=%.3g runtime=%.2fs",
                fs.size(), fs.front().size(), K, compared, worst, t);
  detail = buf;
  return fs.front().size() == 4096 && worst <= 1e-12 && t < 10.0;
}

bool gap_separation(std::string& detail) {
  Rng rng(3);
  bool ok = true;
  for (double beta : {1.2, 1.5, 2.0, 3.0}) {
    const int g = lacunary_gamma(beta);
    const bool minimal = 1.0 / beta + std::pow(beta, -g) <= 1.0 &&
                         (g == 1 || 1.0 / beta + std::pow(beta, -(g - 1)) > 1.0);
    std::size_t pairs = 0;
    std::size_t violations = 0;
    for (int t = 0; t < 100; ++t) {
      std::vector<double> s{rng.uniform(0.25, 2.0)};
      while (s.size() < 15) s.push_back(s.back() * std::pow(beta, 1.0 + 1.5 * rng.uniform()));
      auto refined = refine(validate_lacunary(s, beta)).scales;
      refined.resize(15);
      violations += gap_separation_violations(refined, g).size();
      for (int j = 0; j < 15; ++j) {
        for (int k = std::max(0, j + g - 1); k + 1 < 15; ++k) ++pairs;
      }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, " beta=%.1f gamma=%d pairs=%zu violations=%zu%s", beta, g, pairs,
                  violations, minimal ? "" : " [gamma not minimal]");
    detail += buf;
    ok = ok && minimal && violations == 0;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) report_dir = argv[1];
  const auto t0 = Clock::now();

  criterion(1, "oracle_equivalence", oracle_equivalence);

  criterion(2, "refinement", [](std::string& d) {
    return gather(run("refine_domination", ScenarioKind::RefineDomination), {}, d);
  });

  criterion(3, "gap_separation", gap_separation);

  criterion(4, "indicator_identity", [](std::string& d) {
    return gather(run("indicator_identity", ScenarioKind::IndicatorIdentity), {}, d);
  });

  criterion(5, "fourier_bound", [](std::string& d) {
    return gather(run("fourier_bound", ScenarioKind::FourierBound),
                  {"sup_I_finite", "truncation_stability", "sup_I2", "sup_I_below_bound",
                   "I_at_zero"},
                  d);
  });

  criterion(6, "derivative_bound", [](std::string& d) {
    return gather(run("fourier_bound", ScenarioKind::FourierBound),
                  {"fprime_bound_violations", "fprime_difference_agreement"}, d);
  });

  criterion(7, "l2_multiplier", [](std::string& d) {
    const auto& r = run("l2_multiplier", ScenarioKind::L2Multiplier);
    const bool ok = gather(r, {}, d);
    char buf[64];
    std::snprintf(buf, sizeof buf, " cases=%zu runtime=%.1fs", r.report.cases.size(), r.seconds);
    d += buf;
    return ok && r.report.cases.size() == 100 && r.seconds < 60.0;
  });

  criterion(8, "dr_condition", [](std::string& d) {
    return gather(run("dr_condition", ScenarioKind::DrCondition), {}, d);
  });

  criterion(9, "h1_to_l1", [](std::string& d) {
    const auto& r = run("h1_l1", ScenarioKind::H1L1);
    d += " atoms=" + std::to_string(r.report.cases.size());
    return gather(r, {}, d) && r.report.cases.size() == 200;
  });

  criterion(10, "weak_bmo_strong", [](std::string& d) {
    const json random{{"family", {{"kind", "random_step"}, {"count", 20}, {"epsilons", json::array()}}}};
    const json indicator{{"family", {{"kind", "indicator"}, {"epsilons", json::array()}}}};
    bool ok = true;
    const std::vector<std::pair<std::string, const Run*>> all{
        {"weak/spike", &run("weak_11", ScenarioKind::Weak11)},
        {"weak/random", &run("weak_11_random", ScenarioKind::Weak11, random)},
        {"weak/indicator", &run("weak_11_indicator", ScenarioKind::Weak11, indicator)},
        {"strong/random", &run("strong_pp", ScenarioKind::StrongPP)},
        {"strong/indicator", &run("strong_pp_indicator", ScenarioKind::StrongPP, indicator)},
        {"bmo/random", &run("linf_bmo", ScenarioKind::LinfBmo)},
        {"bmo/indicator", &run("linf_bmo_indicator", ScenarioKind::LinfBmo, indicator)},
    };
    for (const auto& [label, r] : all) {
      d += " " + label + ":";
      ok = gather(*r, {}, d) && ok;
    }
    return ok;
  });

  criterion(11, "weighted", [](std::string& d) {
    d += " w=|x|^0.5:";
    bool ok = gather(run("weighted_pp", ScenarioKind::WeightedPP), {}, d);
    d += " w=|x|^1.5:";
    ok = gather(run("weighted_pp_divergent", ScenarioKind::WeightedPP,
                    json{{"weight", "power:1.5"},
                         {"refine", false},
                         {"ap", {{"expect_bounded", false}, {"levels", 9}}}}),
                {"ap_monotone_increasing", "ap_growth"}, d) &&
         ok;
    return ok;
  });

  criterion(12, "vector_valued", [](std::string& d) {
    return gather(run("vector_valued", ScenarioKind::VectorValued), {}, d);
  });

  criterion(13, "determinism", [](std::string& d) {
    // Replay every default scenario on a single thread and compare bytes.
    std::map<std::string, ScenarioKind> defaults;
    for (auto k : all_scenario_kinds()) defaults.emplace(to_string(k), k);
    const char* saved = std::getenv("LACVAR_THREADS");
    const std::string restore = saved ? saved : "";
    setenv("LACVAR_THREADS", "1", 1);
    std::size_t same = 0;
    for (const auto& [name, kind] : defaults) {
      const auto& first = run(name, kind);
      const auto again = emit_report(run_scenario(make_scenario(kind)), ReportFormat::Json);
      if (again == first.bytes) {
        ++same;
      } else {
        d += " differs:" + name;
      }
    }
    if (saved) {
      setenv("LACVAR_THREADS", restore.c_str(), 1);
    } else {
      unsetenv("LACVAR_THREADS");
    }
    d += " identical=" + std::to_string(same) + "/" + std::to_string(defaults.size());
    return same == defaults.size();
  });

  std::printf("total runtime %.1fs, %d failing\n", seconds_since(t0), failures);
  return failures == 0 ? 0 : 1;
}
