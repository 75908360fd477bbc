#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lacvar/avgops.hpp"
#include "lacvar/error.hpp"
#include "lacvar/fourier.hpp"
#include "lacvar/gridfn.hpp"
#include "lacvar/harness.hpp"
#include "lacvar/lacunary.hpp"

namespace {

using namespace lacvar;

// Beyond this many eval points `--format auto` writes a profile.
constexpr std::size_t kAutoGridLimit = std::size_t{1} << 22;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  return out;
}

GridFunction load_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return read_csv(in);
}

std::pair<int, int> parse_range(const std::string& text) {
  int lo = 0;
  int hi = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d:%d%c", &lo, &hi, &tail) != 2 || hi < lo) {
    throw Error(ErrorCode::InvalidArgument, "range must look like lo:hi, got '" + text + "'");
  }
  return {lo, hi};
}

EvalGrid parse_eval_grid(const std::string& text) {
  double x0 = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%zu%c", &x0, &h, &n, &tail) != 3 || !(h > 0.0) || n == 0) {
    throw Error(ErrorCode::InvalidArgument, "eval grid must look like x0:h:n, got '" + text + "'");
  }
  return EvalGrid{{x0, h, n}, 0.5};
}

void print_checks(std::FILE* to, const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    std::fprintf(to, "%s %s value=%.6g", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value);
    if (c.relation == "finite") {
      std::fprintf(to, " finite\n");
    } else {
      std::fprintf(to, " %s %.6g\n", c.relation.c_str(), c.threshold);
    }
  }
}

struct VariationArgs {
  std::string input;
  std::string seq;
  double s = 2.0;
  std::optional<int> k;
  std::string out;
  std::string format = "auto";
  std::string eval_grid;
  double tail_tol = 1e-8;
  bool waive_tail = false;
};

int cmd_variation(const VariationArgs& a) {
  const auto f = load_function(a.input);
  const auto seq = sequence_from_literal(a.seq);
  VariationSpec spec;
  spec.s = a.s;
  spec.K = a.k.value_or(seq.max_index());
  spec.tail_tol = a.tail_tol;
  spec.waive_tail = a.waive_tail;
  spec.validate(seq);

  std::string format = a.format;
  std::optional<EvalGrid> grid;
  if (!a.eval_grid.empty()) {
    grid = parse_eval_grid(a.eval_grid);
    if (format == "auto") format = "grid";
  } else {
    grid = padded_eval_grid(f, seq[static_cast<std::size_t>(spec.K)]);
    if (format == "auto") format = grid->size() <= kAutoGridLimit ? "grid" : "profile";
  }
  auto out = open_out(a.out);
  if (format == "grid") {
    if (grid->size() > 50'000'000) {
      throw Error(ErrorCode::InvalidArgument, "eval grid too large; use --format profile");
    }
    write_csv(variation(f, seq, spec, *grid), out);
  } else if (format == "profile") {
    write_profile_csv(variation_profile(f, seq, spec, f.h()), out);
  } else {
    throw Error(ErrorCode::InvalidArgument, "format must be auto, grid or profile");
  }
  return 0;
}

int cmd_fourier(const std::string& seq_text, const std::string& xi_text, std::optional<int> k,
                const std::string& out_path) {
  const auto seq = sequence_from_literal(seq_text);
  const auto xi = xi_text.empty() ? default_frequency_grid() : frequency_grid_from_literal(xi_text);
  const auto scan = sup_scan(seq, xi, k.value_or(seq.max_index()));
  auto out = open_out(out_path);
  out << "xi,I,I1,I2,Q\n";
  char buf[160];
  for (std::size_t i = 0; i < scan.xi.size(); ++i) {
    const auto& m = scan.sums[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", scan.xi[i], m.I, m.I1, m.I2,
                  m.Q);
    out << buf;
  }
  std::printf("K=%d sup_I=%.10g sup_I1=%.10g sup_I2=%.10g sup_Q=%.10g argmax_xi=%.6g\n", scan.K,
              scan.sup_I, scan.sup_I1, scan.sup_I2, scan.sup_Q, scan.argmax_xi);
  return 0;
}

int cmd_dr(const std::string& seq_text, const std::vector<double>& r, double s, int j,
           const std::string& range, std::optional<double> y, std::optional<int> k,
           const std::string& out_path) {
  const auto [lo, hi] = parse_range(range);
  nlohmann::json cfg = {{"seq", seq_text}, {"s", s}, {"r", r}, {"j", j},
                        {"i_min", lo},     {"i_max", hi}};
  if (y) cfg["y"] = *y;
  if (k) cfg["K"] = *k;
  const auto rep = run_scenario(make_scenario(ScenarioKind::DrCondition, cfg));
  open_out(out_path) << emit_report(rep, ReportFormat::Json);
  print_checks(stdout, rep);
  return rep.pass ? 0 : 1;
}

int cmd_verify(const std::string& kind, const std::string& config, const std::string& out_path,
               const std::string& csv_path, bool timing) {
  const auto k = scenario_kind_from_string(kind);
  const auto sc = config.empty() ? make_scenario(k) : load_scenario(k, config);
  const auto rep = run_scenario(sc);
  const auto json = emit_report(rep, ReportFormat::Json, timing);
  if (out_path.empty() || out_path == "-") {
    std::cout << json;
  } else {
    open_out(out_path) << json;
  }
  if (!csv_path.empty()) open_out(csv_path) << emit_report(rep, ReportFormat::Csv);
  print_checks(stderr, rep);
  return rep.pass ? 0 : 1;
}

int cmd_family(const std::string& kind, const FamilyParams& params, std::size_t index,
               const std::string& out_path) {
  const auto fs = make_family(family_kind_from_string(kind), params);
  if (index >= fs.size()) {
    throw Error(ErrorCode::InvalidArgument, "family has only " + std::to_string(fs.size()) +
                                                " members");
  }
  auto out = open_out(out_path);
  write_csv(fs[index], out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lacunary variation operators: numerics and verification"};
  app.require_subcommand(1);

  VariationArgs va;
  auto* variation_cmd = app.add_subcommand("variation", "Truncated s-variation of a grid function");
  variation_cmd->add_option("--input", va.input, "Function CSV (# x0= h= n= header)")->required();
  variation_cmd->add_option("--seq", va.seq, "geometric:<n0>:<beta>:<count>")->required();
  variation_cmd->add_option("--s", va.s, "Variation exponent, 1 <= s < inf");
  variation_cmd->add_option("--k", va.k, "Truncation index (default: last)");
  variation_cmd->add_option("--out", va.out)->required();
  variation_cmd->add_option("--format", va.format, "auto, grid or profile");
  variation_cmd->add_option("--eval-grid", va.eval_grid, "x0:h:n midpoint grid");
  variation_cmd->add_option("--tail-tol", va.tail_tol, "Relative tail tolerance");
  variation_cmd->add_flag("--waive-tail", va.waive_tail, "Skip the truncation tail test");

  std::string f_seq;
  std::string f_xi;
  std::optional<int> f_k;
  std::string f_out;
  auto* fourier_cmd = app.add_subcommand("fourier-bound", "Scan the multiplier sums over xi");
  fourier_cmd->add_option("--seq", f_seq)->required();
  fourier_cmd->add_option("--xi", f_xi, "log:<lo>:<hi>:<count> or a comma list");
  fourier_cmd->add_option("--k", f_k, "Truncation index (default: last)");
  fourier_cmd->add_option("--out", f_out)->required();

  std::string d_seq;
  std::vector<double> d_r{1.0};
  double d_s = 2.0;
  int d_j = 0;
  std::string d_range = "1:8";
  std::optional<double> d_y;
  std::optional<int> d_k;
  std::string d_out;
  auto* dr_cmd = app.add_subcommand("dr-check", "Kernel smoothness checks");
  dr_cmd->add_option("--seq", d_seq)->required();
  dr_cmd->add_option("--r", d_r, "Integrability exponent(s)");
  dr_cmd->add_option("--s", d_s);
  dr_cmd->add_option("--j", d_j);
  dr_cmd->add_option("--i-range", d_range, "lo:hi");
  dr_cmd->add_option("--y", d_y, "Shift (default n_j)");
  dr_cmd->add_option("--k", d_k, "Truncation index (default: last)");
  dr_cmd->add_option("--out", d_out)->required();

  std::string v_kind;
  std::string v_config;
  std::string v_out;
  std::string v_csv;
  bool v_timing = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification scenario");
  verify_cmd->add_option("--scenario", v_kind, "Scenario kind")->required();
  verify_cmd->add_option("--config", v_config, "JSON overrides");
  verify_cmd->add_option("--out", v_out, "Report JSON (default stdout)");
  verify_cmd->add_option("--csv", v_csv, "Per-case CSV");
  verify_cmd->add_flag("--timing", v_timing, "Include wall-clock seconds in the JSON");

  std::string fam_kind = "indicator";
  FamilyParams fam;
  std::size_t fam_index = 0;
  std::string fam_out;
  auto* family_cmd = app.add_subcommand("family", "Write a member of a test family as CSV");
  family_cmd->add_option("--kind", fam_kind);
  family_cmd->add_option("--step", fam.h, "Grid step");
  family_cmd->add_option("--origin", fam.origin);
  family_cmd->add_option("--scale-min", fam.scale_min);
  family_cmd->add_option("--scale-max", fam.scale_max);
  family_cmd->add_option("--count", fam.count);
  family_cmd->add_option("--seed", fam.seed);
  family_cmd->add_option("--eps", fam.epsilons);
  family_cmd->add_option("--index", fam_index);
  family_cmd->add_option("--out", fam_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*variation_cmd) return cmd_variation(va);
    if (*fourier_cmd) return cmd_fourier(f_seq, f_xi, f_k, f_out);
    if (*dr_cmd) return cmd_dr(d_seq, d_r, d_s, d_j, d_range, d_y, d_k, d_out);
    if (*verify_cmd) return cmd_verify(v_kind, v_config, v_out, v_csv, v_timing);
    if (*family_cmd) return cmd_family(fam_kind, fam, fam_index, fam_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", to_string(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
