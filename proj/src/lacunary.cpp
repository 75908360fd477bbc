#include "lacvar/lacunary.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lacvar/error.hpp"
#include "lacvar/numeric.hpp"

namespace lacvar {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot parse " + std::string(what) + " from '" + s + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

LacunarySeq LacunarySeq::truncated(int K) const {
  if (K < 0 || K > max_index()) {
    throw Error(ErrorCode::InvalidArgument,
                "truncation index " + std::to_string(K) + " outside sequence");
  }
  return LacunarySeq(std::vector<double>(scales_.begin(), scales_.begin() + K + 1),
                     beta_);
}

LacunarySeq RefinedSeq::as_lacunary() const { return validate_lacunary(scales, beta); }

LacunarySeq validate_lacunary(std::vector<double> scales, double beta) {
  if (scales.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty scale list");
  }
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be a finite real > 1");
  }
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const auto idx = static_cast<std::int64_t>(i);
    if (!std::isfinite(scales[i])) {
      throw Error(ErrorCode::InvalidArgument, "non-finite scale", idx);
    }
    if (!(scales[i] > 0.0)) {
      throw Error(ErrorCode::NonPositiveScale,
                  "scale " + std::to_string(i) + " is not positive", idx);
    }
    if (i == 0) continue;
    if (!(scales[i] > scales[i - 1])) {
      throw Error(ErrorCode::NotIncreasing,
                  "scale " + std::to_string(i) + " does not exceed its predecessor",
                  idx);
    }
    if (scales[i] / scales[i - 1] < beta * (1.0 - kRatioSlack)) {
      throw Error(ErrorCode::RatioBelowBeta,
                  "ratio n_" + std::to_string(i) + "/n_" + std::to_string(i - 1) +
                      " is below beta",
                  idx);
    }
  }
  return LacunarySeq(std::move(scales), beta);
}

int lacunary_gamma(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be a finite real > 1");
  }
  const double head = 1.0 / beta;
  double power = head;
  for (int g = 1;; ++g) {
    if (head + power <= 1.0 + kRatioSlack) return g;
    power /= beta;
  }
}

RefinedSeq refine(const LacunarySeq& seq) {
  const double beta = seq.beta();
  const double upper = beta * beta * (1.0 + kRatioSlack);
  RefinedSeq out;
  out.beta = beta;
  out.scales.push_back(seq[0]);
  out.origin_indices.push_back(0);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    const double target = seq[k];
    while (target / out.scales.back() > upper) {
      out.scales.push_back(out.scales.back() * beta);
    }
    out.scales.push_back(target);
    out.origin_indices.push_back(out.scales.size() - 1);
  }
  return out;
}

bool gap_separated(std::span<const double> scales, std::size_t j, std::size_t k) {
  return scales[j] + scales[k] <= scales[k + 1];
}

std::vector<std::pair<std::size_t, std::size_t>> gap_separation_violations(
    std::span<const double> scales, int gamma_value) {
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  const auto shift = static_cast<std::size_t>(gamma_value - 1);
  for (std::size_t j = 0; j < scales.size(); ++j) {
    for (std::size_t k = j + shift; k + 1 < scales.size(); ++k) {
      if (!gap_separated(scales, j, k)) bad.emplace_back(j, k);
    }
  }
  return bad;
}

std::vector<std::pair<std::size_t, std::size_t>> ratio_bracket_violations(
    std::span<const double> scales, double beta) {
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  for (std::size_t l = 0; l < scales.size(); ++l) {
    for (std::size_t k = l + 1; k < scales.size(); ++k) {
      const double ratio = scales[l] / scales[k];
      const double d = static_cast<double>(k - l);
      const double lo = std::pow(beta, -2.0 * d);
      const double hi = std::pow(beta, -d);
      if (ratio < lo * (1.0 - kRatioSlack) || ratio > hi * (1.0 + kRatioSlack)) {
        bad.emplace_back(l, k);
      }
    }
  }
  return bad;
}

LacunarySeq sequence_from_literal(std::string_view literal) {
  const auto parts = split(literal, ':');
  if (parts.size() != 4 || parts[0] != "geometric") {
    throw Error(ErrorCode::InvalidArgument,
                "expected geometric:<base>:<ratio>:<count>, got '" +
                    std::string(literal) + "'");
  }
  const double base = parse_double(parts[1], "base");
  const double ratio = parse_double(parts[2], "ratio");
  const double count = parse_double(parts[3], "count");
  if (count < 1 || count != std::floor(count) || count > 4096) {
    throw Error(ErrorCode::InvalidArgument, "count must be an integer in [1, 4096]");
  }
  std::vector<double> scales(static_cast<std::size_t>(count));
  for (std::size_t k = 0; k < scales.size(); ++k) {
    scales[k] = base * std::pow(ratio, static_cast<double>(k));
  }
  return validate_lacunary(std::move(scales), ratio);
}

LacunarySeq sequence_from_scales(std::vector<double> scales) {
  if (scales.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "beta cannot be inferred from fewer than two scales");
  }
  double beta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < scales.size(); ++k) {
    beta = std::min(beta, scales[k] / scales[k - 1]);
  }
  // Non-increasing or non-positive input: let validation name the index.
  if (!(beta > 1.0)) beta = std::nextafter(1.0, 2.0);
  return validate_lacunary(std::move(scales), beta);
}

}  // namespace lacvar
