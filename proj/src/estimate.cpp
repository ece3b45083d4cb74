#include "msrss/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

namespace msrss {

StratumProportions StratumProportions::from_sample(const RankedSample& sample) {
  StratumProportions out;
  out.probs.resize(sample.m());
  for (std::size_t i = 0; i < sample.m(); ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < sample.n(); ++j) ones += sample.at(i, j);
    out.probs[i] = static_cast<double>(ones) / static_cast<double>(sample.n());
  }
  return out;
}

std::string to_string(Provenance p) { return p == Provenance::exact ? "exact" : "monte-carlo"; }

std::optional<double> EfficiencyReport::pssr_stderr() const {
  if (!mc_stderr || !(re > 0.0) || !std::isfinite(re)) return std::nullopt;
  return 100.0 * *mc_stderr / (re * re);
}

double estimate_proportion(const RankedSample& sample) {
  if (sample.values.empty()) throw ConfigError("cannot estimate from an empty sample");
  const auto ones = std::accumulate(sample.values.begin(), sample.values.end(), std::size_t{0});
  return static_cast<double>(ones) / static_cast<double>(sample.values.size());
}

double variance_srs(double p, std::size_t N) {
  if (N < 1) throw ConfigError("variance_srs needs N >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("variance_srs needs p in [0, 1]");
  return p * (1.0 - p) / static_cast<double>(N);
}

double variance_design(const StratumProportions& strata, std::size_t n, std::size_t m) {
  if (strata.probs.size() != m) {
    throw ConfigError("variance_design: " + std::to_string(strata.probs.size()) +
                      " strata for set size " + std::to_string(m));
  }
  if (n < 1 || m < 1) throw ConfigError("variance_design needs n >= 1 and m >= 1");
  double sum = 0.0;
  for (double q : strata.probs) {
    if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("stratum probability outside [0, 1]");
    sum += q * (1.0 - q);
  }
  const double md = static_cast<double>(m);
  return sum / (static_cast<double>(n) * md * md);
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw ConfigError("normal quantile needs prob in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

Interval wald_interval(const RankedSample& sample, double level, bool fallback_variance) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0, 1)");
  const double p_hat = estimate_proportion(sample);
  const std::size_t m = sample.m();
  const std::size_t n = sample.n();
  double var = 0.0;
  if (sample.design.kind == DesignKind::srs) {
    var = p_hat * (1.0 - p_hat) / static_cast<double>(sample.values.size());
  } else if (n >= 2) {
    var = variance_design(StratumProportions::from_sample(sample), n, m);
  } else if (fallback_variance) {
    var = p_hat * (1.0 - p_hat) / static_cast<double>(n * m);
  } else {
    throw ConfigError(
        "per-stratum variance is not estimable from a single cycle (n = 1); "
        "collect n >= 2 cycles or enable the conservative fallback variance");
  }
  const double half = normal_quantile(0.5 + level / 2.0) * std::sqrt(var);
  return {std::max(0.0, p_hat - half), std::min(1.0, p_hat + half)};
}

EfficiencyReport efficiency_report(double var_srs, double var_design,
                                   std::optional<double> mc_stderr, Provenance provenance) {
  if (!(var_srs >= 0.0) || !(var_design >= 0.0)) {
    throw ConfigError("variances must be non-negative");
  }
  EfficiencyReport rep;
  rep.var_srs = var_srs;
  rep.var_design = var_design;
  rep.mc_stderr = mc_stderr;
  rep.provenance = provenance;
  if (var_design > 0.0) {
    rep.re = var_srs / var_design;
  } else if (var_srs > 0.0) {
    rep.re = std::numeric_limits<double>::infinity();
    rep.flag = EfficiencyReport::Flag::infinite_re;
  } else {
    rep.re = std::numeric_limits<double>::quiet_NaN();
    rep.flag = EfficiencyReport::Flag::degenerate;
  }
  rep.pssr = var_srs > 0.0 ? (1.0 - var_design / var_srs) * 100.0
                           : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

nlohmann::json to_json(const EfficiencyReport& report) {
  auto num = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  return {
      {"var_srs", num(report.var_srs)},
      {"var_design", num(report.var_design)},
      {"re", num(report.re)},
      {"pssr", num(report.pssr)},
      {"mc_stderr", report.mc_stderr ? num(*report.mc_stderr) : nlohmann::json(nullptr)},
      {"provenance", to_string(report.provenance)},
  };
}

}  // namespace msrss
