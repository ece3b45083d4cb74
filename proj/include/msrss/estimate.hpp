#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "msrss/designs.hpp"

namespace msrss {

/// Success probabilities of the m judgment order statistics.
struct StratumProportions {
  enum class Source { empirical, exact_oracle };
  std::vector<double> probs;
  Source source = Source::empirical;

  /// Per-stratum means of a sample: (1/n) sum_j X_[i]j.
  static StratumProportions from_sample(const RankedSample& sample);
};

enum class Provenance { exact, monte_carlo };
std::string to_string(Provenance p);

struct EfficiencyReport {
  enum class Flag { none, infinite_re, degenerate };

  double var_srs = 0.0;
  double var_design = 0.0;
  double re = 0.0;
  double pssr = 0.0;
  /// Standard error of `re` when var_design was estimated by simulation.
  std::optional<double> mc_stderr;
  Provenance provenance = Provenance::exact;
  Flag flag = Flag::none;

  /// Standard error of `pssr` by the delta method (100 se(RE) / RE^2).
  std::optional<double> pssr_stderr() const;
};

/// Mean of all measured values.
double estimate_proportion(const RankedSample& sample);

/// p(1-p)/N.
double variance_srs(double p, std::size_t N);

/// sum_i p_i(1-p_i) / (n m^2).
double variance_design(const StratumProportions& strata, std::size_t n, std::size_t m);

/// Standard normal quantile.
double normal_quantile(double prob);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wald interval from per-stratum plug-in variances, clipped to [0, 1].
///
/// With n = 1 the per-stratum variances cannot be estimated; unless
/// `fallback_variance` is set this throws. The fallback uses p(1-p)/(nm),
/// which never understates the design variance.
Interval wald_interval(const RankedSample& sample, double level, bool fallback_variance = false);

EfficiencyReport efficiency_report(double var_srs, double var_design,
                                   std::optional<double> mc_stderr = std::nullopt,
                                   Provenance provenance = Provenance::exact);

/// Exactly `var_srs, var_design, re, pssr, mc_stderr, provenance`;
/// non-finite values become null.
nlohmann::json to_json(const EfficiencyReport& report);

}  // namespace msrss
