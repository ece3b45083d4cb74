#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "msrss/designs.hpp"
#include "msrss/estimate.hpp"

namespace msrss {

struct SimulationOptions {
  std::size_t replications = 100'000;
  std::uint64_t seed = 0;
  /// 0 selects default_workers().
  std::size_t workers = 0;
  /// Cycles per simulated sample; efficiency does not depend on it.
  std::size_t cycles = 1;
  std::size_t unit_cap = kDefaultUnitCap;
};

/// MSRSS_WORKERS if set, otherwise the hardware concurrency.
std::size_t default_workers();

/// One simulated configuration.
struct PointSpec {
  PopulationModel population;
  RankingStrategy strategy;
  std::size_t m = 3;
  std::size_t r = 1;

  /// Stable id derived from the configuration (not its position in a grid);
  /// together with the seed it selects the random streams.
  std::uint64_t id(std::size_t cycles) const;
};

struct SimulationOutcome {
  EfficiencyReport report;
  /// Mean and sample variance (ddof 1) of the estimator over replications.
  double mean = 0.0;
  double variance = 0.0;
  std::size_t replications = 0;
  double elapsed_seconds = 0.0;
};

/// Per-replication estimates, in replication order.
std::vector<double> simulate_estimates(const PointSpec& point, const SimulationOptions& options);

SimulationOutcome simulate_point(const PointSpec& point, const SimulationOptions& options);

/// The report of simulate_point: var_design is the sample variance of the
/// estimator, var_srs the closed form, mc_stderr the delta-method error of RE.
EfficiencyReport simulate_efficiency(const PointSpec& point, const SimulationOptions& options);

/// Delta-method standard error of the sample variance of `values`.
double variance_stderr(const std::vector<double>& values);

enum class RankingModel { perfect, random, dell_clutter };

struct SimulationConfig {
  std::vector<double> p_values;
  std::vector<std::size_t> m_values;
  std::vector<std::size_t> r_values;
  /// Used by the Dell-Clutter model; ignored otherwise.
  std::vector<double> lambdas{1.0};
  RankingModel ranking = RankingModel::dell_clutter;
  SimulationOptions options;

  /// Throws ConfigError on an empty or out-of-range grid.
  void validate() const;

  /// Perfect-ranking grid of the published PSSR table.
  static SimulationConfig table1(std::size_t replications = 100'000);
  /// The lambda, m, r, p grid behind the efficiency curves.
  static SimulationConfig figures(std::size_t replications = 100'000);
};

struct SweepRow {
  double p = 0.0;
  std::size_t m = 0;
  std::size_t r = 0;
  std::optional<double> lambda;
  std::string covariate;
  std::optional<SimulationOutcome> outcome;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t replications = 0;
};

/// Evaluates every grid point in (m, r, lambda, p) order. A failing point is
/// recorded in its row and the sweep continues.
SweepResult run_sweep(const SimulationConfig& config);

struct DatasetSweepConfig {
  std::shared_ptr<const Dataset> dataset;
  std::vector<std::string> covariates;
  std::vector<std::size_t> m_values;
  std::vector<std::size_t> r_values;
  SimulationOptions options;
};

/// Covariate-ranked sweep over (covariate, m, r); var_srs uses the dataset's p.
SweepResult dataset_sweep(const DatasetSweepConfig& config);

/// `p,m,r,lambda,covariate,re,pssr,stderr,reps`.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

/// Long-format curve data: `figure,m,r,lambda,covariate,p,re,stderr`.
void write_plot_data(const SweepResult& result, std::ostream& out);

nlohmann::json sweep_to_json(const SweepResult& result, bool include_timing);

std::string format_number(double value);

}  // namespace msrss
