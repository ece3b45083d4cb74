#include "msrss/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace msrss {

namespace {

constexpr std::size_t kChunk = 512;

std::uint64_t double_bits(double v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof bits);
  return bits;
}

std::uint64_t dataset_fingerprint(const Dataset& ds) {
  std::uint64_t h = fnv1a64("dataset");
  auto mix = [&](std::uint64_t v) { h = splitmix64(h ^ v); };
  mix(ds.n_rows());
  for (auto v : ds.response()) mix(v);
  for (const auto& [name, column] : ds.covariates()) {
    mix(fnv1a64(name));
    for (double v : column) mix(double_bits(v));
  }
  return h;
}

}  // namespace

std::size_t default_workers() {
  if (const char* env = std::getenv("MSRSS_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::uint64_t PointSpec::id(std::size_t cycles) const {
  std::ostringstream os;
  os << "m=" << m << ";r=" << r << ";n=" << cycles << ";rank=" << strategy.describe() << ";pop=";
  if (population.is_dataset()) {
    os << "dataset:" << dataset_fingerprint(population.data());
  } else {
    os << "bernoulli:" << double_bits(population.proportion());
  }
  return fnv1a64(os.str());
}

std::vector<double> simulate_estimates(const PointSpec& point, const SimulationOptions& options) {
  if (options.replications < 2) throw ConfigError("need at least 2 replications");
  if (options.cycles < 1) throw ConfigError("need at least 1 cycle per sample");
  const double p = point.population.proportion();
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("degenerate population proportion p = " + format_number(p) +
                      "; efficiency is undefined");
  }
  // Validates the point before any thread starts.
  MsrssCycleSampler probe(point.population, point.strategy, point.m, point.r, options.unit_cap);

  const std::size_t reps = options.replications;
  const std::size_t chunks = (reps + kChunk - 1) / kChunk;
  const std::size_t workers =
      std::clamp<std::size_t>(options.workers ? options.workers : default_workers(), 1, chunks);
  const std::uint64_t id = point.id(options.cycles);
  const double measured = static_cast<double>(point.m * options.cycles);

  std::vector<double> estimates(reps);
  std::atomic<std::size_t> next_chunk{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    try {
      MsrssCycleSampler sampler = probe;
      std::vector<std::uint8_t> cycle(point.m);
      for (;;) {
        const std::size_t c = next_chunk.fetch_add(1);
        if (c >= chunks) break;
        const std::size_t end = std::min(reps, (c + 1) * kChunk);
        for (std::size_t t = c * kChunk; t < end; ++t) {
          Rng rng = replication_stream(options.seed, id, t);
          std::size_t ones = 0;
          for (std::size_t j = 0; j < options.cycles; ++j) {
            sampler.draw_cycle(rng, cycle);
            for (auto v : cycle) ones += v;
          }
          estimates[t] = static_cast<double>(ones) / measured;
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_chunk.store(chunks);
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return estimates;
}

double variance_stderr(const std::vector<double>& values) {
  const double R = static_cast<double>(values.size());
  if (values.size() < 4) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= R;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  const double s2 = m2 / (R - 1.0);
  m4 /= R;
  const double var_s2 = (m4 - s2 * s2 * (R - 3.0) / (R - 1.0)) / R;
  return std::sqrt(std::max(0.0, var_s2));
}

SimulationOutcome simulate_point(const PointSpec& point, const SimulationOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto estimates = simulate_estimates(point, options);

  // Serial reduction in replication order keeps results independent of workers.
  const double R = static_cast<double>(estimates.size());
  double mean = 0.0;
  for (double v : estimates) mean += v;
  mean /= R;
  double ss = 0.0;
  for (double v : estimates) ss += (v - mean) * (v - mean);
  const double var_design = ss / (R - 1.0);

  const double var_srs = variance_srs(point.population.proportion(), point.m * options.cycles);
  const double se_var = variance_stderr(estimates);
  std::optional<double> se_re;
  if (var_design > 0.0) se_re = var_srs * se_var / (var_design * var_design);

  SimulationOutcome out;
  out.report = efficiency_report(var_srs, var_design, se_re, Provenance::monte_carlo);
  out.mean = mean;
  out.variance = var_design;
  out.replications = estimates.size();
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

EfficiencyReport simulate_efficiency(const PointSpec& point, const SimulationOptions& options) {
  return simulate_point(point, options).report;
}

void SimulationConfig::validate() const {
  if (p_values.empty()) throw ConfigError("grid needs at least one p value");
  if (m_values.empty()) throw ConfigError("grid needs at least one m value");
  if (r_values.empty()) throw ConfigError("grid needs at least one r value");
  if (ranking == RankingModel::dell_clutter && lambdas.empty()) {
    throw ConfigError("grid needs at least one lambda value");
  }
  if (options.replications < 2) throw ConfigError("replications must be >= 2");
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p values must lie in [0, 1]");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("lambda values must lie in [0, 1]");
  }
  for (auto m : m_values) {
    if (m < 1) throw ConfigError("m values must be >= 1");
  }
  for (auto r : r_values) {
    if (r < 1) throw ConfigError("r values must be >= 1");
  }
}

SimulationConfig SimulationConfig::table1(std::size_t replications) {
  SimulationConfig c;
  c.p_values = {0.1, 0.25, 0.5, 0.75, 0.9};
  c.m_values = {3, 4, 5};
  c.r_values = {1, 2, 3, 4};
  c.lambdas = {1.0};
  c.ranking = RankingModel::dell_clutter;
  c.options.replications = replications;
  return c;
}

SimulationConfig SimulationConfig::figures(std::size_t replications) {
  SimulationConfig c;
  for (int k = 1; k <= 19; ++k) c.p_values.push_back(0.05 * k);
  c.m_values = {3, 4, 5};
  c.r_values = {1, 2, 3, 4};
  c.lambdas = {0.7, 0.85, 1.0};
  c.ranking = RankingModel::dell_clutter;
  c.options.replications = replications;
  return c;
}

namespace {

void run_row(SweepRow& row, const PointSpec& point, const SimulationOptions& options) {
  try {
    row.outcome = simulate_point(point, options);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
}

}  // namespace

SweepResult run_sweep(const SimulationConfig& config) {
  config.validate();
  SweepResult result;
  result.replications = config.options.replications;
  std::vector<std::optional<double>> lambdas;
  if (config.ranking == RankingModel::dell_clutter) {
    for (double l : config.lambdas) lambdas.emplace_back(l);
  } else {
    lambdas.emplace_back(std::nullopt);
  }
  for (auto m : config.m_values) {
    for (auto r : config.r_values) {
      for (const auto& lambda : lambdas) {
        for (double p : config.p_values) {
          SweepRow row;
          row.p = p;
          row.m = m;
          row.r = r;
          row.lambda = lambda;
          try {
            const auto strategy = config.ranking == RankingModel::perfect ? RankingStrategy::perfect()
                                  : config.ranking == RankingModel::random
                                      ? RankingStrategy::random()
                                      : RankingStrategy::dell_clutter(*lambda);
            run_row(row, PointSpec{PopulationModel::bernoulli(p), strategy, m, r},
                    config.options);
          } catch (const std::exception& e) {
            row.error = e.what();
          }
          result.rows.push_back(std::move(row));
        }
      }
    }
  }
  return result;
}

SweepResult dataset_sweep(const DatasetSweepConfig& config) {
  if (!config.dataset) throw ConfigError("dataset sweep needs a dataset");
  if (config.covariates.empty()) throw ConfigError("dataset sweep needs at least one covariate");
  if (config.m_values.empty() || config.r_values.empty()) {
    throw ConfigError("dataset sweep needs m and r values");
  }
  for (const auto& c : config.covariates) {
    if (!config.dataset->has_covariate(c)) {
      throw ConfigError("dataset has no covariate column '" + c + "'");
    }
  }
  const auto pop = PopulationModel::dataset(config.dataset);
  SweepResult result;
  result.replications = config.options.replications;
  for (const auto& covariate : config.covariates) {
    for (auto m : config.m_values) {
      for (auto r : config.r_values) {
        SweepRow row;
        row.p = pop.proportion();
        row.m = m;
        row.r = r;
        row.covariate = covariate;
        run_row(row, PointSpec{pop, RankingStrategy::covariate(covariate), m, r}, config.options);
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "p,m,r,lambda,covariate,re,pssr,stderr,reps\n";
  for (const auto& row : result.rows) {
    out << format_number(row.p) << ',' << row.m << ',' << row.r << ','
        << (row.lambda ? format_number(*row.lambda) : "") << ',' << row.covariate << ',';
    if (row.outcome) {
      const auto& rep = row.outcome->report;
      out << format_number(rep.re) << ',' << format_number(rep.pssr) << ','
          << (rep.mc_stderr ? format_number(*rep.mc_stderr) : "nan") << ','
          << row.outcome->replications;
    } else {
      out << "nan,nan,nan,0";
    }
    out << '\n';
  }
}

void write_plot_data(const SweepResult& result, std::ostream& out) {
  out << "figure,m,r,lambda,covariate,p,re,stderr\n";
  for (const auto& row : result.rows) {
    if (!row.outcome) continue;
    const auto& rep = row.outcome->report;
    const std::string figure =
        row.covariate.empty() ? "re_vs_p_m" + std::to_string(row.m) : "re_dataset";
    out << figure << ',' << row.m << ',' << row.r << ','
        << (row.lambda ? format_number(*row.lambda) : "") << ',' << row.covariate << ','
        << format_number(row.p) << ',' << format_number(rep.re) << ','
        << (rep.mc_stderr ? format_number(*rep.mc_stderr) : "nan") << '\n';
  }
}

nlohmann::json sweep_to_json(const SweepResult& result, bool include_timing) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json j = {{"p", row.p}, {"m", row.m}, {"r", row.r}};
    j["lambda"] = row.lambda ? nlohmann::json(*row.lambda) : nlohmann::json(nullptr);
    j["covariate"] = row.covariate.empty() ? nlohmann::json(nullptr) : nlohmann::json(row.covariate);
    if (row.outcome) {
      j["report"] = to_json(row.outcome->report);
      j["reps"] = row.outcome->replications;
      j["mean"] = row.outcome->mean;
      if (include_timing) j["elapsed_seconds"] = row.outcome->elapsed_seconds;
    } else {
      j["error"] = row.error;
    }
    rows.push_back(std::move(j));
  }
  return rows;
}

}  // namespace msrss
