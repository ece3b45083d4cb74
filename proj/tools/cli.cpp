#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "msrss/data.hpp"
#include "msrss/designs.hpp"
#include "msrss/error.hpp"
#include "msrss/estimate.hpp"
#include "msrss/mc.hpp"
#include "msrss/oracle.hpp"

namespace msrss::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  std::string output;
  std::string format;
  bool omit_timing = false;
};

/// What a subcommand produces; rendered with the metadata record on top.
struct Document {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  double elapsed = 0.0;
  std::string csv;
  ordered_json json;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

ordered_json metadata(const Document& doc, const CommonOptions& common) {
  ordered_json meta;
  meta["version"] = MSRSS_VERSION;
  meta["command"] = doc.command;
  meta["seed"] = doc.seed;
  meta["config_hash"] = hex64(fnv1a64(doc.config.dump()));
  if (!common.omit_timing) {
    meta["timestamp"] = utc_timestamp();
    meta["elapsed_s"] = doc.elapsed;
  }
  return meta;
}

std::string csv_header(const Document& doc, const CommonOptions& common) {
  std::ostringstream os;
  const ordered_json meta = metadata(doc, common);
  for (const auto& [key, value] : meta.items()) {
    os << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump())
       << '\n';
  }
  return os.str();
}

std::string render(const Document& doc, const CommonOptions& common, const std::string& format) {
  if (format == "json") {
    ordered_json out;
    out["metadata"] = metadata(doc, common);
    for (const auto& [key, value] : doc.json.items()) out[key] = value;
    return out.dump(2) + "\n";
  }
  return csv_header(doc, common) + doc.csv;
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    fallback.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open output file " + path);
  file << text;
  if (!file) throw DataError("failed writing " + path);
}

void add_common(CLI::App& sub, CommonOptions& common) {
  sub.add_option("--seed", common.seed, "RNG seed (generated and recorded when omitted)");
  sub.add_option("--workers", common.workers,
                 "Worker threads; 0 uses MSRSS_WORKERS or the hardware concurrency");
  sub.add_option("-o,--output", common.output, "Output file (default stdout)");
  sub.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub.add_flag("--omit-timing", common.omit_timing,
               "Leave timestamp and elapsed time out of the metadata");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string csv_sweep(const SweepResult& result) {
  std::ostringstream os;
  write_sweep_csv(result, os);
  return os.str();
}

std::size_t failed_rows(const SweepResult& result, std::ostream& err) {
  std::size_t failed = 0;
  for (const auto& row : result.rows) {
    if (row.outcome) continue;
    ++failed;
    err << "msrss: point p=" << format_number(row.p) << " m=" << row.m << " r=" << row.r
        << (row.covariate.empty() ? "" : " covariate=" + row.covariate) << " failed: " << row.error
        << '\n';
  }
  return failed;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::vector<double> p;
  std::vector<std::size_t> m;
  std::vector<std::size_t> r;
  std::vector<double> lambda;
  std::string ranking = "dell-clutter";
  std::size_t reps = 100'000;
  std::size_t cycles = 1;
  std::size_t unit_cap = kDefaultUnitCap;
  bool table1 = false;
  bool figures = false;
  std::string plot_data;
};

RankingModel parse_ranking(const std::string& name) {
  if (name == "perfect") return RankingModel::perfect;
  if (name == "random") return RankingModel::random;
  return RankingModel::dell_clutter;
}

int cmd_simulate(const SimulateArgs& a, const CLI::App& sub, const CommonOptions& common,
                 Document& doc, std::ostream& err) {
  if (a.table1 && a.figures) throw ConfigError("--table1 and --figures are exclusive");
  SimulationConfig config;
  if (a.table1) config = SimulationConfig::table1(a.reps);
  if (a.figures) config = SimulationConfig::figures(a.reps);
  if (!a.p.empty()) config.p_values = a.p;
  if (!a.m.empty()) config.m_values = a.m;
  if (!a.r.empty()) config.r_values = a.r;
  if (!a.lambda.empty()) config.lambdas = a.lambda;
  if (!(a.table1 || a.figures) || sub.count("--ranking")) config.ranking = parse_ranking(a.ranking);
  config.options.replications = a.reps;
  config.options.seed = doc.seed;
  config.options.workers = common.workers;
  config.options.cycles = a.cycles;
  config.options.unit_cap = a.unit_cap;
  if (config.p_values.empty()) throw ConfigError("simulate needs --p values or a preset");
  config.validate();

  doc.config["p"] = config.p_values;
  doc.config["m"] = config.m_values;
  doc.config["r"] = config.r_values;
  doc.config["ranking"] = a.ranking;
  if (config.ranking == RankingModel::dell_clutter) doc.config["lambda"] = config.lambdas;
  doc.config["reps"] = config.options.replications;
  doc.config["cycles"] = config.options.cycles;

  const auto start = std::chrono::steady_clock::now();
  const SweepResult result = run_sweep(config);
  doc.elapsed = seconds_since(start);

  doc.csv = csv_sweep(result);
  doc.json["rows"] = sweep_to_json(result, !common.omit_timing);
  if (!a.plot_data.empty()) {
    std::ostringstream plot;
    write_plot_data(result, plot);
    Document plot_doc = doc;
    plot_doc.csv = plot.str();
    write_text(a.plot_data, render(plot_doc, common, "csv"), err);
  }
  return failed_rows(result, err) ? kExitRuntime : kExitOk;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  std::vector<double> p;
  std::vector<std::size_t> m;
  std::vector<std::size_t> r;
  bool strata = false;
};

std::string flag_name(EfficiencyReport::Flag flag) {
  switch (flag) {
    case EfficiencyReport::Flag::infinite_re:
      return "infinite_re";
    case EfficiencyReport::Flag::degenerate:
      return "degenerate";
    case EfficiencyReport::Flag::none:
      break;
  }
  return "";
}

int cmd_oracle(const OracleArgs& a, Document& doc) {
  for (double p : a.p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p values must lie in [0, 1]");
  }
  for (auto m : a.m) {
    if (m < 1) throw ConfigError("m values must be >= 1");
  }
  for (auto r : a.r) {
    if (r < 1) throw ConfigError("r values must be >= 1");
  }
  doc.config["p"] = a.p;
  doc.config["m"] = a.m;
  doc.config["r"] = a.r;
  doc.config["strata"] = a.strata;

  const auto start = std::chrono::steady_clock::now();
  std::ostringstream csv;
  ordered_json rows = ordered_json::array();
  csv << (a.strata ? "p,m,r,stratum,prob\n" : "p,m,r,var_srs,var_msrss,re,pssr,flag\n");
  for (auto m : a.m) {
    for (auto r : a.r) {
      for (double p : a.p) {
        if (a.strata) {
          const auto strata = msrss_strata(p, m, r);
          for (std::size_t i = 0; i < m; ++i) {
            csv << format_number(p) << ',' << m << ',' << r << ',' << i + 1 << ','
                << format_number(strata.probs[i]) << '\n';
          }
          rows.push_back({{"p", p}, {"m", m}, {"r", r}, {"probs", strata.probs}});
          continue;
        }
        const auto report = exact_efficiency(p, m, r);
        csv << format_number(p) << ',' << m << ',' << r << ',' << format_number(report.var_srs)
            << ',' << format_number(report.var_design) << ',' << format_number(report.re) << ','
            << format_number(report.pssr) << ',' << flag_name(report.flag) << '\n';
        ordered_json row = {{"p", p}, {"m", m}, {"r", r}};
        row["report"] = to_json(report);
        row["flag"] = flag_name(report.flag).empty() ? ordered_json(nullptr)
                                                     : ordered_json(flag_name(report.flag));
        rows.push_back(std::move(row));
      }
    }
  }
  doc.elapsed = seconds_since(start);
  doc.csv = csv.str();
  doc.json["rows"] = std::move(rows);
  return kExitOk;
}

// ---------------------------------------------------------------- dataset

struct DatasetArgs {
  std::string csv;
  std::string config;
  std::string response;
  std::string success;
  std::string failure;
  std::vector<std::string> covariates;
  std::string missing;
  std::vector<std::size_t> m{3, 4, 5};
  std::vector<std::size_t> r{1, 2, 3, 4};
  std::size_t reps = 100'000;
  std::string summary;
  std::string plot_data;
};

ordered_json summarize(const Dataset& ds, const DatasetArgs& a, const ColumnMapping& mapping,
                       MissingPolicy policy) {
  ordered_json out;
  const auto base = dataset_summary(ds);
  out["n_rows"] = base["n_rows"];
  out["p"] = base["p"];
  out["spearman"] = base["spearman"];
  out["raw_rows"] = ds.provenance().raw_rows;
  out["dropped_rows"] = ds.provenance().dropped_rows;
  if (ds.provenance().dropped_rows == 0 || policy != MissingPolicy::drop) return out;

  // Pairwise-complete correlations, reported when they differ from the
  // listwise ones above.
  ordered_json pairwise;
  bool differs = false;
  for (const auto& [name, column] : ds.covariates()) {
    ColumnMapping single = mapping;
    single.covariate_columns = {name};
    const Dataset pair = load_csv(a.csv, single, MissingPolicy::drop);
    nlohmann::json rho = nullptr;
    try {
      rho = spearman(pair, name);
    } catch (const Error&) {
    }
    pairwise[name] = rho;
    if (rho != base["spearman"][name]) differs = true;
  }
  if (differs) out["spearman_pairwise"] = pairwise;
  return out;
}

int cmd_dataset(const DatasetArgs& a, const CommonOptions& common, Document& doc,
                std::ostream& err) {
  ColumnMapping mapping;
  MissingPolicy policy = MissingPolicy::drop;
  if (!a.config.empty()) {
    const auto file = read_mapping_file(a.config);
    mapping = file.mapping;
    policy = file.missing;
  }
  if (!a.response.empty()) mapping.response_column = a.response;
  if (!a.success.empty()) mapping.success_label = a.success;
  if (!a.failure.empty()) mapping.failure_label = a.failure;
  if (!a.missing.empty()) policy = parse_missing_policy(a.missing);
  const std::vector<std::string> sweep_covariates =
      a.covariates.empty() ? mapping.covariate_columns : a.covariates;
  if (sweep_covariates.empty()) throw ConfigError("dataset needs --covariate or a mapping file");
  for (const auto& c : a.covariates) {
    auto& cols = mapping.covariate_columns;
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
  }

  const auto ds = std::make_shared<const Dataset>(load_csv(a.csv, mapping, policy));

  doc.config["mapping"] = {{"response", mapping.response_column},
                           {"success", mapping.success_label},
                           {"failure", mapping.failure_label},
                           {"covariates", mapping.covariate_columns}};
  doc.config["missing"] = policy == MissingPolicy::drop ? "drop" : "error";
  doc.config["dataset_rows"] = ds->n_rows();
  doc.config["covariates"] = sweep_covariates;
  doc.config["m"] = a.m;
  doc.config["r"] = a.r;
  doc.config["reps"] = a.reps;

  const auto start = std::chrono::steady_clock::now();
  if (!a.summary.empty()) {
    Document summary_doc = doc;
    summary_doc.json = summarize(*ds, a, mapping, policy);
    write_text(a.summary, render(summary_doc, common, "json"), err);
  }

  DatasetSweepConfig config;
  config.dataset = ds;
  config.covariates = sweep_covariates;
  config.m_values = a.m;
  config.r_values = a.r;
  config.options.replications = a.reps;
  config.options.seed = doc.seed;
  config.options.workers = common.workers;
  const SweepResult result = dataset_sweep(config);
  doc.elapsed = seconds_since(start);

  doc.csv = csv_sweep(result);
  doc.json["rows"] = sweep_to_json(result, !common.omit_timing);
  if (!a.plot_data.empty()) {
    std::ostringstream plot;
    write_plot_data(result, plot);
    Document plot_doc = doc;
    plot_doc.csv = plot.str();
    write_text(a.plot_data, render(plot_doc, common, "csv"), err);
  }
  return failed_rows(result, err) ? kExitRuntime : kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string sample;
  double level = 0.95;
  bool fallback = false;
};

int cmd_estimate(const EstimateArgs& a, Document& doc) {
  std::ifstream in(a.sample);
  if (!in) throw DataError("cannot open sample file " + a.sample);
  const RankedSample sample = read_sample_csv(in);
  doc.config["sample_cells"] = sample.values.size();
  doc.config["level"] = a.level;
  doc.config["fallback_variance"] = a.fallback;

  const auto start = std::chrono::steady_clock::now();
  const double p_hat = estimate_proportion(sample);
  const Interval ci = wald_interval(sample, a.level, a.fallback);
  doc.elapsed = seconds_since(start);

  const std::string design = to_string(sample.design.kind);
  const bool srs = sample.design.kind == DesignKind::srs;
  const std::string variance = srs ? "srs" : sample.n() >= 2 ? "stratified" : "fallback";
  const std::size_t r = srs ? 0 : sample.design.r;
  doc.json["design"] = design;
  doc.json["m"] = sample.m();
  doc.json["r"] = r;
  doc.json["n"] = sample.n();
  doc.json["p_hat"] = p_hat;
  doc.json["level"] = a.level;
  doc.json["lo"] = ci.lo;
  doc.json["hi"] = ci.hi;
  doc.json["variance"] = variance;

  std::ostringstream csv;
  csv << "design,m,r,n,p_hat,level,lo,hi,variance\n"
      << design << ',' << sample.m() << ',' << r << ',' << sample.n() << ','
      << format_number(p_hat) << ',' << format_number(a.level) << ',' << format_number(ci.lo)
      << ',' << format_number(ci.hi) << ',' << variance << '\n';
  doc.csv = csv.str();
  return kExitOk;
}

// ---------------------------------------------------------------- plan

struct PlanArgs {
  double half_width = 0.0;
  double level = 0.95;
  double p = 0.5;
  std::size_t m = 3;
  std::size_t r = 1;
  double lambda = 1.0;
  std::size_t reps = 20'000;
};

/// Smallest count n with z sqrt(v / n) <= h. Any interval for a proportion
/// has half-width at most 0.5, so h >= 0.5 needs a single unit.
std::size_t required_count(double z, double v, double h) {
  if (h >= 0.5) return 1;
  const double n = z * z * v / (h * h);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(n - 1e-9)));
}

int cmd_plan(const PlanArgs& a, const CommonOptions& common, Document& doc) {
  if (!(a.half_width > 0.0)) throw ConfigError("--half-width must be > 0");
  if (!(a.level > 0.0 && a.level < 1.0)) throw ConfigError("--level must lie in (0, 1)");
  if (!(a.p > 0.0 && a.p < 1.0)) throw ConfigError("--p must lie in (0, 1)");
  if (a.m < 1 || a.r < 1) throw ConfigError("--m and --r must be >= 1");
  if (!(a.lambda >= 0.0 && a.lambda <= 1.0)) throw ConfigError("--lambda must lie in [0, 1]");
  doc.config["half_width"] = a.half_width;
  doc.config["level"] = a.level;
  doc.config["p"] = a.p;
  doc.config["m"] = a.m;
  doc.config["r"] = a.r;
  doc.config["lambda"] = a.lambda;
  if (a.lambda < 1.0) doc.config["reps"] = a.reps;

  const auto start = std::chrono::steady_clock::now();
  const double z = normal_quantile(0.5 + a.level / 2.0);
  const double unit_var = a.p * (1.0 - a.p);
  double cycle_var = 0.0;
  Provenance provenance = Provenance::exact;
  if (a.lambda == 1.0) {
    cycle_var = variance_design(msrss_strata(a.p, a.m, a.r).proportions(), 1, a.m);
  } else {
    SimulationOptions options;
    options.replications = a.reps;
    options.seed = doc.seed;
    options.workers = common.workers;
    const PointSpec point{PopulationModel::bernoulli(a.p), RankingStrategy::dell_clutter(a.lambda),
                          a.m, a.r};
    cycle_var = simulate_point(point, options).variance;
    provenance = Provenance::monte_carlo;
  }
  const std::size_t n_srs = required_count(z, unit_var, a.half_width);
  const std::size_t n_msrss = required_count(z, cycle_var, a.half_width);
  const double pssr = 100.0 * (1.0 - cycle_var / (unit_var / static_cast<double>(a.m)));
  const double savings =
      100.0 * (1.0 - static_cast<double>(n_msrss * a.m) / static_cast<double>(n_srs));
  doc.elapsed = seconds_since(start);

  std::ostringstream csv;
  csv << "design,m,r,lambda,n,N,var_n1,pssr,savings_pct,provenance\n";
  csv << "srs,1,,," << n_srs << ',' << n_srs << ',' << format_number(unit_var) << ",,,exact\n";
  csv << "msrss," << a.m << ',' << a.r << ',' << format_number(a.lambda) << ',' << n_msrss << ','
      << n_msrss * a.m << ',' << format_number(cycle_var) << ',' << format_number(pssr) << ','
      << format_number(savings) << ',' << to_string(provenance) << '\n';
  doc.csv = csv.str();

  doc.json["z"] = z;
  doc.json["srs"] = {{"n", n_srs}, {"N", n_srs}, {"var_n1", unit_var}};
  doc.json["msrss"] = {{"m", a.m},         {"r", a.r},
                       {"lambda", a.lambda}, {"n", n_msrss},
                       {"N", n_msrss * a.m}, {"var_n1", cycle_var},
                       {"provenance", to_string(provenance)}};
  doc.json["pssr"] = pssr;
  doc.json["savings_pct"] = savings;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ranked set sampling designs for binary data", "msrss"};
  app.set_version_flag("--version", std::string(MSRSS_VERSION));
  app.require_subcommand(1);

  CommonOptions common;

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo efficiency sweep");
  simulate->add_option("--p", sim.p, "Population proportions")->expected(1, -1);
  simulate->add_option("--m", sim.m, "Set sizes")->expected(1, -1);
  simulate->add_option("--r", sim.r, "Stage counts")->expected(1, -1);
  simulate->add_option("--lambda", sim.lambda, "Dell-Clutter correlations")->expected(1, -1);
  simulate->add_option("--ranking", sim.ranking, "Ranking model")
      ->check(CLI::IsMember({"dell-clutter", "perfect", "random"}));
  simulate->add_option("--reps", sim.reps, "Replications per grid point");
  simulate->add_option("--cycles", sim.cycles, "Cycles per simulated sample");
  simulate->add_option("--unit-cap", sim.unit_cap, "Largest m^(r+1) allowed per cycle");
  simulate->add_flag("--table1", sim.table1, "Perfect-ranking PSSR table grid");
  simulate->add_flag("--figures", sim.figures, "RE curve grid (lambda 0.7, 0.85, 1)");
  simulate->add_option("--plot-data", sim.plot_data, "Also write long-format curve data here");
  add_common(*simulate, common);

  OracleArgs ora;
  auto* oracle = app.add_subcommand("oracle", "Exact perfect-ranking efficiency");
  oracle->add_option("--p", ora.p, "Population proportions")->expected(1, -1)->required();
  oracle->add_option("--m", ora.m, "Set sizes")->expected(1, -1)->required();
  oracle->add_option("--r", ora.r, "Stage counts")->expected(1, -1)->required();
  oracle->add_flag("--strata", ora.strata, "Emit stratum probabilities instead");
  add_common(*oracle, common);

  DatasetArgs dat;
  auto* dataset = app.add_subcommand("dataset", "Covariate-ranked sweep over a CSV population");
  dataset->add_option("--csv", dat.csv, "Dataset CSV with header")->required();
  dataset->add_option("--config", dat.config, "Column mapping file (key = value lines)");
  dataset->add_option("--response", dat.response, "Response column");
  dataset->add_option("--success", dat.success, "Label counted as success");
  dataset->add_option("--failure", dat.failure, "Label counted as failure");
  dataset->add_option("--covariate", dat.covariates, "Ranking covariates")->expected(1, -1);
  dataset->add_option("--missing", dat.missing, "Missing-value policy")
      ->check(CLI::IsMember({"drop", "error"}));
  dataset->add_option("--m", dat.m, "Set sizes")->expected(1, -1);
  dataset->add_option("--r", dat.r, "Stage counts")->expected(1, -1);
  dataset->add_option("--reps", dat.reps, "Replications per grid point");
  dataset->add_option("--summary", dat.summary, "Write the dataset summary JSON here");
  dataset->add_option("--plot-data", dat.plot_data, "Also write long-format curve data here");
  add_common(*dataset, common);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Proportion estimate and Wald interval");
  estimate->add_option("--sample", est.sample, "Sample CSV (stage_r,rank_i,cycle_j,value)")
      ->required();
  estimate->add_option("--level", est.level, "Confidence level");
  estimate->add_flag("--fallback-variance", est.fallback,
                     "With one cycle, use p(1-p)/(nm) as the variance");
  add_common(*estimate, common);

  PlanArgs pla;
  auto* plan = app.add_subcommand("plan", "Sample sizes for a target interval half-width");
  plan->add_option("--half-width", pla.half_width, "Target half-width")->required();
  plan->add_option("--level", pla.level, "Confidence level");
  plan->add_option("--p", pla.p, "Guess of the proportion")->required();
  plan->add_option("--m", pla.m, "Set size");
  plan->add_option("--r", pla.r, "Stages");
  plan->add_option("--lambda", pla.lambda, "Dell-Clutter correlation (1 = perfect ranking)");
  plan->add_option("--reps", pla.reps, "Replications for calibrating lambda < 1");
  add_common(*plan, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Document doc;
  doc.seed = common.seed ? *common.seed : fresh_seed();
  doc.config["seed"] = doc.seed;
  std::string format = common.format.empty() ? "csv" : common.format;
  try {
    int code = kExitOk;
    doc.command = simulate->parsed()   ? "simulate"
                  : oracle->parsed()   ? "oracle"
                  : dataset->parsed()  ? "dataset"
                  : estimate->parsed() ? "estimate"
                                       : "plan";
    doc.config["command"] = doc.command;
    if (simulate->parsed()) {
      code = cmd_simulate(sim, *simulate, common, doc, err);
    } else if (oracle->parsed()) {
      code = cmd_oracle(ora, doc);
    } else if (dataset->parsed()) {
      code = cmd_dataset(dat, common, doc, err);
    } else if (estimate->parsed()) {
      if (common.format.empty()) format = "json";
      code = cmd_estimate(est, doc);
    } else {
      code = cmd_plan(pla, common, doc);
    }
    write_text(common.output, render(doc, common, format), out);
    if (!common.seed) err << "msrss: seed=" << doc.seed << '\n';
    return code;
  } catch (const ConfigError& e) {
    err << "msrss: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "msrss: error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace msrss::cli
