#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "msrss/data.hpp"
#include "msrss/designs.hpp"
#include "msrss/error.hpp"
#include "msrss/estimate.hpp"
#include "msrss/mc.hpp"
#include "msrss/oracle.hpp"

namespace py = pybind11;
using namespace msrss;

namespace {

RankingStrategy make_strategy(const std::string& ranking, double lambda) {
  if (ranking == "perfect") return RankingStrategy::perfect();
  if (ranking == "random") return RankingStrategy::random();
  if (ranking == "dell-clutter") return RankingStrategy::dell_clutter(lambda);
  throw ConfigError("unknown ranking '" + ranking + "'");
}

py::dict report_dict(const EfficiencyReport& rep) {
  py::dict d;
  d["var_srs"] = rep.var_srs;
  d["var_design"] = rep.var_design;
  d["re"] = rep.re;
  d["pssr"] = rep.pssr;
  d["mc_stderr"] = rep.mc_stderr ? py::cast(*rep.mc_stderr) : py::none();
  d["provenance"] = to_string(rep.provenance);
  return d;
}

RankedSample sample_from_rows(const std::vector<std::vector<int>>& rows, std::size_t r) {
  if (rows.empty() || rows.front().empty()) throw ConfigError("sample must have m >= 1 rows and n >= 1 cycles");
  const std::size_t m = rows.size(), n = rows.front().size();
  RankedSample sample;
  sample.design = r == 0 ? DesignSpec::rss(m, n) : DesignSpec::msrss(m, r, n);
  for (const auto& row : rows) {
    if (row.size() != n) throw ConfigError("every rank must have the same number of cycles");
    for (int v : row) {
      if (v != 0 && v != 1) throw ConfigError("sample values must be 0 or 1");
      sample.values.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return sample;
}

}  // namespace

PYBIND11_MODULE(_msrss, mod) {
  mod.doc() = "Rank-based sampling designs for binary data";
  mod.attr("__version__") = MSRSS_VERSION;

  py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(mod, "DataError", PyExc_ValueError);

  mod.def("msrss_strata", [](double p, std::size_t m, std::size_t r) { return msrss_strata(p, m, r).probs; },
          py::arg("p"), py::arg("m"), py::arg("r"),
          "Exact P(stratum i measures a success) under perfect ranking.");

  mod.def("exact_efficiency",
          [](double p, std::size_t m, std::size_t r) { return report_dict(exact_efficiency(p, m, r)); },
          py::arg("p"), py::arg("m"), py::arg("r"));

  mod.def(
      "simulate_efficiency",
      [](double p, std::size_t m, std::size_t r, const std::string& ranking, double lambda,
         std::size_t reps, std::uint64_t seed, std::size_t workers) {
        const PointSpec spec{PopulationModel::bernoulli(p), make_strategy(ranking, lambda), m, r};
        SimulationOptions opts;
        opts.replications = reps;
        opts.seed = seed;
        opts.workers = workers;
        EfficiencyReport rep;
        {
          py::gil_scoped_release release;
          rep = simulate_efficiency(spec, opts);
        }
        return report_dict(rep);
      },
      py::arg("p"), py::arg("m"), py::arg("r"), py::arg("ranking") = "dell-clutter",
      py::arg("lam") = 1.0, py::arg("reps") = 100'000, py::arg("seed") = 0, py::arg("workers") = 0);

  mod.def(
      "draw_msrss",
      [](double p, std::size_t m, std::size_t r, std::size_t n, const std::string& ranking, double lambda,
         std::uint64_t seed) {
        Rng rng(seed, 0);
        const auto sample =
            draw_msrss(PopulationModel::bernoulli(p), m, r, n, make_strategy(ranking, lambda), rng);
        std::vector<std::vector<int>> rows(m, std::vector<int>(n));
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) rows[i][j] = sample.at(i, j);
        }
        return rows;
      },
      py::arg("p"), py::arg("m"), py::arg("r"), py::arg("n"), py::arg("ranking") = "perfect",
      py::arg("lam") = 1.0, py::arg("seed") = 0,
      "Measured values as m rank rows of n cycles.");

  mod.def(
      "estimate_proportion",
      [](const std::vector<std::vector<int>>& rows, std::size_t r) {
        return estimate_proportion(sample_from_rows(rows, r));
      },
      py::arg("rows"), py::arg("r") = 1);

  mod.def(
      "wald_interval",
      [](const std::vector<std::vector<int>>& rows, std::size_t r, double level, bool fallback) {
        const auto iv = wald_interval(sample_from_rows(rows, r), level, fallback);
        return py::make_tuple(iv.lo, iv.hi);
      },
      py::arg("rows"), py::arg("r") = 1, py::arg("level") = 0.95, py::arg("fallback_variance") = false);

  mod.def(
      "load_csv",
      [](const std::filesystem::path& path, const std::vector<std::string>& covariates,
         const std::string& response, const std::string& success) {
        ColumnMapping mapping;
        mapping.response_column = response;
        mapping.success_label = success;
        mapping.covariate_columns = covariates;
        const auto ds = load_csv(path, mapping);
        py::dict out;
        out["n_rows"] = ds.n_rows();
        out["p"] = population_proportion(ds);
        py::dict rho;
        for (const auto& name : covariates) rho[py::str(name)] = spearman(ds, name);
        out["spearman"] = rho;
        out["dropped_rows"] = ds.provenance().dropped_rows;
        return out;
      },
      py::arg("path"), py::arg("covariates"), py::arg("response") = "class",
      py::arg("success") = "malignant");

  mod.def(
      "spearman",
      [](const std::vector<double>& a, const std::vector<double>& b) { return spearman(a, b); },
      py::arg("a"), py::arg("b"));
}
