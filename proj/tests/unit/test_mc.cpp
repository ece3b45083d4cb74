#include <cmath>
#include <memory>
#include <sstream>

#include "doctest.h"
#include "msrss/mc.hpp"
#include "msrss/oracle.hpp"

using namespace msrss;

namespace {

SimulationOptions opts(std::size_t reps, std::uint64_t seed, std::size_t workers = 1) {
  SimulationOptions o;
  o.replications = reps;
  o.seed = seed;
  o.workers = workers;
  return o;
}

PointSpec bern(double p, RankingStrategy s, std::size_t m, std::size_t r) {
  return PointSpec{PopulationModel::bernoulli(p), std::move(s), m, r};
}

}  // namespace

TEST_SUITE("mc") {
  TEST_CASE("perfect ranking efficiency at m = 3") {
    const auto rep = simulate_efficiency(bern(0.5, RankingStrategy::dell_clutter(1.0), 3, 1),
                                         opts(100'000, 31));
    CHECK(std::abs(rep.re - 1.597) <= 0.03);
    CHECK(rep.provenance == Provenance::monte_carlo);
    REQUIRE(rep.mc_stderr);
    CHECK(std::abs(rep.re - 1.6) <= 3 * *rep.mc_stderr);
  }

  TEST_CASE("random ranking gives no gain") {
    const auto rep = simulate_efficiency(bern(0.5, RankingStrategy::dell_clutter(0.0), 3, 1),
                                         opts(100'000, 32));
    CHECK(std::abs(rep.re - 1.0) <= 0.03);
  }

  TEST_CASE("four-stage efficiency at m = 5") {
    const auto rep = simulate_efficiency(bern(0.5, RankingStrategy::perfect(), 5, 4), opts(20'000, 33));
    CHECK(std::abs(rep.pssr - 76.9) <= 1.0);
  }

  TEST_CASE("delta-method error matches the spread of repeated runs") {
    const auto point = bern(0.3, RankingStrategy::perfect(), 3, 1);
    std::vector<double> res;
    double se = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto rep = simulate_efficiency(point, opts(4'000, 1000 + seed));
      res.push_back(rep.re);
      se += *rep.mc_stderr / 40;
    }
    double mean = 0, var = 0;
    for (double v : res) mean += v / 40;
    for (double v : res) var += (v - mean) * (v - mean) / 39;
    CHECK(std::sqrt(var) / se == doctest::Approx(1.0).epsilon(0.3));
  }

  TEST_CASE("results do not depend on worker count") {
    const auto point = bern(0.3, RankingStrategy::dell_clutter(0.85), 3, 2);
    const auto a = simulate_estimates(point, opts(5'000, 7, 1));
    const auto b = simulate_estimates(point, opts(5'000, 7, 3));
    const auto c = simulate_estimates(point, opts(5'000, 7, 8));
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a != simulate_estimates(point, opts(5'000, 8, 1)));
  }

  TEST_CASE("different points use different streams") {
    const auto a = simulate_estimates(bern(0.3, RankingStrategy::perfect(), 3, 1), opts(100, 7));
    const auto b = simulate_estimates(bern(0.3, RankingStrategy::random(), 3, 1), opts(100, 7));
    CHECK(a != b);
    CHECK(bern(0.3, RankingStrategy::perfect(), 3, 1).id(1) !=
          bern(0.3, RankingStrategy::perfect(), 3, 1).id(2));
  }

  TEST_CASE("simulation rejects degenerate input") {
    CHECK_THROWS_AS(simulate_efficiency(bern(0.0, RankingStrategy::perfect(), 3, 1), opts(100, 1)),
                    ConfigError);
    CHECK_THROWS_AS(simulate_efficiency(bern(0.5, RankingStrategy::perfect(), 3, 1), opts(1, 1)),
                    ConfigError);
    auto big = opts(10, 1);
    big.unit_cap = 100;
    CHECK_THROWS_AS(simulate_efficiency(bern(0.5, RankingStrategy::perfect(), 5, 3), big),
                    ConfigError);
  }

  TEST_CASE("variance stderr on a known sample") {
    std::vector<double> v;
    for (int k = 0; k < 1000; ++k) v.push_back(k % 2);
    // Var(S^2) for a fair coin: (mu4 - sigma^4 (R-3)/(R-1)) / R with mu4 = sigma^4 = 1/16
    const double R = 1000;
    const double s2 = 0.25 * R / (R - 1);
    const double expect = std::sqrt((0.0625 - s2 * s2 * (R - 3) / (R - 1)) / R);
    CHECK(variance_stderr(v) == doctest::Approx(expect));
  }

  TEST_CASE("sweep over one point equals simulate_efficiency") {
    SimulationConfig c;
    c.p_values = {0.4};
    c.m_values = {3};
    c.r_values = {2};
    c.lambdas = {0.7};
    c.options = opts(3'000, 5);
    const auto sweep = run_sweep(c);
    REQUIRE(sweep.rows.size() == 1);
    REQUIRE(sweep.rows[0].outcome);
    const auto direct = simulate_efficiency(bern(0.4, RankingStrategy::dell_clutter(0.7), 3, 2),
                                            opts(3'000, 5));
    CHECK(sweep.rows[0].outcome->report.re == direct.re);
    CHECK(*sweep.rows[0].outcome->report.mc_stderr == *direct.mc_stderr);
  }

  TEST_CASE("sweep grid order and failure isolation") {
    SimulationConfig c;
    c.p_values = {0.0, 0.5};
    c.m_values = {2, 3};
    c.r_values = {1};
    c.ranking = RankingModel::perfect;
    c.options = opts(200, 5);
    const auto sweep = run_sweep(c);
    REQUIRE(sweep.rows.size() == 4);
    CHECK(sweep.rows[0].m == 2);
    CHECK(sweep.rows[0].p == 0.0);
    CHECK_FALSE(sweep.rows[0].outcome);
    CHECK_FALSE(sweep.rows[0].error.empty());
    CHECK(sweep.rows[1].outcome);
    CHECK(sweep.rows[3].m == 3);
    CHECK_FALSE(sweep.rows[3].lambda);
    std::ostringstream csv;
    write_sweep_csv(sweep, csv);
    CHECK(csv.str().rfind("p,m,r,lambda,covariate,re,pssr,stderr,reps\n0,2,1,,,nan,nan,nan,0\n", 0) == 0);
  }

  TEST_CASE("sweep config validation") {
    SimulationConfig c;
    CHECK_THROWS_AS(run_sweep(c), ConfigError);
    c.p_values = {0.5};
    c.m_values = {3};
    c.r_values = {1};
    c.options.replications = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.options.replications = 10;
    c.lambdas = {1.2};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.lambdas = {};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.ranking = RankingModel::perfect;
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("presets") {
    const auto t = SimulationConfig::table1(10);
    CHECK(t.p_values.size() * t.m_values.size() * t.r_values.size() * t.lambdas.size() == 60);
    CHECK(t.options.replications == 10);
    const auto f = SimulationConfig::figures();
    CHECK(f.lambdas == std::vector<double>{0.7, 0.85, 1.0});
    CHECK(f.options.replications == 100'000);
    CHECK(f.p_values.front() == doctest::Approx(0.05));
    CHECK(f.p_values.back() == doctest::Approx(0.95));
  }

  TEST_CASE("dataset sweep with a constant covariate") {
    std::vector<std::uint8_t> resp;
    std::vector<double> ties, good;
    for (int k = 0; k < 40; ++k) {
      resp.push_back(k % 3 == 0);
      ties.push_back(1.0);
      good.push_back(k % 3 == 0 ? 5.0 + k % 2 : 1.0 + k % 4);
    }
    DatasetSweepConfig c;
    c.dataset = std::make_shared<const Dataset>(
        resp, std::vector<std::pair<std::string, std::vector<double>>>{{"flat", ties}, {"good", good}});
    c.covariates = {"flat", "good"};
    c.m_values = {3};
    c.r_values = {1, 2};
    c.options = opts(40'000, 9);
    const auto sweep = dataset_sweep(c);
    REQUIRE(sweep.rows.size() == 4);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& rep = sweep.rows[k].outcome->report;
      CHECK(sweep.rows[k].covariate == "flat");
      CHECK(std::abs(rep.re - 1.0) <= 3 * *rep.mc_stderr);
    }
    // A perfectly separating covariate behaves like perfect ranking.
    const auto& good1 = sweep.rows[2].outcome->report;
    CHECK(std::abs(good1.re - exact_efficiency(14.0 / 40, 3, 1).re) <= 3 * *good1.mc_stderr);
    CHECK(sweep.rows[0].p == doctest::Approx(14.0 / 40));
  }

  TEST_CASE("dataset sweep rejects unknown covariates") {
    DatasetSweepConfig c;
    c.dataset = std::make_shared<const Dataset>(
        std::vector<std::uint8_t>{0, 1},
        std::vector<std::pair<std::string, std::vector<double>>>{{"Y", {1, 2}}});
    c.covariates = {"Z"};
    c.m_values = {3};
    c.r_values = {1};
    CHECK_THROWS_AS(dataset_sweep(c), ConfigError);
  }

  TEST_CASE("plot data and json output") {
    SimulationConfig c;
    c.p_values = {0.3};
    c.m_values = {3};
    c.r_values = {1};
    c.lambdas = {1.0};
    c.options = opts(500, 1);
    const auto sweep = run_sweep(c);
    std::ostringstream plot;
    write_plot_data(sweep, plot);
    CHECK(plot.str().rfind("figure,m,r,lambda,covariate,p,re,stderr\nre_vs_p_m3,3,1,1,,0.3,", 0) == 0);
    const auto j = sweep_to_json(sweep, false);
    CHECK(j.size() == 1);
    CHECK(j[0]["report"]["provenance"] == "monte-carlo");
    CHECK_FALSE(j[0].contains("elapsed_seconds"));
    CHECK(sweep_to_json(sweep, true)[0].contains("elapsed_seconds"));
  }

  TEST_CASE("format_number") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 3) == "0.3333333333");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(INFINITY) == "inf");
  }
}
