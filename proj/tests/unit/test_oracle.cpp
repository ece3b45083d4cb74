#include <cmath>

#include "doctest.h"
#include "msrss/oracle.hpp"

using namespace msrss;

namespace {

Rational q(long a, long b) { return Rational(a) / Rational(b); }

std::vector<Rational> rationals(std::initializer_list<std::pair<long, long>> v) {
  std::vector<Rational> out;
  for (auto [a, b] : v) out.push_back(q(a, b));
  return out;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("first-stage strata examples") {
    CHECK(msrss_strata_exact(q(1, 2), 3, 1) == rationals({{1, 8}, {1, 2}, {7, 8}}));
    CHECK(msrss_strata_exact(q(1, 4), 2, 1) == rationals({{1, 16}, {7, 16}}));
    for (double v : stage1_strata(0.0, 4).probs) CHECK(v == 0.0);
    for (double v : stage1_strata(1.0, 4).probs) CHECK(v == 1.0);
    CHECK_THROWS_AS(stage1_strata(1.5, 3), ConfigError);
  }

  TEST_CASE("poisson-binomial tail examples") {
    const auto probs = rationals({{1, 8}, {1, 2}, {7, 8}});
    CHECK(poisson_binomial_tail<Rational>(probs, 1) == q(121, 128));
    CHECK(poisson_binomial_tail<Rational>(probs, 0) == 1);
    CHECK(poisson_binomial_tail<Rational>(probs, 4) == 0);
    const std::vector<double> zeros{0, 0, 0};
    CHECK(poisson_binomial_tail(std::span<const double>(zeros), 1) == 0.0);
    CHECK_THROWS_AS(poisson_binomial_tail(std::span<const double>(zeros), 5), ConfigError);
    const std::vector<double> bad{0.5, 1.5};
    CHECK_THROWS_AS(poisson_binomial_tail(std::span<const double>(bad), 1), ConfigError);
  }

  TEST_CASE("poisson-binomial pmf against enumeration") {
    const std::vector<double> probs{0.1, 0.7, 0.35, 0.9};
    std::vector<double> pmf(5, 0.0);
    for (int mask = 0; mask < 16; ++mask) {
      double w = 1;
      int k = 0;
      for (int t = 0; t < 4; ++t) {
        const bool one = (mask >> t) & 1;
        w *= one ? probs[t] : 1 - probs[t];
        k += one;
      }
      pmf[k] += w;
    }
    const auto dp = poisson_binomial_pmf(std::span<const double>(probs));
    for (int k = 0; k <= 4; ++k) CHECK(dp[k] == doctest::Approx(pmf[k]).epsilon(1e-14));
  }

  TEST_CASE("second-stage strata examples") {
    CHECK(msrss_strata_exact(q(1, 2), 3, 2) == rationals({{7, 128}, {64, 128}, {121, 128}}));
    CHECK(msrss_strata_exact(q(1, 2), 2, 2) == brute_force_enumerate_exact(q(1, 2), 2, 2));
    for (double p : {0.2, 0.6}) {
      CHECK(msrss_strata(p, 4, 1).probs == stage1_strata(p, 4).probs);
    }
  }

  TEST_CASE("exact efficiency examples") {
    const auto a = exact_efficiency(0.5, 3, 1);
    CHECK(a.pssr == doctest::Approx(37.5).epsilon(1e-12));
    CHECK(a.provenance == Provenance::exact);
    CHECK_FALSE(a.mc_stderr);
    CHECK(exact_efficiency(0.5, 3, 2).pssr == doctest::Approx(52.880859375));
    CHECK(std::abs(exact_efficiency(0.5, 5, 4).pssr - 76.90) <= 1.0);
    const auto deg = exact_efficiency(0.0, 3, 1);
    CHECK(deg.flag == EfficiencyReport::Flag::degenerate);
    CHECK(deg.var_srs == 0.0);
    CHECK(deg.var_design == 0.0);
  }

  TEST_CASE("brute force examples") {
    CHECK(brute_force_enumerate_exact(q(1, 2), 2, 1) == rationals({{1, 4}, {3, 4}}));
    for (double p : {0.1, 0.45}) {
      for (std::size_t r : {1, 2, 3}) {
        const auto one = brute_force_enumerate(p, 1, r).probs;
        REQUIRE(one.size() == 1);
        CHECK(one[0] == doctest::Approx(p));
      }
    }
    CHECK_THROWS_AS(brute_force_enumerate(0.5, 3, 2), ConfigError);
    CHECK_THROWS_AS(brute_force_enumerate(0.5, 5, 1), ConfigError);
  }

  TEST_CASE("recursion equals enumeration exactly") {
    for (auto [m, r] : {std::pair{2, 1}, {3, 1}, {2, 2}, {4, 1}, {2, 3}}) {
      for (auto p : {q(1, 10), q(1, 4), q(1, 2), q(3, 4), q(9, 10), q(1, 3)}) {
        CHECK(msrss_strata_exact(p, m, r) == brute_force_enumerate_exact(p, m, r));
      }
    }
  }

  TEST_CASE("strata average to p exactly") {
    for (int k = 1; k <= 9; ++k) {
      const Rational p = q(k, 10);
      for (std::size_t m = 1; m <= 6; ++m) {
        for (std::size_t r = 1; r <= 5; ++r) {
          const auto probs = msrss_strata_exact(p, m, r);
          Rational sum = 0;
          for (const auto& v : probs) sum += v;
          CHECK(sum / Rational(m) == p);
        }
      }
    }
  }

  TEST_CASE("strata are nondecreasing and symmetric") {
    for (double p : {0.1, 0.3, 0.5, 0.85}) {
      for (std::size_t m = 2; m <= 6; ++m) {
        for (std::size_t r = 1; r <= 4; ++r) {
          const auto a = msrss_strata(p, m, r).probs;
          const auto b = msrss_strata(1 - p, m, r).probs;
          for (std::size_t i = 0; i + 1 < m; ++i) CHECK(a[i] <= a[i + 1]);
          for (std::size_t i = 0; i < m; ++i) CHECK(a[i] == doctest::Approx(1 - b[m - 1 - i]));
        }
      }
    }
  }

  TEST_CASE("design variance strictly decreases with stages") {
    for (int k = 1; k <= 9; ++k) {
      const Rational p = q(k, 10);
      for (std::size_t m = 2; m <= 6; ++m) {
        Rational prev = -1;
        for (std::size_t r = 1; r <= 5; ++r) {
          Rational v = 0;
          for (const auto& s : msrss_strata_exact(p, m, r)) v += s * (1 - s);
          if (r > 1) CHECK(v < prev);
          prev = v;
        }
      }
    }
  }

  TEST_CASE("exact relative efficiency is symmetric in p") {
    for (double p : {0.05, 0.2, 0.35}) {
      for (std::size_t m = 2; m <= 5; ++m) {
        CHECK(exact_efficiency(p, m, 3).re == doctest::Approx(exact_efficiency(1 - p, m, 3).re));
      }
    }
  }

  TEST_CASE("order statistic covariances") {
    for (auto p : {q(1, 2), q(1, 5), q(2, 3)}) {
      const std::vector<Rational> base(3, p);
      const auto mom = order_statistic_moments(std::span<const Rational>(base));
      const auto strata = msrss_strata_exact(p, 3, 1);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(mom.mean[i] == strata[i]);
        for (std::size_t j = i + 1; j < 3; ++j) {
          CHECK(mom.cov[i][j] == strata[i] * (1 - strata[j]));
          CHECK(mom.cov[i][j] >= 0);
        }
      }
      // Stage 2: the set holds the stage-1 strata.
      const auto mom2 = order_statistic_moments(std::span<const Rational>(strata));
      const auto strata2 = msrss_strata_exact(p, 3, 2);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(mom2.mean[i] == strata2[i]);
        for (std::size_t j = i + 1; j < 3; ++j) CHECK(mom2.cov[i][j] == strata2[i] * (1 - strata2[j]));
      }
    }
  }

  TEST_CASE("double and rational routes agree") {
    for (double p : {0.1, 0.25, 0.5}) {
      const auto d = msrss_strata(p, 5, 3).probs;
      const auto e = msrss_strata_exact(Rational(p), 5, 3);
      for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::abs(d[i] - static_cast<double>(e[i])) <= 1e-12);
      }
    }
  }

  TEST_CASE("double route stays inside [0, 1] near saturation") {
    for (double p : {0.01, 0.1, 0.5, 0.9, 0.99}) {
      for (std::size_t m = 1; m <= 6; ++m) {
        for (std::size_t r = 1; r <= 5; ++r) {
          for (double q : msrss_strata(p, m, r).probs) {
            CHECK(q >= 0.0);
            CHECK(q <= 1.0);
          }
          CHECK_NOTHROW(exact_efficiency(p, m, r));
        }
      }
    }
  }
}
