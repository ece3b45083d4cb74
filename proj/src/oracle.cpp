#include "msrss/oracle.hpp"

namespace msrss {

namespace {

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
}

void check_p(const Rational& p) {
  if (p < 0 || p > 1) throw ConfigError("p must lie in [0, 1]");
}

}  // namespace

ExactStrata stage1_strata(double p, std::size_t m) {
  check_p(p);
  return {p, m, 1, binomial_order_statistic_probs(p, m)};
}

ExactStrata msrss_strata(double p, std::size_t m, std::size_t r) {
  check_p(p);
  return {p, m, r, stage_probs(p, m, r)};
}

std::vector<Rational> msrss_strata_exact(const Rational& p, std::size_t m, std::size_t r) {
  check_p(p);
  return stage_probs(p, m, r);
}

double poisson_binomial_tail(std::span<const double> probs, std::size_t k) {
  for (double q : probs) {
    if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("Bernoulli probabilities must lie in [0, 1]");
  }
  return poisson_binomial_tail<double>(probs, k);
}

EfficiencyReport exact_efficiency(double p, std::size_t m, std::size_t r) {
  const auto strata = msrss_strata(p, m, r);
  return efficiency_report(variance_srs(p, m), variance_design(strata.proportions(), 1, m),
                           std::nullopt, Provenance::exact);
}

ExactStrata brute_force_enumerate(double p, std::size_t m, std::size_t r) {
  check_p(p);
  return {p, m, r, enumerate_stage_probs(p, m, r)};
}

std::vector<Rational> brute_force_enumerate_exact(const Rational& p, std::size_t m,
                                                  std::size_t r) {
  check_p(p);
  return enumerate_stage_probs(p, m, r);
}

}  // namespace msrss
