#pragma once

// Exact stratum probabilities under perfect ranking.
//
// The i-th order statistic of m independent Bernoulli(q_1..q_m) variables is
// 1 exactly when at least m-i+1 of them are 1. At stage 1 the q's are all p
// (a binomial tail); at stage s the m units of a set are the stage-(s-1)
// strata 1..m, so their order statistics follow Poisson-binomial tails.
//
// With binary responses, perfect ranking leaves ties among equal values. The
// value carried by the k-th position does not depend on how ties are broken,
// so the enumerator below sorts by response alone.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "msrss/error.hpp"
#include "msrss/estimate.hpp"

namespace msrss {

using Rational = boost::multiprecision::cpp_rational;

/// Enumeration is limited to m^(r+1) <= 20 identified units.
inline constexpr std::size_t kMaxEnumeratedUnits = 20;

struct ExactStrata {
  double p = 0.0;
  std::size_t m = 0;
  std::size_t r = 0;
  std::vector<double> probs;

  StratumProportions proportions() const {
    return {probs, StratumProportions::Source::exact_oracle};
  }
};

/// pmf[k] = P(sum of independent Bernoulli(probs) = k), k = 0..size.
template <class Real>
std::vector<Real> poisson_binomial_pmf(std::span<const Real> probs) {
  std::vector<Real> pmf(probs.size() + 1, Real(0));
  pmf[0] = Real(1);
  for (std::size_t t = 0; t < probs.size(); ++t) {
    const Real& q = probs[t];
    for (std::size_t k = t + 1; k > 0; --k) pmf[k] = pmf[k] * (Real(1) - q) + pmf[k - 1] * q;
    pmf[0] = pmf[0] * (Real(1) - q);
  }
  return pmf;
}

/// P(sum >= k); defined for 0 <= k <= size + 1.
template <class Real>
Real poisson_binomial_tail(std::span<const Real> probs, std::size_t k) {
  if (k > probs.size() + 1) throw ConfigError("poisson_binomial_tail: k exceeds size + 1");
  const auto pmf = poisson_binomial_pmf(probs);
  Real tail(0);
  for (std::size_t j = k; j < pmf.size(); ++j) tail += pmf[j];
  return tail;
}

/// probs[i] = P(Binomial(m, p) >= m - i), i = 0..m-1 (0-based stratum).
template <class Real>
std::vector<Real> binomial_order_statistic_probs(const Real& p, std::size_t m) {
  if (m < 1) throw ConfigError("set size must be >= 1");
  // pmf by binomial coefficients, independent of the Poisson-binomial DP.
  std::vector<Real> pmf(m + 1);
  Real coef(1);
  for (std::size_t k = 0; k <= m; ++k) {
    Real term = coef;
    for (std::size_t a = 0; a < k; ++a) term *= p;
    for (std::size_t a = k; a < m; ++a) term *= (Real(1) - p);
    pmf[k] = term;
    coef = coef * Real(m - k) / Real(k + 1);
  }
  std::vector<Real> out(m);
  Real tail(0);
  for (std::size_t i = 0; i < m; ++i) {
    tail += pmf[m - i];
    out[i] = std::min(tail, Real(1));
  }
  return out;
}

template <class Real>
std::vector<Real> stage_probs(const Real& p, std::size_t m, std::size_t r) {
  if (r < 1) throw ConfigError("stage r must be >= 1");
  std::vector<Real> probs = binomial_order_statistic_probs(p, m);
  for (std::size_t stage = 2; stage <= r; ++stage) {
    const auto pmf = poisson_binomial_pmf(std::span<const Real>(probs));
    std::vector<Real> next(m);
    Real tail(0);
    for (std::size_t i = 0; i < m; ++i) {
      tail += pmf[m - i];
      next[i] = std::min(tail, Real(1));
    }
    probs = std::move(next);
  }
  return probs;
}

/// Runs the perfect-ranking MSRSS selection on every 0/1 assignment of the
/// m^(r+1) identified units and weights each outcome by p^ones (1-p)^zeros.
template <class Real>
std::vector<Real> enumerate_stage_probs(const Real& p, std::size_t m, std::size_t r) {
  if (m < 1 || r < 1) throw ConfigError("enumeration needs m >= 1 and r >= 1");
  std::size_t units = 1;
  for (std::size_t e = 0; e <= r; ++e) {
    units *= m;
    if (units > kMaxEnumeratedUnits) {
      throw ConfigError("enumeration limited to m^(r+1) <= " +
                        std::to_string(kMaxEnumeratedUnits) + " units");
    }
  }
  // hits[i][ones]: assignments with `ones` successes whose stratum i is 1.
  std::vector<std::vector<std::uint64_t>> hits(m, std::vector<std::uint64_t>(units + 1, 0));
  std::vector<std::uint8_t> current(units), next(units), set(m);
  const std::uint64_t total = std::uint64_t{1} << units;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::size_t ones = 0;
    for (std::size_t u = 0; u < units; ++u) {
      current[u] = static_cast<std::uint8_t>((mask >> u) & 1U);
      ones += current[u];
    }
    std::size_t size = units;
    for (std::size_t stage = 0; stage < r; ++stage) {
      const std::size_t sets = size / m;
      for (std::size_t s = 0; s < sets; ++s) {
        std::copy_n(current.begin() + static_cast<std::ptrdiff_t>(s * m), m, set.begin());
        std::sort(set.begin(), set.end());
        next[s] = set[s % m];
      }
      std::swap(current, next);
      size = sets;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (current[i]) ++hits[i][ones];
    }
  }
  std::vector<Real> pow_p(units + 1, Real(1)), pow_q(units + 1, Real(1));
  for (std::size_t k = 1; k <= units; ++k) {
    pow_p[k] = pow_p[k - 1] * p;
    pow_q[k] = pow_q[k - 1] * (Real(1) - p);
  }
  std::vector<Real> probs(m, Real(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k <= units; ++k) {
      if (hits[i][k]) probs[i] += Real(hits[i][k]) * pow_p[k] * pow_q[units - k];
    }
  }
  return probs;
}

/// Means and covariances of the order statistics of independent
/// Bernoulli(probs), by enumerating all 2^size outcomes.
template <class Real>
struct OrderStatisticMoments {
  std::vector<Real> mean;
  std::vector<std::vector<Real>> cov;
};

template <class Real>
OrderStatisticMoments<Real> order_statistic_moments(std::span<const Real> probs) {
  const std::size_t size = probs.size();
  if (size < 1 || size > kMaxEnumeratedUnits) {
    throw ConfigError("order_statistic_moments: size must be in [1, 20]");
  }
  OrderStatisticMoments<Real> out;
  out.mean.assign(size, Real(0));
  std::vector<std::vector<Real>> second(size, std::vector<Real>(size, Real(0)));
  std::vector<std::uint8_t> values(size);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << size); ++mask) {
    Real weight(1);
    for (std::size_t t = 0; t < size; ++t) {
      values[t] = static_cast<std::uint8_t>((mask >> t) & 1U);
      weight *= values[t] ? probs[t] : Real(1) - probs[t];
    }
    std::sort(values.begin(), values.end());
    for (std::size_t i = 0; i < size; ++i) {
      if (!values[i]) continue;
      out.mean[i] += weight;
      for (std::size_t j = 0; j < size; ++j) {
        if (values[j]) second[i][j] += weight;
      }
    }
  }
  out.cov.assign(size, std::vector<Real>(size, Real(0)));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) out.cov[i][j] = second[i][j] - out.mean[i] * out.mean[j];
  }
  return out;
}

ExactStrata stage1_strata(double p, std::size_t m);
ExactStrata msrss_strata(double p, std::size_t m, std::size_t r);
std::vector<Rational> msrss_strata_exact(const Rational& p, std::size_t m, std::size_t r);

double poisson_binomial_tail(std::span<const double> probs, std::size_t k);

/// Canonical n = 1: var_srs = p(1-p)/m. p in {0, 1} gives a flagged
/// degenerate report.
EfficiencyReport exact_efficiency(double p, std::size_t m, std::size_t r);

ExactStrata brute_force_enumerate(double p, std::size_t m, std::size_t r);
std::vector<Rational> brute_force_enumerate_exact(const Rational& p, std::size_t m,
                                                  std::size_t r);

}  // namespace msrss
