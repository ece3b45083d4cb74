#include "msrss/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace msrss {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

PopulationModel PopulationModel::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("population proportion must lie in [0, 1], got " + std::to_string(p));
  }
  PopulationModel pop(Bernoulli{p});
  pop.proportion_ = p;
  return pop;
}

PopulationModel PopulationModel::dataset(std::shared_ptr<const Dataset> data) {
  if (!data || data->n_rows() == 0) throw ConfigError("dataset population is empty");
  PopulationModel pop(Finite{data});
  pop.proportion_ = population_proportion(*data);
  return pop;
}

double PopulationModel::proportion() const { return proportion_; }

const Dataset& PopulationModel::data() const {
  if (!is_dataset()) throw ConfigError("population is not a dataset");
  return *std::get<Finite>(model_).data;
}

std::string PopulationModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Bernoulli& b) { os << "bernoulli(" << b.p << ")"; },
                 [&](const Finite& f) {
                   os << "dataset(" << f.data->provenance().source << ",rows=" << f.data->n_rows()
                      << ",p=" << proportion_ << ")";
                 },
             },
             model_);
  return os.str();
}

RankingStrategy RankingStrategy::dell_clutter(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("Dell-Clutter lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  return RankingStrategy(DellClutter{lambda});
}

RankingStrategy RankingStrategy::covariate(std::string column) {
  if (column.empty()) throw ConfigError("covariate ranking needs a column name");
  return RankingStrategy(Covariate{std::move(column)});
}

std::string RankingStrategy::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Perfect&) { os << "perfect"; },
                 [&](const Random&) { os << "random"; },
                 [&](const DellClutter& d) { os << "dell_clutter(" << d.lambda << ")"; },
                 [&](const Covariate& c) { os << "covariate(" << c.column << ")"; },
             },
             kind_);
  return os.str();
}

void RankingStrategy::validate_for(const PopulationModel& pop) const {
  if (const auto* c = std::get_if<Covariate>(&kind_)) {
    if (!pop.is_dataset()) {
      throw ConfigError("covariate ranking requires a dataset population");
    }
    if (!pop.data().has_covariate(c->column)) {
      throw ConfigError("dataset has no covariate column '" + c->column + "'");
    }
  }
  if (std::holds_alternative<DellClutter>(kind_)) {
    const double p = pop.proportion();
    if (p <= 0.0 || p >= 1.0) {
      throw ConfigError("Dell-Clutter ranking is undefined at p = " + std::to_string(p) +
                        " (zero response variance)");
    }
  }
}

std::string to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::srs:
      return "SRS";
    case DesignKind::rss:
      return "RSS";
    case DesignKind::msrss:
      return "MSRSS";
  }
  return "?";
}

DesignSpec DesignSpec::srs(std::size_t N) {
  if (N < 1) throw ConfigError("SRS sample size must be >= 1");
  return {DesignKind::srs, N, 1, 1};
}

DesignSpec DesignSpec::rss(std::size_t m, std::size_t n) {
  if (m < 1 || n < 1) throw ConfigError("RSS needs m >= 1 and n >= 1");
  return {DesignKind::rss, m, 1, n};
}

DesignSpec DesignSpec::msrss(std::size_t m, std::size_t r, std::size_t n) {
  if (m < 1 || r < 1 || n < 1) throw ConfigError("MSRSS needs m >= 1, r >= 1 and n >= 1");
  return {DesignKind::msrss, m, r, n};
}

std::size_t checked_power(std::size_t m, std::size_t e, std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < e; ++k) {
    if (m != 0 && out > limit / m) return 0;
    out *= m;
  }
  return out > limit ? 0 : out;
}

std::size_t DesignSpec::units_per_cycle() const {
  switch (kind) {
    case DesignKind::srs:
      return m;
    case DesignKind::rss:
      return m * m;
    case DesignKind::msrss:
      return checked_power(m, r + 1, std::numeric_limits<std::size_t>::max());
  }
  return 0;
}

std::size_t DesignSpec::units_identified() const { return units_per_cycle() * n; }

double gen_dell_clutter_score(int x, double p, double lambda, double z) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("Dell-Clutter score needs p in (0, 1)");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("Dell-Clutter lambda must lie in [0, 1]");
  }
  const double sigma = std::sqrt(p * (1.0 - p));
  return lambda * (static_cast<double>(x) - p) / sigma + std::sqrt(1.0 - lambda * lambda) * z;
}

void rank_set_into(std::span<const Unit> units, const RankingStrategy& strategy, Rng& rng,
                   std::span<std::size_t> order, std::span<double> keys) {
  const std::size_t size = units.size();
  std::visit(Overloaded{
                 [&](const RankingStrategy::Perfect&) {
                   for (std::size_t k = 0; k < size; ++k) keys[k] = units[k].response;
                 },
                 [&](const RankingStrategy::Random&) {
                   for (std::size_t k = 0; k < size; ++k) {
                     keys[k] = uniform01(rng);
                   }
                 },
                 [&](const auto&) {
                   for (std::size_t k = 0; k < size; ++k) keys[k] = units[k].score;
                 },
             },
             strategy.kind());

  std::iota(order.begin(), order.end(), std::size_t{0});
  // Insertion sort: sets are small (m <= ~10).
  for (std::size_t a = 1; a < size; ++a) {
    const std::size_t idx = order[a];
    std::size_t b = a;
    while (b > 0 && keys[order[b - 1]] > keys[idx]) {
      order[b] = order[b - 1];
      --b;
    }
    order[b] = idx;
  }
  // Exchangeable tie-break: shuffle each run of equal keys.
  std::size_t start = 0;
  while (start < size) {
    std::size_t end = start + 1;
    while (end < size && keys[order[end]] == keys[order[start]]) ++end;
    if (end - start > 1) {
      std::shuffle(order.begin() + static_cast<std::ptrdiff_t>(start),
                   order.begin() + static_cast<std::ptrdiff_t>(end), rng);
    }
    start = end;
  }
}

std::vector<std::size_t> rank_set(std::span<const Unit> units, const RankingStrategy& strategy,
                                  Rng& rng) {
  if (units.empty()) throw ConfigError("cannot rank an empty set");
  std::vector<std::size_t> order(units.size());
  std::vector<double> keys(units.size());
  rank_set_into(units, strategy, rng, order, keys);
  return order;
}

void fill_units(const PopulationModel& pop, const RankingStrategy& strategy, Rng& rng,
                std::span<Unit> out) {
  const auto* dell = std::get_if<RankingStrategy::DellClutter>(&strategy.kind());
  const auto* cov = std::get_if<RankingStrategy::Covariate>(&strategy.kind());

  if (const auto* b = std::get_if<PopulationModel::Bernoulli>(&pop.model())) {
    if (cov) throw ConfigError("covariate ranking requires a dataset population");
    const double p = b->p;
    for (auto& u : out) u.response = uniform01(rng) < p ? 1 : 0;
  } else {
    const Dataset& ds = pop.data();
    if (ds.n_rows() == 0) throw DataError("cannot draw from an empty dataset");
    std::uniform_int_distribution<std::size_t> row(0, ds.n_rows() - 1);
    const auto& response = ds.response();
    const std::vector<double>* column = cov ? &ds.covariate(cov->column) : nullptr;
    for (auto& u : out) {
      const std::size_t k = row(rng);
      u.response = response[k];
      u.score = column ? (*column)[k] : 0.0;
    }
  }

  if (dell) {
    const double p = pop.proportion();
    const double lambda = dell->lambda;
    // Validates p once; per-unit work below is the same affine map.
    const double at_zero = gen_dell_clutter_score(0, p, lambda, 0.0);
    const double at_one = gen_dell_clutter_score(1, p, lambda, 0.0);
    const double noise = std::sqrt(1.0 - lambda * lambda);
    if (noise == 0.0) {
      for (auto& u : out) u.score = u.response ? at_one : at_zero;
    } else {
      std::normal_distribution<double> z;
      for (auto& u : out) u.score = (u.response ? at_one : at_zero) + noise * z(rng);
    }
  }
}

std::vector<Unit> draw_units(const PopulationModel& pop, const RankingStrategy& strategy,
                             std::size_t count, Rng& rng) {
  if (count < 1) throw ConfigError("draw_units needs count >= 1");
  strategy.validate_for(pop);
  std::vector<Unit> units(count);
  fill_units(pop, strategy, rng, units);
  return units;
}

}  // namespace msrss
