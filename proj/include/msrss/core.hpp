#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "msrss/data.hpp"
#include "msrss/error.hpp"
#include "msrss/random.hpp"

namespace msrss {

/// Source of units: iid Bernoulli(p), or a finite dataset sampled with replacement.
class PopulationModel {
 public:
  struct Bernoulli {
    double p;
  };
  struct Finite {
    std::shared_ptr<const Dataset> data;
  };

  static PopulationModel bernoulli(double p);
  static PopulationModel dataset(std::shared_ptr<const Dataset> data);

  bool is_dataset() const { return std::holds_alternative<Finite>(model_); }
  /// True proportion: p, or the dataset's mean response.
  double proportion() const;
  const Dataset& data() const;
  const std::variant<Bernoulli, Finite>& model() const { return model_; }
  std::string describe() const;

 private:
  explicit PopulationModel(std::variant<Bernoulli, Finite> model) : model_(std::move(model)) {}
  std::variant<Bernoulli, Finite> model_;
  double proportion_ = 0.0;
};

/// How units inside a set are judgment-ordered.
class RankingStrategy {
 public:
  struct Perfect {};
  struct Random {};
  struct DellClutter {
    double lambda;
  };
  struct Covariate {
    std::string column;
  };
  using Kind = std::variant<Perfect, Random, DellClutter, Covariate>;

  static RankingStrategy perfect() { return RankingStrategy(Perfect{}); }
  static RankingStrategy random() { return RankingStrategy(Random{}); }
  static RankingStrategy dell_clutter(double lambda);
  static RankingStrategy covariate(std::string column);

  const Kind& kind() const { return kind_; }
  std::string describe() const;

  /// Throws ConfigError if the strategy cannot rank units of `pop`.
  void validate_for(const PopulationModel& pop) const;

 private:
  explicit RankingStrategy(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

struct Unit {
  std::uint8_t response = 0;
  /// Covariate value Y (Dell-Clutter or dataset column); unused by
  /// perfect and random ranking.
  double score = 0.0;
};

enum class DesignKind { srs, rss, msrss };

std::string to_string(DesignKind kind);

struct DesignSpec {
  DesignKind kind = DesignKind::srs;
  std::size_t m = 1;
  std::size_t r = 1;
  std::size_t n = 1;

  static DesignSpec srs(std::size_t N);
  static DesignSpec rss(std::size_t m, std::size_t n);
  static DesignSpec msrss(std::size_t m, std::size_t r, std::size_t n);

  /// Measured sample size N = m n.
  std::size_t total_size() const { return m * n; }
  /// Units identified per cycle: 1 (SRS, per measured unit), m^2, m^(r+1).
  std::size_t units_per_cycle() const;
  std::size_t units_identified() const;
};

/// m^e, or 0 if it exceeds `limit`.
std::size_t checked_power(std::size_t m, std::size_t e, std::size_t limit);

/// Y = lambda (x - p)/sqrt(p(1-p)) + sqrt(1 - lambda^2) z.
double gen_dell_clutter_score(int x, double p, double lambda, double z);

/// Ascending judgment order of `units`; ties resolved uniformly at random.
std::vector<std::size_t> rank_set(std::span<const Unit> units, const RankingStrategy& strategy,
                                  Rng& rng);

/// Allocation-free form of rank_set. `order.size()` must equal `units.size()`;
/// `keys` is scratch space of the same size.
void rank_set_into(std::span<const Unit> units, const RankingStrategy& strategy, Rng& rng,
                   std::span<std::size_t> order, std::span<double> keys);

/// Identifies `count` units, attaching ranking scores as `strategy` requires.
std::vector<Unit> draw_units(const PopulationModel& pop, const RankingStrategy& strategy,
                             std::size_t count, Rng& rng);
void fill_units(const PopulationModel& pop, const RankingStrategy& strategy, Rng& rng,
                std::span<Unit> out);

}  // namespace msrss
