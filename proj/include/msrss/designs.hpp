#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "msrss/core.hpp"

namespace msrss {

/// Per-cycle identification cap for MSRSS (m^(r+1) units).
inline constexpr std::size_t kDefaultUnitCap = 10'000'000;

/// Measured binary values X_[i]j, stored rank-major (m rows by n cycles).
struct RankedSample {
  DesignSpec design;
  std::vector<std::uint8_t> values;
  std::size_t units_identified = 0;

  std::size_t m() const { return design.m; }
  std::size_t n() const { return design.n; }
  std::size_t units_quantified() const { return values.size(); }
  /// 0-based rank i and cycle j.
  std::uint8_t at(std::size_t i, std::size_t j) const { return values[i * design.n + j]; }
};

/// Reusable per-thread workspace for drawing one MSRSS cycle at a time.
///
/// A cycle identifies m^(r+1) units, shuffles them into a random partition
/// of m^r sets of size m, and applies r rounds of selection: within each
/// consecutive group of m sets, the k-th set is ranked and its k-th judgment
/// order statistic kept. The m survivors, in stratum order, are measured.
class MsrssCycleSampler {
 public:
  MsrssCycleSampler(PopulationModel pop, RankingStrategy strategy, std::size_t m, std::size_t r,
                    std::size_t unit_cap = kDefaultUnitCap);

  std::size_t m() const { return m_; }
  std::size_t r() const { return r_; }
  std::size_t units_per_cycle() const { return units_.size(); }

  /// Writes the m measured responses (stratum 1..m) into `out`.
  void draw_cycle(Rng& rng, std::span<std::uint8_t> out);

 private:
  PopulationModel pop_;
  RankingStrategy strategy_;
  std::size_t m_;
  std::size_t r_;
  std::vector<Unit> units_;
  std::vector<Unit> next_;
  std::vector<std::size_t> order_;
  std::vector<double> keys_;
};

RankedSample draw_srs(const PopulationModel& pop, std::size_t N, Rng& rng);
RankedSample draw_rss(const PopulationModel& pop, std::size_t m, std::size_t n,
                      const RankingStrategy& strategy, Rng& rng);
RankedSample draw_msrss(const PopulationModel& pop, std::size_t m, std::size_t r, std::size_t n,
                        const RankingStrategy& strategy, Rng& rng,
                        std::size_t unit_cap = kDefaultUnitCap);

/// Flat CSV: `stage_r,rank_i,cycle_j,value` (1-based; stage 0 for SRS).
void write_sample_csv(const RankedSample& sample, std::ostream& out);
/// Reads the flat CSV back. Every (rank, cycle) cell must appear exactly once.
RankedSample read_sample_csv(std::istream& in);

}  // namespace msrss
