#include "msrss/designs.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace msrss {

MsrssCycleSampler::MsrssCycleSampler(PopulationModel pop, RankingStrategy strategy, std::size_t m,
                                     std::size_t r, std::size_t unit_cap)
    : pop_(std::move(pop)), strategy_(std::move(strategy)), m_(m), r_(r) {
  if (m < 1 || r < 1) throw ConfigError("MSRSS needs m >= 1 and r >= 1");
  strategy_.validate_for(pop_);
  const std::size_t units = checked_power(m, r + 1, unit_cap);
  if (units == 0) {
    throw ConfigError("m^(r+1) units per cycle exceeds the cap of " + std::to_string(unit_cap) +
                      " (m=" + std::to_string(m) + ", r=" + std::to_string(r) + ")");
  }
  units_.resize(units);
  next_.resize(units / m);
  order_.resize(m);
  keys_.resize(m);
}

void MsrssCycleSampler::draw_cycle(Rng& rng, std::span<std::uint8_t> out) {
  fill_units(pop_, strategy_, rng, units_);
  std::shuffle(units_.begin(), units_.end(), rng);

  std::span<Unit> current(units_);
  std::span<Unit> spare(next_);
  for (std::size_t stage = 0; stage < r_; ++stage) {
    const std::size_t sets = current.size() / m_;
    for (std::size_t s = 0; s < sets; ++s) {
      const auto set = current.subspan(s * m_, m_);
      const std::size_t wanted = s % m_;
      rank_set_into(set, strategy_, rng, order_, keys_);
      spare[s] = set[order_[wanted]];
    }
    // The survivors of this stage become the units of the next one.
    current = spare.first(sets);
    spare = (spare.data() == next_.data()) ? std::span<Unit>(units_) : std::span<Unit>(next_);
  }
  for (std::size_t i = 0; i < m_; ++i) out[i] = current[i].response;
}

RankedSample draw_srs(const PopulationModel& pop, std::size_t N, Rng& rng) {
  RankedSample sample{DesignSpec::srs(N), {}, N};
  const auto units = draw_units(pop, RankingStrategy::random(), N, rng);
  sample.values.reserve(N);
  for (const auto& u : units) sample.values.push_back(u.response);
  return sample;
}

namespace {

RankedSample draw_staged(DesignSpec design, const PopulationModel& pop,
                         const RankingStrategy& strategy, Rng& rng, std::size_t unit_cap) {
  MsrssCycleSampler sampler(pop, strategy, design.m, design.r, unit_cap);
  RankedSample sample{design, std::vector<std::uint8_t>(design.m * design.n),
                      sampler.units_per_cycle() * design.n};
  std::vector<std::uint8_t> cycle(design.m);
  for (std::size_t j = 0; j < design.n; ++j) {
    sampler.draw_cycle(rng, cycle);
    for (std::size_t i = 0; i < design.m; ++i) sample.values[i * design.n + j] = cycle[i];
  }
  return sample;
}

}  // namespace

RankedSample draw_rss(const PopulationModel& pop, std::size_t m, std::size_t n,
                      const RankingStrategy& strategy, Rng& rng) {
  return draw_staged(DesignSpec::rss(m, n), pop, strategy, rng, kDefaultUnitCap);
}

RankedSample draw_msrss(const PopulationModel& pop, std::size_t m, std::size_t r, std::size_t n,
                        const RankingStrategy& strategy, Rng& rng, std::size_t unit_cap) {
  return draw_staged(DesignSpec::msrss(m, r, n), pop, strategy, rng, unit_cap);
}

void write_sample_csv(const RankedSample& sample, std::ostream& out) {
  const std::size_t stage = sample.design.kind == DesignKind::srs ? 0 : sample.design.r;
  out << "stage_r,rank_i,cycle_j,value\n";
  for (std::size_t j = 0; j < sample.n(); ++j) {
    for (std::size_t i = 0; i < sample.m(); ++i) {
      out << stage << ',' << (i + 1) << ',' << (j + 1) << ',' << int{sample.at(i, j)} << '\n';
    }
  }
}

RankedSample read_sample_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("sample CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "stage_r,rank_i,cycle_j,value") {
    throw DataError("sample CSV header must be 'stage_r,rank_i,cycle_j,value', got '" + line +
                    "'");
  }
  std::map<std::pair<std::size_t, std::size_t>, std::uint8_t> cells;
  std::size_t stage = 0, m = 0, n = 0, lineno = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    long long s = -1, i = -1, j = -1, v = -1;
    if (!(is >> s >> i >> j >> v) || s < 0 || i < 1 || j < 1) {
      throw DataError("sample CSV line " + std::to_string(lineno) + " is malformed");
    }
    if (v != 0 && v != 1) {
      throw DataError("sample CSV line " + std::to_string(lineno) + ": value must be 0 or 1");
    }
    if (first) {
      stage = static_cast<std::size_t>(s);
      first = false;
    } else if (static_cast<std::size_t>(s) != stage) {
      throw DataError("sample CSV mixes stages");
    }
    const auto key = std::make_pair(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    if (!cells.emplace(key, static_cast<std::uint8_t>(v)).second) {
      throw DataError("sample CSV repeats rank " + std::to_string(i) + ", cycle " +
                      std::to_string(j));
    }
    m = std::max(m, key.first);
    n = std::max(n, key.second);
  }
  if (cells.empty()) throw DataError("sample CSV has no rows");
  if (cells.size() != m * n) {
    throw DataError("sample CSV is incomplete: expected " + std::to_string(m * n) +
                    " cells for m=" + std::to_string(m) + ", n=" + std::to_string(n));
  }
  DesignSpec design = stage == 0   ? DesignSpec::srs(m * n)
                      : stage == 1 ? DesignSpec::rss(m, n)
                                   : DesignSpec::msrss(m, stage, n);
  if (stage == 0) {
    // SRS values are a single column regardless of how they were indexed.
    RankedSample sample{design, {}, m * n};
    for (const auto& [key, v] : cells) sample.values.push_back(v);
    return sample;
  }
  RankedSample sample{design, std::vector<std::uint8_t>(m * n), design.units_identified()};
  for (const auto& [key, v] : cells) sample.values[(key.first - 1) * n + (key.second - 1)] = v;
  return sample;
}

}  // namespace msrss
