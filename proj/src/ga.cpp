#include "cvcov/ga.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cvcov/error.hpp"

namespace cvcov::ga {

void validate(const config& cfg) {
  auto fail = [](const std::string& msg) { throw config_error("ga config: " + msg); };
  if (cfg.pool_size <= 0) fail("pool_size must be positive");
  if (cfg.generations <= 0) fail("generations must be positive");
  if (cfg.best_sample <= 0) fail("best_sample must be positive");
  if (cfg.lucky_few < 0) fail("lucky_few must be non-negative");
  if (cfg.children_per_pair <= 0) fail("children_per_pair must be positive");
  if (cfg.best_sample > cfg.pool_size) fail("best_sample exceeds pool_size");
  const int breeders = cfg.best_sample + cfg.lucky_few;
  if (breeders < 2 || breeders % 2 != 0)
    fail(fmt::format("best_sample + lucky_few = {} must be even and >= 2", breeders));
  if ((breeders / 2) * cfg.children_per_pair != cfg.pool_size)
    fail(fmt::format("{} pairs x {} children != pool_size {}", breeders / 2,
                     cfg.children_per_pair, cfg.pool_size));
  if (!(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0))
    fail("mutation_rate must lie in [0, 1]");
  if (!(cfg.best_score <= cfg.upper_bound)) fail("best_score must not exceed upper_bound");
}

cvss_vector random_vector(random_source& rng) {
  std::array<std::uint8_t, field_count> idx{};
  for (auto f : all_fields)
    idx[static_cast<std::size_t>(f)] = static_cast<std::uint8_t>(rng.index(field_domain(f).size()));
  return cvss_vector::from_indices(idx);
}

double fitness(double base, const config& cfg) {
  return (base >= cfg.best_score && base <= cfg.upper_bound) ? base : out_of_band_fitness;
}

scored_vector evaluate(const cvss_vector& v, const config& cfg) {
  const double base = base_score(v);
  return {v, base, fitness(base, cfg)};
}

std::vector<scored_vector> select_breeders(const std::vector<scored_vector>& pool,
                                           int best_sample, int lucky_few,
                                           random_source& rng) {
  if (pool.empty()) throw config_error("select_breeders: empty pool");
  if (best_sample < 0 || lucky_few < 0)
    throw config_error("select_breeders: negative sample size");
  if (static_cast<std::size_t>(best_sample) > pool.size())
    throw config_error(fmt::format("select_breeders: best_sample {} exceeds pool size {}",
                                   best_sample, pool.size()));

  struct keyed {
    const scored_vector* item;
    std::string key;
  };
  std::vector<keyed> sorted;
  sorted.reserve(pool.size());
  for (const auto& s : pool) sorted.push_back({&s, s.vector.to_string()});
  std::stable_sort(sorted.begin(), sorted.end(), [](const keyed& a, const keyed& b) {
    if (a.item->fitness != b.item->fitness) return a.item->fitness < b.item->fitness;
    return a.key < b.key;
  });

  std::vector<scored_vector> out;
  out.reserve(best_sample + lucky_few);
  for (int i = 0; i < best_sample; ++i) out.push_back(*sorted[i].item);
  for (int i = 0; i < lucky_few; ++i) out.push_back(*sorted[rng.index(sorted.size())].item);
  return out;
}

cvss_vector crossover(const cvss_vector& a, const cvss_vector& b, random_source& rng) {
  std::array<std::uint8_t, field_count> idx{};
  for (auto f : all_fields)
    idx[static_cast<std::size_t>(f)] = rng.unit() < 0.5 ? a.index(f) : b.index(f);
  return cvss_vector::from_indices(idx);
}

cvss_vector mutate(const cvss_vector& v, random_source& rng) {
  const auto f = all_fields[rng.index(field_count)];
  const auto i = static_cast<std::uint8_t>(rng.index(field_domain(f).size()));
  return v.with_index(f, i);
}

run_result run(const config& cfg) {
  validate(cfg);
  seeded_rng rng(cfg.seed);

  std::vector<cvss_vector> pool;
  pool.reserve(cfg.pool_size);
  for (int i = 0; i < cfg.pool_size; ++i) pool.push_back(random_vector(rng));

  run_result result;
  result.per_generation_counts.reserve(cfg.generations);
  std::vector<scored_vector> scored;
  for (int gen = 0;; ++gen) {
    scored.clear();
    for (const auto& v : pool) scored.push_back(evaluate(v, cfg));
    result.per_generation_counts.push_back(static_cast<int>(std::count_if(
        scored.begin(), scored.end(), [&](const auto& s) { return s.base == cfg.best_score; })));
    if (gen + 1 == cfg.generations) break;

    const auto breeders = select_breeders(scored, cfg.best_sample, cfg.lucky_few, rng);
    pool.clear();
    for (std::size_t p = 0; p + 1 < breeders.size(); p += 2) {
      for (int c = 0; c < cfg.children_per_pair; ++c) {
        auto child = crossover(breeders[p].vector, breeders[p + 1].vector, rng);
        if (rng.unit() < cfg.mutation_rate) child = mutate(child, rng);
        pool.push_back(child);
      }
    }
  }
  result.final_pool = std::move(scored);
  return result;
}

}  // namespace cvcov::ga
