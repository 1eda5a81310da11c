#include "cvcov/pso.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "cvcov/error.hpp"
#include "cvcov/ga.hpp"

namespace cvcov::pso {

void validate(const config& cfg) {
  auto fail = [](const std::string& msg) { throw config_error("pso config: " + msg); };
  if (cfg.swarm_size <= 0) fail("swarm_size must be positive");
  if (cfg.iterations <= 0) fail("iterations must be positive");
  if (cfg.init_velocity_lo < 0 || cfg.init_velocity_hi > static_cast<int>(field_count) ||
      cfg.init_velocity_lo > cfg.init_velocity_hi)
    fail(fmt::format("init velocity range [{}, {}] must be an interval within [0, {}]",
                     cfg.init_velocity_lo, cfg.init_velocity_hi, field_count));
  if (!(cfg.init_fitness_lo >= 2.0 && cfg.init_fitness_hi <= 10.0 &&
        cfg.init_fitness_lo <= cfg.init_fitness_hi))
    fail(fmt::format("init fitness range [{}, {}] must be an interval within [2, 10]",
                     cfg.init_fitness_lo, cfg.init_fitness_hi));
}

particle update_particle(const particle& p, random_source& rng) {
  particle out = p;
  out.vector = ga::mutate(p.vector, rng);
  return out;
}

step_outcome step(std::vector<particle>& swarm, const config& cfg, random_source& rng) {
  for (auto& p : swarm) {
    const double current = base_score(p.vector);
    if (current < p.pbest_fitness) {
      p.pbest_fitness = current;
      p.pbest_vector = p.vector;
    }
  }

  step_outcome out;
  out.gbest = std::numeric_limits<double>::infinity();
  for (const auto& p : swarm) out.gbest = std::min(out.gbest, p.pbest_fitness);

  for (auto& p : swarm) {
    if (p.pbest_fitness < cfg.best_score) continue;
    const double v = p.pbest_fitness - cfg.best_score;
    if (v == 0.0) {
      ++out.count;
      if (p.pbest_vector) out.best_vectors.push_back(*p.pbest_vector);
    }
    if (v < p.velocity)
      p.velocity = v;
    else
      p = update_particle(p, rng);
  }

  std::sort(out.best_vectors.begin(), out.best_vectors.end());
  out.best_vectors.erase(std::unique(out.best_vectors.begin(), out.best_vectors.end()),
                         out.best_vectors.end());
  return out;
}

std::vector<particle> init_swarm(const config& cfg, random_source& rng) {
  std::vector<particle> swarm(cfg.swarm_size);
  for (auto& p : swarm) p.vector = ga::random_vector(rng);
  for (auto& p : swarm) {
    if (cfg.pbest_from_score) {
      p.pbest_fitness = base_score(p.vector);
      p.pbest_vector = p.vector;
    } else {
      p.pbest_fitness =
          cfg.init_fitness_lo + (cfg.init_fitness_hi - cfg.init_fitness_lo) * rng.unit();
    }
  }
  const auto span = static_cast<std::uint64_t>(cfg.init_velocity_hi - cfg.init_velocity_lo + 1);
  for (auto& p : swarm)
    p.velocity = static_cast<double>(cfg.init_velocity_lo + static_cast<int>(rng.index(span)));
  return swarm;
}

run_result run(const config& cfg) {
  validate(cfg);
  seeded_rng rng(cfg.seed);
  auto swarm = init_swarm(cfg, rng);

  run_result result;
  std::vector<cvss_vector> found;
  for (int it = 0; it < cfg.iterations; ++it) {
    auto outcome = step(swarm, cfg, rng);
    result.per_iteration_counts.push_back(outcome.count);
    result.gbest_trace.push_back(outcome.gbest);
    auto& row = result.pbest_trace.emplace_back();
    row.reserve(swarm.size());
    for (const auto& p : swarm) row.push_back(p.pbest_fitness);
    found.insert(found.end(), outcome.best_vectors.begin(), outcome.best_vectors.end());
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());

  result.final_swarm = std::move(swarm);
  result.gbest = result.gbest_trace.back();
  result.best_vectors = std::move(found);
  return result;
}

}  // namespace cvcov::pso
