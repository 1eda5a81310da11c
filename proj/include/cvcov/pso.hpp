#pragma once

// Discrete particle swarm over CVSS vectors with a scalar score-distance
// velocity. gbest is tracked and reported but does not steer particles.

#include <cstdint>
#include <optional>
#include <vector>

#include "cvcov/cvss.hpp"
#include "cvcov/rng.hpp"

namespace cvcov::pso {

struct config {
  int swarm_size = 100;
  int iterations = 50;
  double best_score = 2.0;
  int init_velocity_lo = 0;
  int init_velocity_hi = 8;
  double init_fitness_lo = 2.0;
  double init_fitness_hi = 10.0;
  // Start pbest at the particle's real score instead of a random draw.
  bool pbest_from_score = false;
  std::uint64_t seed = 0;
};

void validate(const config& cfg);

struct particle {
  cvss_vector vector;
  double pbest_fitness = 0.0;
  double velocity = 0.0;
  // Position where pbest_fitness was scored; empty while pbest is still the
  // random initial value.
  std::optional<cvss_vector> pbest_vector;

  friend bool operator==(const particle&, const particle&) = default;
};

struct step_outcome {
  // Particles whose velocity evaluated to exactly 0.0.
  int count = 0;
  double gbest = 0.0;
  // Distinct pbest positions of the counted particles, sorted.
  std::vector<cvss_vector> best_vectors;
};

struct run_result {
  std::vector<particle> final_swarm;
  std::vector<int> per_iteration_counts;
  double gbest = 0.0;
  std::vector<double> gbest_trace;
  // pbest_trace[i][k]: pbest of particle k after iteration i.
  std::vector<std::vector<double>> pbest_trace;
  // Distinct vectors counted at velocity 0.0 at any iteration, sorted.
  std::vector<cvss_vector> best_vectors;

  friend bool operator==(const run_result&, const run_result&) = default;
};

// Redraws one uniformly chosen field; pbest and velocity carry over.
particle update_particle(const particle& p, random_source& rng);

// One swarm iteration, updating the particles in place.
step_outcome step(std::vector<particle>& swarm, const config& cfg, random_source& rng);

std::vector<particle> init_swarm(const config& cfg, random_source& rng);

run_result run(const config& cfg);

}  // namespace cvcov::pso
