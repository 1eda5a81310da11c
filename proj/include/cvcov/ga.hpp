#pragma once

// Genetic search for vectors whose base score falls in a target band.

#include <cstdint>
#include <vector>

#include "cvcov/cvss.hpp"
#include "cvcov/rng.hpp"

namespace cvcov::ga {

// Fitness assigned to vectors outside the target band.
inline constexpr double out_of_band_fitness = 100.0;

struct config {
  int pool_size = 100;
  int generations = 50;
  int best_sample = 20;
  int lucky_few = 20;
  int children_per_pair = 5;
  double mutation_rate = 0.1;
  double best_score = 2.0;
  double upper_bound = 5.5;
  std::uint64_t seed = 0;
};

// Throws config_error describing the first violated constraint.
void validate(const config& cfg);

struct scored_vector {
  cvss_vector vector;
  double base = 0.0;
  double fitness = 0.0;

  friend bool operator==(const scored_vector&, const scored_vector&) = default;
};

struct run_result {
  std::vector<scored_vector> final_pool;
  // Pool members with base == best_score, one entry per generation.
  std::vector<int> per_generation_counts;

  friend bool operator==(const run_result&, const run_result&) = default;
};

cvss_vector random_vector(random_source& rng);

double fitness(double base, const config& cfg);

scored_vector evaluate(const cvss_vector& v, const config& cfg);

// Breeder's selection: the best_sample fittest (ascending fitness, ties by
// canonical string), then lucky_few uniform picks with replacement.
std::vector<scored_vector> select_breeders(const std::vector<scored_vector>& pool,
                                           int best_sample, int lucky_few,
                                           random_source& rng);

// Uniform field-wise crossover: each field from a when the draw is < 0.5.
cvss_vector crossover(const cvss_vector& a, const cvss_vector& b, random_source& rng);

// Redraws one uniformly chosen field; may pick the current letter again.
cvss_vector mutate(const cvss_vector& v, random_source& rng);

run_result run(const config& cfg);

}  // namespace cvcov::ga
