#pragma once

// Multi-run experiment protocol: seeded GA/PSO runs, per-band statistics
// and the on-disk report layout out/<algo>/<band>/...

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvcov/config.hpp"
#include "cvcov/ga.hpp"
#include "cvcov/metrics.hpp"
#include "cvcov/pso.hpp"

namespace cvcov::experiment {

enum class algorithm { ga, pso };

std::string_view algorithm_name(algorithm a);
algorithm parse_algorithm(std::string_view name);

struct spec {
  algorithm algo = algorithm::ga;
  int runs = 100;
  std::vector<metrics::band> bands = metrics::default_bands();
  // Run i is seeded with base_seed + i.
  std::uint64_t base_seed = 0;
  ga::config ga;
  pso::config pso;
  metrics::deviation deviation = metrics::deviation::population;
  int jobs = 1;
};

void validate(const spec& s);

// Reads algo, runs, seed, bands (";"-separated lo,hi[,incl]), stddev, jobs
// and the algorithm knobs.
spec from_config(const config_map& m);

std::uint64_t run_seed(const spec& s, int run_index);

struct run_output {
  int run = 0;
  std::uint64_t seed = 0;
  // Final GA pool or final swarm positions.
  std::vector<cvss_vector> pool;
  std::vector<double> bases;
  // Per-generation (GA) or per-iteration (PSO) count of best-score members.
  std::vector<int> trace;
  // One entry per band, in spec order.
  std::vector<metrics::run_stats> stats;
  // Distinct vectors reaching exactly the best score during the run.
  std::vector<cvss_vector> best_vectors;
};

struct result {
  std::vector<run_output> runs;
  // Contributions over all runs' band members; empty when a band never
  // received a member.
  std::vector<std::optional<metrics::contribution_table>> contributions;
  std::vector<int> band_totals;
};

run_output execute_run(const spec& s, int run_index);

// Runs execute on up to s.jobs worker threads; results are ordered by run.
result run(const spec& s);

// Writes manifest.json, trace.csv and one directory per band holding
// run_<i>.json, aggregate.csv and contributions.csv under out/<algo>/.
void write(const spec& s, const result& r, const std::filesystem::path& out);

}  // namespace cvcov::experiment
