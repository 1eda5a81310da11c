#pragma once

// CSV/JSON writers for pools, swarms, traces and run statistics.

#include <string>
#include <vector>

#include "cvcov/cvss.hpp"
#include "cvcov/ga.hpp"
#include "cvcov/metrics.hpp"
#include "cvcov/pso.hpp"

namespace cvcov::report {

// vector,iss,impact,exploitability,base
std::string enumeration_csv(const std::vector<scored_entry>& entries);

// [{vector, base, fitness}, ...]
std::string pool_json(const std::vector<ga::scored_vector>& pool);

// [{vector, base, pbest_fitness, velocity}, ...]
std::string swarm_json(const std::vector<pso::particle>& swarm);

// `<index_name>,count` rows starting at 0.
std::string counts_csv(const std::string& index_name, const std::vector<int>& counts);

// field,letter,percent
std::string contributions_csv(const metrics::contribution_table& t);

// Fixed six-decimal rendering; NaN renders as an empty field.
std::string csv_number(double x);

}  // namespace cvcov::report
