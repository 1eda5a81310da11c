#include "cvcov/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "json.hpp"

namespace cvcov::report {

using nlohmann::ordered_json;

std::string csv_number(double x) {
  if (std::isnan(x)) return {};
  return fmt::format("{:.6f}", x);
}

std::string enumeration_csv(const std::vector<scored_entry>& entries) {
  std::string out = "vector,iss,impact,exploitability,base\n";
  for (const auto& e : entries) {
    const auto& s = e.breakdown;
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.1f}\n", e.vector.to_string(), s.iss, s.impact,
                       s.exploitability, s.base);
  }
  return out;
}

std::string pool_json(const std::vector<ga::scored_vector>& pool) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : pool) {
    ordered_json j;
    j["vector"] = s.vector.to_string();
    j["base"] = s.base;
    j["fitness"] = s.fitness;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string swarm_json(const std::vector<pso::particle>& swarm) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : swarm) {
    ordered_json j;
    j["vector"] = p.vector.to_string();
    j["base"] = base_score(p.vector);
    j["pbest_fitness"] = p.pbest_fitness;
    j["velocity"] = p.velocity;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string counts_csv(const std::string& index_name, const std::vector<int>& counts) {
  std::string out = index_name + ",count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) out += fmt::format("{},{}\n", i, counts[i]);
  return out;
}

std::string contributions_csv(const metrics::contribution_table& t) {
  std::string out = "field,letter,percent\n";
  for (auto f : all_fields) {
    const auto dom = field_domain(f);
    for (std::size_t i = 0; i < dom.size(); ++i)
      out += fmt::format("{},{},{:.6f}\n", field_name(f), dom[i],
                         t.percent[static_cast<std::size_t>(f)][i]);
  }
  return out;
}

}  // namespace cvcov::report
