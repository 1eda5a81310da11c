#include "cvcov/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "cvcov/error.hpp"

namespace cvcov {

namespace {

constexpr std::array<std::string_view, 20> kKnownKeys = {
    "algo",         "runs",          "seed",          "bands",
    "out",          "jobs",          "stddev",        "pool_size",
    "generations",  "best_sample",   "lucky_few",     "children_per_pair",
    "mutation_rate", "best_score",   "upper_bound",   "swarm_size",
    "iterations",   "init_velocity", "init_fitness",  "pbest_from_score"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::string* lookup(const config_map& m, std::string_view key) {
  auto it = m.find(key);
  return it == m.end() ? nullptr : &it->second;
}

std::pair<std::string, std::string> split_pair(std::string_view key, const std::string& v) {
  auto comma = v.find(',');
  if (comma == std::string::npos)
    throw config_error(fmt::format("{}: expected lo,hi but got '{}'", key, v));
  return {v.substr(0, comma), v.substr(comma + 1)};
}

}  // namespace

bool is_known_key(std::string_view key) {
  for (auto k : kKnownKeys)
    if (k == key) return true;
  return false;
}

config_map parse_config(std::string_view text) {
  config_map out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw config_error(fmt::format("config line {}: expected key=value", line_no));
    const auto key = trim(line.substr(0, eq));
    if (!is_known_key(key))
      throw config_error(fmt::format("config line {}: unknown key '{}'", line_no, key));
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

config_map load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(fmt::format("cannot open config file {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

long long get_int(const config_map& m, std::string_view key, long long fallback) {
  const auto* v = lookup(m, key);
  if (!v) return fallback;
  long long out = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || p != v->data() + v->size())
    throw config_error(fmt::format("{}: '{}' is not an integer", key, *v));
  return out;
}

double get_real(const config_map& m, std::string_view key, double fallback) {
  const auto* v = lookup(m, key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const double out = std::stod(*v, &used);
    if (used == v->size()) return out;
  } catch (const std::exception&) {
  }
  throw config_error(fmt::format("{}: '{}' is not a number", key, *v));
}

bool get_bool(const config_map& m, std::string_view key, bool fallback) {
  const auto* v = lookup(m, key);
  if (!v) return fallback;
  if (*v == "1" || *v == "true" || *v == "yes") return true;
  if (*v == "0" || *v == "false" || *v == "no") return false;
  throw config_error(fmt::format("{}: '{}' is not a boolean", key, *v));
}

std::string get_string(const config_map& m, std::string_view key, std::string fallback) {
  const auto* v = lookup(m, key);
  return v ? *v : fallback;
}

void apply(const config_map& m, ga::config& cfg) {
  cfg.pool_size = static_cast<int>(get_int(m, "pool_size", cfg.pool_size));
  cfg.generations = static_cast<int>(get_int(m, "generations", cfg.generations));
  cfg.best_sample = static_cast<int>(get_int(m, "best_sample", cfg.best_sample));
  cfg.lucky_few = static_cast<int>(get_int(m, "lucky_few", cfg.lucky_few));
  cfg.children_per_pair = static_cast<int>(get_int(m, "children_per_pair", cfg.children_per_pair));
  cfg.mutation_rate = get_real(m, "mutation_rate", cfg.mutation_rate);
  cfg.best_score = get_real(m, "best_score", cfg.best_score);
  cfg.upper_bound = get_real(m, "upper_bound", cfg.upper_bound);
  cfg.seed = static_cast<std::uint64_t>(get_int(m, "seed", static_cast<long long>(cfg.seed)));
}

void apply(const config_map& m, pso::config& cfg) {
  cfg.swarm_size = static_cast<int>(get_int(m, "swarm_size", cfg.swarm_size));
  cfg.iterations = static_cast<int>(get_int(m, "iterations", cfg.iterations));
  cfg.best_score = get_real(m, "best_score", cfg.best_score);
  if (const auto* v = lookup(m, "init_velocity")) {
    auto [lo, hi] = split_pair("init_velocity", *v);
    config_map sub{{"lo", lo}, {"hi", hi}};
    cfg.init_velocity_lo = static_cast<int>(get_int(sub, "lo", 0));
    cfg.init_velocity_hi = static_cast<int>(get_int(sub, "hi", 0));
  }
  if (const auto* v = lookup(m, "init_fitness")) {
    auto [lo, hi] = split_pair("init_fitness", *v);
    config_map sub{{"lo", lo}, {"hi", hi}};
    cfg.init_fitness_lo = get_real(sub, "lo", 0.0);
    cfg.init_fitness_hi = get_real(sub, "hi", 0.0);
  }
  cfg.pbest_from_score = get_bool(m, "pbest_from_score", cfg.pbest_from_score);
  cfg.seed = static_cast<std::uint64_t>(get_int(m, "seed", static_cast<long long>(cfg.seed)));
}

}  // namespace cvcov
