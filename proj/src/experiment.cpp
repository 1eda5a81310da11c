#include "cvcov/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include <fmt/format.h>

#include "cvcov/error.hpp"
#include "cvcov/report.hpp"
#include "cvcov/rng.hpp"
#include "json.hpp"

namespace cvcov::experiment {

using nlohmann::ordered_json;

std::string_view algorithm_name(algorithm a) { return a == algorithm::ga ? "ga" : "pso"; }

algorithm parse_algorithm(std::string_view name) {
  if (name == "ga") return algorithm::ga;
  if (name == "pso") return algorithm::pso;
  throw config_error(fmt::format("unknown algorithm '{}' (expected ga or pso)", name));
}

void validate(const spec& s) {
  if (s.runs <= 0) throw config_error("runs must be positive");
  if (s.jobs <= 0) throw config_error("jobs must be positive");
  if (s.bands.empty()) throw config_error("at least one band is required");
  for (const auto& b : s.bands)
    if (!(b.lo <= b.hi)) throw config_error(fmt::format("band {} is empty", b.display()));
  if (s.algo == algorithm::ga)
    ga::validate(s.ga);
  else
    pso::validate(s.pso);
}

spec from_config(const config_map& m) {
  spec s;
  s.algo = parse_algorithm(get_string(m, "algo", "ga"));
  s.runs = static_cast<int>(get_int(m, "runs", s.runs));
  s.base_seed = static_cast<std::uint64_t>(get_int(m, "seed", 0));
  s.jobs = static_cast<int>(get_int(m, "jobs", s.jobs));
  const auto dev = get_string(m, "stddev", "population");
  if (dev == "population")
    s.deviation = metrics::deviation::population;
  else if (dev == "sample")
    s.deviation = metrics::deviation::sample;
  else
    throw config_error(fmt::format("stddev: '{}' is neither population nor sample", dev));

  const auto bands = get_string(m, "bands", "");
  if (!bands.empty()) {
    s.bands.clear();
    std::size_t start = 0;
    while (start <= bands.size()) {
      auto semi = bands.find(';', start);
      if (semi == std::string::npos) semi = bands.size();
      auto item = bands.substr(start, semi - start);
      if (!item.empty()) s.bands.push_back(metrics::parse_band(item));
      start = semi + 1;
    }
  }
  cvcov::apply(m, s.ga);
  cvcov::apply(m, s.pso);
  return s;
}

std::uint64_t run_seed(const spec& s, int run_index) {
  return s.base_seed + static_cast<std::uint64_t>(run_index);
}

run_output execute_run(const spec& s, int run_index) {
  run_output out;
  out.run = run_index;
  out.seed = run_seed(s, run_index);

  if (s.algo == algorithm::ga) {
    auto cfg = s.ga;
    cfg.seed = out.seed;
    auto res = ga::run(cfg);
    for (const auto& m : res.final_pool) {
      out.pool.push_back(m.vector);
      out.bases.push_back(m.base);
      if (m.base == cfg.best_score) out.best_vectors.push_back(m.vector);
    }
    out.trace = std::move(res.per_generation_counts);
    std::sort(out.best_vectors.begin(), out.best_vectors.end());
    out.best_vectors.erase(std::unique(out.best_vectors.begin(), out.best_vectors.end()),
                           out.best_vectors.end());
  } else {
    auto cfg = s.pso;
    cfg.seed = out.seed;
    auto res = pso::run(cfg);
    for (const auto& p : res.final_swarm) {
      out.pool.push_back(p.vector);
      out.bases.push_back(base_score(p.vector));
    }
    out.trace = std::move(res.per_iteration_counts);
    out.best_vectors = std::move(res.best_vectors);
  }

  for (const auto& b : s.bands)
    out.stats.push_back(metrics::compute_run_stats(out.pool, out.bases, b, s.deviation));
  return out;
}

result run(const spec& s) {
  validate(s);
  result r;
  r.runs.resize(s.runs);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < s.runs; i = next++) r.runs[i] = execute_run(s, i);
  };
  const int threads = std::min(s.jobs, s.runs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t b = 0; b < s.bands.size(); ++b) {
    std::vector<cvss_vector> members;
    for (const auto& run : r.runs)
      for (std::size_t i = 0; i < run.pool.size(); ++i)
        if (s.bands[b].contains(run.bases[i])) members.push_back(run.pool[i]);
    r.band_totals.push_back(static_cast<int>(members.size()));
    if (members.empty())
      r.contributions.emplace_back();
    else
      r.contributions.emplace_back(metrics::contributions(members));
  }
  return r;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

ordered_json number_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

ordered_json band_json(const metrics::band& b) {
  return {{"lo", b.lo}, {"hi", b.hi}, {"lo_inclusive", b.lo_inclusive}, {"label", b.display()}};
}

ordered_json config_json(const spec& s) {
  if (s.algo == algorithm::ga)
    return {{"pool_size", s.ga.pool_size},         {"generations", s.ga.generations},
            {"best_sample", s.ga.best_sample},     {"lucky_few", s.ga.lucky_few},
            {"children_per_pair", s.ga.children_per_pair},
            {"mutation_rate", s.ga.mutation_rate}, {"best_score", s.ga.best_score},
            {"upper_bound", s.ga.upper_bound}};
  return {{"swarm_size", s.pso.swarm_size},
          {"iterations", s.pso.iterations},
          {"best_score", s.pso.best_score},
          {"init_velocity", {s.pso.init_velocity_lo, s.pso.init_velocity_hi}},
          {"init_fitness", {s.pso.init_fitness_lo, s.pso.init_fitness_hi}},
          {"pbest_from_score", s.pso.pbest_from_score}};
}

ordered_json contributions_json(const metrics::contribution_table& t) {
  ordered_json j;
  for (auto f : all_fields) {
    ordered_json row;
    const auto dom = field_domain(f);
    for (std::size_t i = 0; i < dom.size(); ++i)
      row[std::string(1, dom[i])] = t.percent[static_cast<std::size_t>(f)][i];
    j[std::string(field_name(f))] = std::move(row);
  }
  return j;
}

}  // namespace

void write(const spec& s, const result& r, const std::filesystem::path& out) {
  const auto root = out / std::string(algorithm_name(s.algo));
  std::filesystem::create_directories(root);

  ordered_json manifest;
  manifest["algo"] = std::string(algorithm_name(s.algo));
  manifest["runs"] = s.runs;
  manifest["base_seed"] = s.base_seed;
  manifest["seed_rule"] = "base_seed + run_index";
  manifest["rng"] = std::string(seeded_rng::algorithm);
  manifest["stddev"] = s.deviation == metrics::deviation::population ? "population" : "sample";
  manifest["config"] = config_json(s);
  manifest["bands"] = ordered_json::array();
  for (const auto& b : s.bands) manifest["bands"].push_back(band_json(b));
  write_text(root / "manifest.json", manifest.dump(2) + "\n");

  if (!r.runs.empty())
    write_text(root / "trace.csv",
               report::counts_csv(s.algo == algorithm::ga ? "generation" : "iteration",
                                  r.runs.front().trace));

  for (std::size_t b = 0; b < s.bands.size(); ++b) {
    const auto dir = root / s.bands[b].label();
    std::filesystem::create_directories(dir);
    std::string aggregate = "run,band_count,mean_hamming,hamming_stddev,score_stddev\n";
    for (const auto& run : r.runs) {
      const auto& st = run.stats[b];
      aggregate += fmt::format("{},{},{},{},{}\n", run.run, st.band_count,
                               report::csv_number(st.mean_hamming),
                               report::csv_number(st.hamming_stddev),
                               report::csv_number(st.score_stddev));

      ordered_json j;
      j["run"] = run.run;
      j["seed"] = run.seed;
      j["rng"] = std::string(seeded_rng::algorithm);
      j["algo"] = std::string(algorithm_name(s.algo));
      j["band"] = band_json(s.bands[b]);
      j["band_count"] = st.band_count;
      j["mean_hamming"] = number_or_null(st.mean_hamming);
      j["hamming_stddev"] = number_or_null(st.hamming_stddev);
      j["score_stddev"] = number_or_null(st.score_stddev);
      j["best_score_vectors"] = ordered_json::array();
      for (const auto& v : run.best_vectors) j["best_score_vectors"].push_back(v.to_string());
      j["contributions"] = st.band_count > 0 ? contributions_json(st.contributions)
                                             : ordered_json(nullptr);
      write_text(dir / fmt::format("run_{}.json", run.run), j.dump(2) + "\n");
    }
    write_text(dir / "aggregate.csv", aggregate);
    write_text(dir / "contributions.csv",
               r.contributions[b] ? report::contributions_csv(*r.contributions[b])
                                  : std::string("field,letter,percent\n"));
  }
}

}  // namespace cvcov::experiment
