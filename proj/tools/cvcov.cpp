// cvcov: CVSS pattern generation, pool metrics and vulnerability coverage.
//
// Exit codes: 0 success, 2 usage/configuration error, 3 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "cvcov/config.hpp"
#include "cvcov/coverage.hpp"
#include "cvcov/cvss.hpp"
#include "cvcov/error.hpp"
#include "cvcov/experiment.hpp"
#include "cvcov/ga.hpp"
#include "cvcov/pso.hpp"
#include "cvcov/report.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kDataError = 3;

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cvcov::data_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

// Flags that feed the shared key=value map. Config-file values are loaded
// first and flags given on the command line override them.
struct overrides {
  std::string config_path;
  cvcov::config_map flags;

  void option(CLI::App* app, const std::string& flag, const std::string& key,
              const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { flags[key] = v; }, help);
  }

  cvcov::config_map resolve() const {
    cvcov::config_map m;
    if (!config_path.empty()) m = cvcov::load_config(config_path);
    for (const auto& [k, v] : flags) m[k] = v;
    return m;
  }
};

void add_search_options(CLI::App* app, overrides& o) {
  app->add_option("--config", o.config_path, "Flat key=value config file");
  o.option(app, "--algo", "algo", "ga or pso");
  o.option(app, "--seed", "seed", "Seed (experiment: base seed, run i uses seed + i)");
  o.option(app, "--pool-size", "pool_size", "GA pool size");
  o.option(app, "--generations", "generations", "GA generations");
  o.option(app, "--best-sample", "best_sample", "GA breeders kept by fitness");
  o.option(app, "--lucky-few", "lucky_few", "GA breeders drawn at random");
  o.option(app, "--children-per-pair", "children_per_pair", "GA children per breeding pair");
  o.option(app, "--mutation-rate", "mutation_rate", "GA per-child mutation probability");
  o.option(app, "--best-score", "best_score", "Target score (GA band floor, PSO best score)");
  o.option(app, "--upper-bound", "upper_bound", "GA band ceiling");
  o.option(app, "--swarm-size", "swarm_size", "PSO swarm size");
  o.option(app, "--iterations", "iterations", "PSO iterations");
  o.option(app, "--init-velocity", "init_velocity", "PSO initial velocity range lo,hi");
  o.option(app, "--init-fitness", "init_fitness", "PSO initial pbest range lo,hi");
  app->add_flag_callback(
      "--pbest-from-score", [&o] { o.flags["pbest_from_score"] = "true"; },
      "PSO: initialise pbest from each particle's real score");
}

int cmd_score(const std::string& text, bool as_json) {
  const auto v = cvcov::parse_vector(text);
  const auto s = cvcov::score(v);
  if (as_json) {
    std::cout << fmt::format(
        "{{\"vector\": \"{}\", \"iss\": {:.6f}, \"impact\": {:.6f}, \"exploitability\": {:.6f}, "
        "\"base\": {:.1f}}}\n",
        v.to_string(), s.iss, s.impact, s.exploitability, s.base);
  } else {
    std::cout << fmt::format("vector          {}\n", v.to_string())
              << fmt::format("iss             {:.6f}\n", s.iss)
              << fmt::format("impact          {:.6f}\n", s.impact)
              << fmt::format("exploitability  {:.6f}\n", s.exploitability)
              << fmt::format("base            {:.1f}\n", s.base);
  }
  return 0;
}

int cmd_generate(const overrides& o, const fs::path& out) {
  const auto m = o.resolve();
  const auto algo = cvcov::experiment::parse_algorithm(cvcov::get_string(m, "algo", "ga"));
  if (algo == cvcov::experiment::algorithm::ga) {
    cvcov::ga::config cfg;
    cvcov::apply(m, cfg);
    const auto res = cvcov::ga::run(cfg);
    write_text(out / "pool.json", cvcov::report::pool_json(res.final_pool));
    write_text(out / "counts.csv", cvcov::report::counts_csv("generation", res.per_generation_counts));
    int in_band = 0;
    for (const auto& s : res.final_pool) in_band += s.fitness != cvcov::ga::out_of_band_fitness;
    std::cout << fmt::format("ga seed={} pool={} in-band={} final best-score count={}\n", cfg.seed,
                             res.final_pool.size(), in_band, res.per_generation_counts.back());
  } else {
    cvcov::pso::config cfg;
    cvcov::apply(m, cfg);
    const auto res = cvcov::pso::run(cfg);
    write_text(out / "swarm.json", cvcov::report::swarm_json(res.final_swarm));
    write_text(out / "counts.csv", cvcov::report::counts_csv("iteration", res.per_iteration_counts));
    std::cout << fmt::format("pso seed={} swarm={} gbest={:.1f} distinct best-score vectors={}\n",
                             cfg.seed, res.final_swarm.size(), res.gbest, res.best_vectors.size());
  }
  std::cout << fmt::format("wrote {}\n", out.string());
  return 0;
}

int cmd_experiment(const overrides& o, const std::vector<std::string>& bands, const fs::path& out) {
  auto m = o.resolve();
  if (!bands.empty()) {
    std::string joined;
    for (const auto& b : bands) joined += (joined.empty() ? "" : ";") + b;
    m["bands"] = joined;
  }
  const auto spec = cvcov::experiment::from_config(m);
  cvcov::experiment::validate(spec);
  const auto res = cvcov::experiment::run(spec);
  cvcov::experiment::write(spec, res, out);

  std::cout << fmt::format("{} runs={} base_seed={}\n", cvcov::experiment::algorithm_name(spec.algo),
                           spec.runs, spec.base_seed);
  for (std::size_t b = 0; b < spec.bands.size(); ++b) {
    double sum = 0;
    for (const auto& r : res.runs) sum += r.stats[b].band_count;
    std::cout << fmt::format("  band {:<12} mean band_count {:.2f}\n", spec.bands[b].display(),
                             sum / spec.runs);
  }
  std::cout << fmt::format("wrote {}\n",
                           (out / std::string(cvcov::experiment::algorithm_name(spec.algo))).string());
  return 0;
}

int cmd_enumerate(const std::string& out) {
  const auto csv = cvcov::report::enumeration_csv(cvcov::enumerate_all());
  if (out.empty() || out == "-")
    std::cout << csv;
  else
    write_text(out, csv);
  return 0;
}

int cmd_ingest(const fs::path& feed, const fs::path& store) {
  const auto res = cvcov::coverage::ingest_file(feed);
  for (const auto& d : res.diagnostics) std::cerr << d << "\n";
  if (store.has_parent_path()) fs::create_directories(store.parent_path());
  cvcov::coverage::save_store(store, res.records);
  std::cout << fmt::format("records={} skipped={} flagged={}\n", res.records.size(), res.skipped,
                           res.flagged);
  return 0;
}

int cmd_coverage(const fs::path& patterns, const fs::path& db, const std::string& mode,
                 const std::string& band, int max_distance, const std::string& report_path) {
  cvcov::coverage::match_options opts;
  opts.mode = cvcov::coverage::parse_mode(mode);
  if (!band.empty()) opts.band = cvcov::metrics::parse_band(band);
  opts.max_distance = max_distance;
  const auto pats = cvcov::coverage::load_patterns(patterns);
  const auto records = cvcov::coverage::load_store(db);
  const auto rep = cvcov::coverage::match(pats, records, opts);
  std::cout << cvcov::coverage::report_table(rep);
  if (!report_path.empty()) write_text(report_path, cvcov::coverage::report_json(rep));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CVSS v3 pattern generation and vulnerability coverage"};
  app.require_subcommand(1);

  auto* score = app.add_subcommand("score", "Score one CVSS v3 base vector");
  std::string vector_text;
  bool score_json = false;
  score->add_option("vector", vector_text, "Vector string, optionally CVSS:3.x/ prefixed")
      ->required();
  score->add_flag("--json", score_json, "Print the breakdown as JSON");

  auto* generate = app.add_subcommand("generate", "Run one GA or PSO search");
  overrides gen_o;
  std::string gen_out = "out/generate";
  add_search_options(generate, gen_o);
  generate->add_option("--out", gen_out, "Output directory");

  auto* experiment = app.add_subcommand("experiment", "Seeded multi-run experiment");
  overrides exp_o;
  std::string exp_out = "out";
  std::vector<std::string> bands;
  add_search_options(experiment, exp_o);
  exp_o.option(experiment, "--runs", "runs", "Number of runs (default 100)");
  exp_o.option(experiment, "--jobs", "jobs", "Worker threads");
  exp_o.option(experiment, "--stddev", "stddev", "population or sample");
  experiment->add_option("--band", bands, "Score band lo,hi[,inclusive-lo]; repeatable");
  experiment->add_option("--out", exp_out, "Output root directory");

  auto* enumerate = app.add_subcommand("enumerate", "CSV of every base vector and its score");
  std::string enum_out;
  enumerate->add_option("--out", enum_out, "Output file (default stdout)");

  auto* ingest = app.add_subcommand("ingest", "Ingest an NVD JSON 1.1 feed into a record store");
  std::string feed, store;
  ingest->add_option("--feed", feed, "Feed file (plain or gzip)")->required();
  ingest->add_option("--store", store, "Output .jsonl store")->required();

  auto* coverage = app.add_subcommand("coverage", "Vulnerability coverage of a pattern set");
  std::string patterns, db, mode = "exact", band, report_path;
  int max_distance = 1;
  coverage->add_option("--patterns", patterns, "Pool/swarm JSON or array of vectors")->required();
  coverage->add_option("--db", db, "Record store (.jsonl)")->required();
  coverage->add_option("--mode", mode, "exact | score-band | hamming");
  coverage->add_option("--band", band, "Score band lo,hi[,inclusive-lo] for score-band mode");
  coverage->add_option("--max-distance", max_distance, "Distance bound for hamming mode");
  coverage->add_option("--report", report_path, "Write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*score) return cmd_score(vector_text, score_json);
    if (*generate) return cmd_generate(gen_o, gen_out);
    if (*experiment) return cmd_experiment(exp_o, bands, exp_out);
    if (*enumerate) return cmd_enumerate(enum_out);
    if (*ingest) return cmd_ingest(feed, store);
    if (*coverage)
      return cmd_coverage(patterns, db, mode, band, max_distance, report_path);
  } catch (const cvcov::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const cvcov::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
