#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cvcov/config.hpp"
#include "cvcov/error.hpp"
#include "cvcov/experiment.hpp"
#include "cvcov/report.hpp"
#include "doctest.h"

using namespace cvcov;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto m = parse_config("# comment\npool_size = 100\n\nbest_sample=30 # trailing\nlucky_few = 10\n");
  CHECK(m.at("pool_size") == "100");
  CHECK(m.at("best_sample") == "30");
  ga::config cfg;
  cvcov::apply(m, cfg);
  CHECK(cfg.best_sample == 30);
  CHECK(cfg.lucky_few == 10);
  CHECK(cfg.children_per_pair == 5);

  CHECK_THROWS_AS(parse_config("pool_size 100\n"), config_error);
  CHECK_THROWS_AS(parse_config("colour = blue\n"), config_error);
  CHECK_THROWS_AS(cvcov::apply(parse_config("pool_size = many\n"), cfg), config_error);
  CHECK_THROWS_AS(cvcov::apply(parse_config("mutation_rate = 0.1x\n"), cfg), config_error);

  pso::config p;
  cvcov::apply(parse_config("init_velocity = 1,3\ninit_fitness = 2.5,9\npbest_from_score = true\n"), p);
  CHECK(p.init_velocity_lo == 1);
  CHECK(p.init_velocity_hi == 3);
  CHECK(p.init_fitness_lo == 2.5);
  CHECK(p.init_fitness_hi == 9.0);
  CHECK(p.pbest_from_score);
  CHECK_THROWS_AS(cvcov::apply(parse_config("init_velocity = 3\n"), p), config_error);

  const auto file = load_config(CVCOV_TEST_DATA "/ga_example.conf");
  ga::config g;
  cvcov::apply(file, g);
  CHECK(g.best_sample == 30);
  CHECK(g.mutation_rate == 0.2);
  CHECK_NOTHROW(ga::validate(g));
}

TEST_CASE("spec from config") {
  auto s = experiment::from_config(parse_config("algo = pso\nruns = 3\nseed = 40\nbands = 2.0,2.0;2.0,3.0\n"));
  CHECK(s.algo == experiment::algorithm::pso);
  CHECK(s.runs == 3);
  CHECK(s.base_seed == 40);
  CHECK(experiment::run_seed(s, 2) == 42);
  REQUIRE(s.bands.size() == 2);
  CHECK(s.bands[0] == metrics::band{2.0, 2.0, true});
  CHECK_THROWS_AS(experiment::from_config(parse_config("algo = sa\n")), config_error);
  CHECK_THROWS_AS(experiment::from_config(parse_config("stddev = median\n")), config_error);

  s.runs = 0;
  CHECK_THROWS_AS(experiment::validate(s), config_error);
  s.runs = 1;
  s.pso.swarm_size = -1;
  CHECK_THROWS_AS(experiment::run(s), config_error);
}

TEST_CASE("report writers") {
  CHECK(report::counts_csv("generation", {0, 2, 1}) == "generation,count\n0,0\n1,2\n2,1\n");
  CHECK(report::csv_number(1.0 / 3.0) == "0.333333");
  CHECK(report::csv_number(std::nan("")).empty());

  const auto csv = report::enumeration_csv(enumerate_all());
  CHECK(csv.starts_with("vector,iss,impact,exploitability,base\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2593);
  CHECK(csv.find("AV:L/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H,0.914816,5.873119,1.834577,7.8\n") !=
        std::string::npos);

  ga::config cfg;
  cfg.seed = 5;
  const auto pool = report::pool_json(ga::run(cfg).final_pool);
  CHECK(pool.find("\"fitness\"") != std::string::npos);
}

TEST_CASE("experiment runs are seeded per run and thread-count independent") {
  experiment::spec s;
  s.runs = 6;
  s.base_seed = 300;
  const auto serial = experiment::run(s);
  s.jobs = 3;
  const auto parallel = experiment::run(s);
  REQUIRE(serial.runs.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(serial.runs[i].seed == 300u + i);
    CHECK(serial.runs[i].pool == parallel.runs[i].pool);
    CHECK(serial.runs[i].trace == parallel.runs[i].trace);
    ga::config cfg;
    cfg.seed = 300 + i;
    CHECK(serial.runs[i].trace == ga::run(cfg).per_generation_counts);
  }
}

TEST_CASE("experiment output layout and determinism") {
  const auto root = fs::temp_directory_path() / "cvcov_test_experiment";
  fs::remove_all(root);
  for (auto algo : {experiment::algorithm::ga, experiment::algorithm::pso}) {
    experiment::spec s;
    s.algo = algo;
    s.runs = 2;
    s.base_seed = 9;
    const auto r = experiment::run(s);
    experiment::write(s, r, root / "a");
    experiment::write(s, experiment::run(s), root / "b");

    const auto name = std::string(experiment::algorithm_name(algo));
    for (const auto& entry : fs::recursive_directory_iterator(root / "a" / name)) {
      if (!entry.is_regular_file()) continue;
      const auto rel = fs::relative(entry.path(), root / "a");
      CHECK_MESSAGE(slurp(entry.path()) == slurp(root / "b" / rel), rel.string());
    }
    CHECK(fs::exists(root / "a" / name / "manifest.json"));
    CHECK(fs::exists(root / "a" / name / "trace.csv"));
    for (const auto& b : s.bands) {
      const auto dir = root / "a" / name / b.label();
      CHECK(fs::exists(dir / "run_0.json"));
      CHECK(fs::exists(dir / "run_1.json"));
      CHECK(slurp(dir / "aggregate.csv").starts_with(
          "run,band_count,mean_hamming,hamming_stddev,score_stddev\n"));
      CHECK(slurp(dir / "contributions.csv").starts_with("field,letter,percent\n"));
    }
    const auto trace = slurp(root / "a" / name / "trace.csv");
    CHECK(trace.starts_with(algo == experiment::algorithm::ga ? "generation,count\n"
                                                              : "iteration,count\n"));
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 51);
  }
  fs::remove_all(root);
}

TEST_CASE("band counts respect interval inclusion over 100 runs") {
  experiment::spec s;
  s.bands = {{2.0, 2.0, true}, {2.0, 3.0, false}, {2.0, 5.0, false}, {2.0, 5.0, true}};
  const auto r = experiment::run(s);
  double eq2 = 0, le3 = 0, le5 = 0, ge2le5 = 0;
  for (const auto& run : r.runs) {
    CHECK(run.stats[2].band_count >= run.stats[1].band_count);
    CHECK(run.stats[3].band_count == run.stats[0].band_count + run.stats[2].band_count);
    eq2 += run.stats[0].band_count;
    le3 += run.stats[1].band_count;
    le5 += run.stats[2].band_count;
    ge2le5 += run.stats[3].band_count;
  }
  CHECK(le5 >= le3);
  CHECK(ge2le5 > eq2);
  // The GA concentrates on the best score, so [2.0] outweighs (2.0,5.0].
  CHECK(eq2 > le5);
}
