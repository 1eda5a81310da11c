#include <algorithm>
#include <set>

#include "cvcov/error.hpp"
#include "cvcov/ga.hpp"
#include "cvcov/metrics.hpp"
#include "doctest.h"
#include "scripted_rng.hpp"

using namespace cvcov;

namespace {

ga::scored_vector with_fitness(const char* v, double fit) {
  return {parse_vector(v), fit, fit};
}

}  // namespace

TEST_CASE("config validation") {
  ga::config cfg;
  CHECK_NOTHROW(ga::validate(cfg));

  auto rejects = [](auto mutate_cfg) {
    ga::config c;
    mutate_cfg(c);
    CHECK_THROWS_AS(ga::validate(c), config_error);
  };
  rejects([](auto& c) { c.pool_size = 0; });
  rejects([](auto& c) { c.generations = 0; });
  rejects([](auto& c) { c.lucky_few = 19; });          // odd breeder count
  rejects([](auto& c) { c.children_per_pair = 4; });   // 20 * 4 != 100
  rejects([](auto& c) { c.mutation_rate = 1.5; });
  rejects([](auto& c) { c.best_score = 6.0; });
  rejects([](auto& c) { c.best_sample = 0; c.lucky_few = 40; });
  rejects([](auto& c) { c.lucky_few = -2; c.best_sample = 42; });

  ga::config alt;
  alt.best_sample = 30;
  alt.lucky_few = 10;
  CHECK_NOTHROW(ga::validate(alt));
  CHECK_THROWS_AS(ga::run(ga::config{.pool_size = 7}), config_error);
}

TEST_CASE("random_vector") {
  scripted_rng zeros;
  CHECK(ga::random_vector(zeros).to_string() == "AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N");

  seeded_rng rng(42);
  std::array<std::set<char>, field_count> seen;
  for (int i = 0; i < 10000; ++i) {
    const auto v = ga::random_vector(rng);
    for (auto f : all_fields) seen[static_cast<std::size_t>(f)].insert(v.letter(f));
  }
  for (auto f : all_fields)
    CHECK(seen[static_cast<std::size_t>(f)].size() == field_domain(f).size());
}

TEST_CASE("fitness band") {
  const ga::config cfg;
  CHECK(ga::fitness(3.0, cfg) == 3.0);
  CHECK(ga::fitness(7.8, cfg) == 100.0);
  CHECK(ga::fitness(1.6, cfg) == 100.0);
  CHECK(ga::fitness(2.0, cfg) == 2.0);
  CHECK(ga::fitness(5.5, cfg) == 5.5);
  CHECK(ga::fitness(5.6, cfg) == 100.0);

  // fitness == 100 exactly when the base lies outside [best_score, upper_bound].
  for (int tenths = 0; tenths <= 100; ++tenths) {
    const double base = tenths / 10.0;
    const bool outside = base < cfg.best_score || base > cfg.upper_bound;
    CHECK((ga::fitness(base, cfg) == ga::out_of_band_fitness) == outside);
  }
}

TEST_CASE("select_breeders") {
  const std::vector<ga::scored_vector> pool = {
      with_fitness("AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H", 100.0),
      with_fitness("AV:P/AC:H/PR:N/UI:N/S:U/C:N/I:N/A:L", 2.0),
      with_fitness("AV:L/AC:H/PR:N/UI:N/S:U/C:N/I:N/A:L", 3.5),
      with_fitness("AV:N/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H", 100.0),
  };
  scripted_rng rng;

  auto b = ga::select_breeders(pool, 2, 0, rng);
  REQUIRE(b.size() == 2);
  CHECK(b[0].fitness == 2.0);
  CHECK(b[1].fitness == 3.5);

  auto all = ga::select_breeders(pool, 4, 0, rng);
  REQUIRE(all.size() == 4);
  CHECK(std::is_sorted(all.begin(), all.end(),
                       [](const auto& x, const auto& y) { return x.fitness < y.fitness; }));
  // Tie at 100 broken by canonical string.
  CHECK(all[2].vector.to_string() < all[3].vector.to_string());

  rng.indices = {0, 0};
  auto lucky = ga::select_breeders(pool, 1, 2, rng);
  REQUIRE(lucky.size() == 3);
  CHECK(lucky[1] == lucky[0]);
  CHECK(lucky[2] == lucky[0]);

  CHECK_THROWS_AS(ga::select_breeders(pool, 5, 0, rng), config_error);
  CHECK_THROWS_AS(ga::select_breeders({}, 0, 0, rng), config_error);
}

TEST_CASE("crossover") {
  const auto a = parse_vector("AV:L/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H");
  const auto b = parse_vector("AV:P/AC:H/PR:H/UI:R/S:C/C:N/I:L/A:N");
  scripted_rng rng;
  CHECK(ga::crossover(a, a, rng) == a);

  rng.units.assign(8, 0.1);
  CHECK(ga::crossover(a, b, rng) == a);
  rng.units.assign(8, 0.5);
  CHECK(ga::crossover(a, b, rng) == b);

  seeded_rng r(7);
  for (int t = 0; t < 1000; ++t) {
    const auto x = ga::random_vector(r);
    const auto y = ga::random_vector(r);
    const auto c = ga::crossover(x, y, r);
    for (auto f : all_fields) CHECK((c.index(f) == x.index(f) || c.index(f) == y.index(f)));
  }
}

TEST_CASE("mutate") {
  const auto v = parse_vector("AV:L/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H");
  scripted_rng rng;
  rng.indices = {0, 0};  // field AV, letter N
  CHECK(ga::mutate(v, rng).to_string() == "AV:N/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H");

  seeded_rng r(11);
  int unchanged = 0;
  for (int t = 0; t < 2000; ++t) {
    const auto m = ga::mutate(v, r);
    const int d = metrics::hamming(v, m);
    CHECK(d <= 1);
    unchanged += d == 0;
  }
  // Redrawing the current letter is allowed, so some mutations are no-ops.
  CHECK(unchanged > 0);
}

TEST_CASE("run is deterministic and keeps the pool valid") {
  ga::config cfg;
  cfg.seed = 1234;
  const auto a = ga::run(cfg);
  const auto b = ga::run(cfg);
  CHECK(a == b);
  CHECK(a.final_pool.size() == 100);
  CHECK(a.per_generation_counts.size() == 50);
  for (const auto& s : a.final_pool) {
    CHECK(s.base == base_score(s.vector));
    CHECK(s.fitness == ga::fitness(s.base, cfg));
    if (s.fitness != ga::out_of_band_fitness) {
      CHECK(s.base >= 2.0);
      CHECK(s.base <= 5.5);
    }
  }
  const int last = static_cast<int>(std::count_if(a.final_pool.begin(), a.final_pool.end(),
                                                  [](const auto& s) { return s.base == 2.0; }));
  CHECK(a.per_generation_counts.back() == last);

  cfg.seed = 1235;
  CHECK_FALSE(ga::run(cfg) == a);
}

TEST_CASE("final pools reach the low band across seeds") {
  // Rate over a wide seed range; the pinned 10-seed window lives in the
  // acceptance suite.
  int hits = 0;
  const int runs = 200;
  for (int s = 0; s < runs; ++s) {
    ga::config cfg;
    cfg.seed = 10'000 + s;
    const auto r = ga::run(cfg);
    hits += std::any_of(r.final_pool.begin(), r.final_pool.end(),
                        [](const auto& m) { return m.base > 2.0 && m.base <= 3.0; });
  }
  CHECK(hits >= 0.9 * runs);
}

TEST_CASE("generation count trace matches the pool when generations = 1") {
  ga::config cfg;
  cfg.generations = 1;
  cfg.seed = 99;
  const auto r = ga::run(cfg);
  REQUIRE(r.per_generation_counts.size() == 1);
  // A single generation is the random initial pool; rebuild it independently.
  seeded_rng rng(99);
  for (int i = 0; i < cfg.pool_size; ++i) CHECK(r.final_pool[i].vector == ga::random_vector(rng));
}
