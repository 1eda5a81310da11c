#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cvcov {

// Source of uniform draws for the search operators. Tests substitute
// scripted implementations to force particular branches.
class random_source {
 public:
  virtual ~random_source() = default;

  // Uniform integer in [0, n). n must be > 0.
  virtual std::uint64_t index(std::uint64_t n) = 0;

  // Uniform real in [0, 1).
  virtual double unit() = 0;
};

// mt19937_64 with hand-rolled reductions, so draws are identical across
// standard libraries (std:: distributions are implementation-defined).
class seeded_rng final : public random_source {
 public:
  static constexpr std::string_view algorithm = "mt19937_64/lemire-bounded/53bit-unit";

  explicit seeded_rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t index(std::uint64_t n) override;
  double unit() override;

 private:
  std::mt19937_64 engine_;
};

}  // namespace cvcov
