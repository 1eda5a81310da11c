#pragma once

// Pool evaluation: score bands, Hamming diversity, dispersion and
// per-letter contribution tables.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cvcov/cvss.hpp"

namespace cvcov::metrics {

// Score interval. The upper end is always inclusive; lo == hi with
// lo_inclusive selects exactly one score.
struct band {
  double lo = 0.0;
  double hi = 10.0;
  bool lo_inclusive = false;

  bool contains(double base) const {
    return (lo_inclusive ? base >= lo : base > lo) && base <= hi;
  }
  // Directory-safe label, e.g. "eq2.0" or "gt2.0_le3.0".
  std::string label() const;
  // Human form, e.g. "[2.0]" or "(2.0,3.0]".
  std::string display() const;

  friend bool operator==(const band&, const band&) = default;
};

// [2.0], (2.0,3.0], (2.0,4.0], (2.0,5.0].
std::vector<band> default_bands();

// Parses "lo,hi[,inclusive-lo]"; lo == hi implies an inclusive lower end.
band parse_band(const std::string& text);

enum class deviation { population, sample };

int hamming(const cvss_vector& a, const cvss_vector& b);

// All n(n-1)/2 unordered pairwise distances (i < j order).
std::vector<int> pairwise_hamming(std::span<const cvss_vector> pool);

double mean_pairwise_hamming(std::span<const cvss_vector> pool);

int band_count(std::span<const double> bases, const band& b);

double stddev(std::span<const double> values, deviation kind = deviation::population);

double mean(std::span<const double> values);

// percent[field][letter index in field_domain(field)].
struct contribution_table {
  std::array<std::array<double, 4>, field_count> percent{};

  double at(metric_field f, char letter) const;
};

contribution_table contributions(std::span<const cvss_vector> pool);

struct run_stats {
  int band_count = 0;
  // Undefined (NaN) when fewer than two vectors fall in the band.
  double mean_hamming = 0.0;
  double hamming_stddev = 0.0;
  // NaN when the band is empty.
  double score_stddev = 0.0;
  // Zero everywhere when the band is empty.
  contribution_table contributions;
};

// Metrics over the members of `pool` whose base lies in `b`.
run_stats compute_run_stats(std::span<const cvss_vector> pool, std::span<const double> bases,
                            const band& b, deviation kind = deviation::population);

}  // namespace cvcov::metrics
