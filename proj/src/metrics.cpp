#include "cvcov/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "cvcov/error.hpp"

namespace cvcov::metrics {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string band::label() const {
  if (lo == hi && lo_inclusive) return fmt::format("eq{:.1f}", lo);
  return fmt::format("{}{:.1f}_le{:.1f}", lo_inclusive ? "ge" : "gt", lo, hi);
}

std::string band::display() const {
  if (lo == hi && lo_inclusive) return fmt::format("[{:.1f}]", lo);
  return fmt::format("{}{:.1f},{:.1f}]", lo_inclusive ? '[' : '(', lo, hi);
}

std::vector<band> default_bands() {
  return {{2.0, 2.0, true}, {2.0, 3.0, false}, {2.0, 4.0, false}, {2.0, 5.0, false}};
}

band parse_band(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    parts.push_back(text.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() < 2 || parts.size() > 3)
    throw config_error(fmt::format("band '{}': expected lo,hi[,inclusive-lo]", text));

  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw config_error(fmt::format("band '{}': '{}' is not a number", text, s));
    }
  };
  band b{number(parts[0]), number(parts[1]), false};
  if (parts.size() == 3) {
    const auto& flag = parts[2];
    if (flag == "1" || flag == "true" || flag == "inclusive")
      b.lo_inclusive = true;
    else if (flag == "0" || flag == "false" || flag == "exclusive")
      b.lo_inclusive = false;
    else
      throw config_error(fmt::format("band '{}': bad inclusive-lo flag '{}'", text, flag));
  }
  if (b.lo == b.hi) b.lo_inclusive = true;
  if (!(b.lo <= b.hi)) throw config_error(fmt::format("band '{}': lo exceeds hi", text));
  return b;
}

int hamming(const cvss_vector& a, const cvss_vector& b) {
  int d = 0;
  for (auto f : all_fields) d += a.index(f) != b.index(f);
  return d;
}

std::vector<int> pairwise_hamming(std::span<const cvss_vector> pool) {
  std::vector<int> out;
  if (pool.size() >= 2) out.reserve(pool.size() * (pool.size() - 1) / 2);
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j) out.push_back(hamming(pool[i], pool[j]));
  return out;
}

double mean_pairwise_hamming(std::span<const cvss_vector> pool) {
  if (pool.size() < 2)
    throw data_error("mean_pairwise_hamming: need at least two vectors");
  // Integer accumulation keeps the result independent of pair order.
  long long total = 0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j) total += hamming(pool[i], pool[j]);
  const auto pairs = static_cast<long long>(pool.size()) * (pool.size() - 1) / 2;
  return static_cast<double>(total) / static_cast<double>(pairs);
}

int band_count(std::span<const double> bases, const band& b) {
  int n = 0;
  for (double x : bases) n += b.contains(x);
  return n;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw data_error("mean: empty list");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values, deviation kind) {
  if (values.empty()) throw data_error("stddev: empty list");
  const auto n = values.size();
  if (kind == deviation::sample && n < 2)
    throw data_error("stddev: sample deviation needs at least two values");
  const double m = mean(values);
  double ss = 0.0;
  for (double x : values) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(kind == deviation::sample ? n - 1 : n));
}

double contribution_table::at(metric_field f, char letter) const {
  auto pos = field_domain(f).find(letter);
  if (pos == std::string_view::npos)
    throw data_error(fmt::format("letter '{}' not in domain of {}", letter, field_name(f)));
  return percent[static_cast<std::size_t>(f)][pos];
}

contribution_table contributions(std::span<const cvss_vector> pool) {
  if (pool.empty()) throw data_error("contributions: empty pool");
  std::array<std::array<std::size_t, 4>, field_count> counts{};
  for (const auto& v : pool)
    for (auto f : all_fields) ++counts[static_cast<std::size_t>(f)][v.index(f)];
  contribution_table t;
  for (std::size_t k = 0; k < field_count; ++k)
    for (std::size_t i = 0; i < 4; ++i)
      t.percent[k][i] = 100.0 * static_cast<double>(counts[k][i]) / static_cast<double>(pool.size());
  return t;
}

run_stats compute_run_stats(std::span<const cvss_vector> pool, std::span<const double> bases,
                            const band& b, deviation kind) {
  if (pool.size() != bases.size())
    throw data_error("compute_run_stats: pool and score lists differ in length");
  std::vector<cvss_vector> members;
  std::vector<double> member_bases;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (b.contains(bases[i])) {
      members.push_back(pool[i]);
      member_bases.push_back(bases[i]);
    }
  }

  run_stats s;
  s.band_count = static_cast<int>(members.size());
  s.mean_hamming = kNaN;
  s.hamming_stddev = kNaN;
  s.score_stddev = kNaN;
  if (members.size() >= 2) {
    const auto d = pairwise_hamming(members);
    std::vector<double> dd(d.begin(), d.end());
    s.mean_hamming = mean_pairwise_hamming(members);
    if (kind == deviation::population || dd.size() >= 2) s.hamming_stddev = stddev(dd, kind);
  }
  if (!members.empty()) {
    if (kind == deviation::population || member_bases.size() >= 2)
      s.score_stddev = stddev(member_bases, kind);
    s.contributions = contributions(members);
  }
  return s;
}

}  // namespace cvcov::metrics
