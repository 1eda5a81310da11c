#pragma once

// CVSS v3.1 base-metric vectors and scoring.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cvcov {

enum class metric_field : std::uint8_t { AV, AC, PR, UI, S, C, I, A };

inline constexpr std::size_t field_count = 8;

inline constexpr std::array<metric_field, field_count> all_fields = {
    metric_field::AV, metric_field::AC, metric_field::PR, metric_field::UI,
    metric_field::S,  metric_field::C,  metric_field::I,  metric_field::A};

// Number of distinct base-metric vectors: 4*2*3*2*2*3*3*3.
inline constexpr std::size_t vector_space_size = 2592;

std::string_view field_name(metric_field f);

// Permissible letters of a field, in canonical (enumeration) order.
std::string_view field_domain(metric_field f);

struct metric_value {
  metric_field field;
  char letter;

  friend bool operator==(const metric_value&, const metric_value&) = default;
};

bool is_valid(metric_value v);

// Numeric weight of a metric value. Only PR depends on scope.
double weight(metric_value value, metric_value scope);

class cvss_vector {
 public:
  // AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N
  cvss_vector() = default;

  // Per-field positions within field_domain(); throws std::out_of_range.
  static cvss_vector from_indices(const std::array<std::uint8_t, field_count>& idx);

  // Position in enumeration order, 0 <= n < vector_space_size.
  static cvss_vector from_ordinal(std::size_t n);

  char letter(metric_field f) const;
  std::uint8_t index(metric_field f) const { return idx_[static_cast<std::size_t>(f)]; }
  metric_value value(metric_field f) const { return {f, letter(f)}; }

  std::size_t ordinal() const;

  // Copy with one field replaced; throws parse_error if letter is not in
  // the field's domain.
  cvss_vector with(metric_field f, char letter) const;
  cvss_vector with_index(metric_field f, std::uint8_t i) const;

  bool scope_changed() const { return letter(metric_field::S) == 'C'; }

  // Canonical AV:x/AC:x/PR:x/UI:x/S:x/C:x/I:x/A:x, no version prefix.
  std::string to_string() const;

  friend bool operator==(const cvss_vector&, const cvss_vector&) = default;
  // Enumeration order (per-field domain positions, AV most significant).
  friend auto operator<=>(const cvss_vector&, const cvss_vector&) = default;

 private:
  std::array<std::uint8_t, field_count> idx_{};
};

std::ostream& operator<<(std::ostream& os, const cvss_vector& v);

// Accepts an optional CVSS:3.0/ or CVSS:3.1/ prefix and any token order.
// Throws parse_error naming the field and the offending token.
cvss_vector parse_vector(std::string_view s);

struct score_breakdown {
  double iss = 0.0;
  double impact = 0.0;
  double exploitability = 0.0;
  double base = 0.0;

  friend bool operator==(const score_breakdown&, const score_breakdown&) = default;
};

// Smallest multiple of 0.1 >= x; values within 1e-9 of a multiple snap to it.
double round_up_tenth(double x);

score_breakdown score(const cvss_vector& v);

inline double base_score(const cvss_vector& v) { return score(v).base; }

struct scored_entry {
  cvss_vector vector;
  score_breakdown breakdown;
};

// Every base-metric vector once, in enumeration order, with its score.
std::vector<scored_entry> enumerate_all();

}  // namespace cvcov

template <>
struct std::hash<cvcov::cvss_vector> {
  std::size_t operator()(const cvcov::cvss_vector& v) const noexcept { return v.ordinal(); }
};
