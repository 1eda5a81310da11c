#include "cvcov/cvss.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "cvcov/error.hpp"

namespace cvcov {

namespace {

constexpr std::array<std::string_view, field_count> kNames = {"AV", "AC", "PR", "UI",
                                                              "S",  "C",  "I",  "A"};
constexpr std::array<std::string_view, field_count> kDomains = {"NALP", "LH",  "NLH", "NR",
                                                                "UC",   "NLH", "NLH", "NLH"};

// Weights in domain order. PR has a second row for changed scope.
constexpr double kAV[] = {0.85, 0.62, 0.55, 0.2};
constexpr double kAC[] = {0.77, 0.44};
constexpr double kPRUnchanged[] = {0.85, 0.62, 0.27};
constexpr double kPRChanged[] = {0.85, 0.68, 0.5};
constexpr double kUI[] = {0.85, 0.62};
constexpr double kCIA[] = {0.0, 0.22, 0.56};

constexpr std::size_t slot(metric_field f) { return static_cast<std::size_t>(f); }

std::optional<metric_field> field_from_name(std::string_view name) {
  for (auto f : all_fields)
    if (kNames[slot(f)] == name) return f;
  return std::nullopt;
}

std::optional<std::uint8_t> letter_index(metric_field f, char c) {
  auto pos = kDomains[slot(f)].find(c);
  if (pos == std::string_view::npos) return std::nullopt;
  return static_cast<std::uint8_t>(pos);
}

double weight_at(metric_field f, std::uint8_t i, bool changed) {
  switch (f) {
    case metric_field::AV: return kAV[i];
    case metric_field::AC: return kAC[i];
    case metric_field::PR: return changed ? kPRChanged[i] : kPRUnchanged[i];
    case metric_field::UI: return kUI[i];
    case metric_field::S: return 0.0;
    case metric_field::C:
    case metric_field::I:
    case metric_field::A: return kCIA[i];
  }
  return 0.0;
}

}  // namespace

std::string_view field_name(metric_field f) { return kNames[slot(f)]; }

std::string_view field_domain(metric_field f) { return kDomains[slot(f)]; }

bool is_valid(metric_value v) {
  return slot(v.field) < field_count && letter_index(v.field, v.letter).has_value();
}

double weight(metric_value value, metric_value scope) {
  auto i = letter_index(value.field, value.letter);
  if (!i || scope.field != metric_field::S || !letter_index(scope.field, scope.letter))
    throw std::invalid_argument(fmt::format("weight: invalid metric value {}:{}",
                                            field_name(value.field), value.letter));
  return weight_at(value.field, *i, scope.letter == 'C');
}

cvss_vector cvss_vector::from_indices(const std::array<std::uint8_t, field_count>& idx) {
  for (auto f : all_fields)
    if (idx[slot(f)] >= kDomains[slot(f)].size())
      throw std::out_of_range(fmt::format("cvss_vector: index {} out of range for {}",
                                          idx[slot(f)], field_name(f)));
  cvss_vector v;
  v.idx_ = idx;
  return v;
}

cvss_vector cvss_vector::from_ordinal(std::size_t n) {
  if (n >= vector_space_size) throw std::out_of_range("cvss_vector: ordinal out of range");
  std::array<std::uint8_t, field_count> idx{};
  for (std::size_t k = field_count; k-- > 0;) {
    const auto radix = kDomains[k].size();
    idx[k] = static_cast<std::uint8_t>(n % radix);
    n /= radix;
  }
  return from_indices(idx);
}

std::size_t cvss_vector::ordinal() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < field_count; ++k) n = n * kDomains[k].size() + idx_[k];
  return n;
}

char cvss_vector::letter(metric_field f) const { return kDomains[slot(f)][idx_[slot(f)]]; }

cvss_vector cvss_vector::with(metric_field f, char letter) const {
  auto i = letter_index(f, letter);
  if (!i)
    throw parse_error(fmt::format("letter '{}' is not permitted for field {}", letter,
                                  field_name(f)));
  return with_index(f, *i);
}

cvss_vector cvss_vector::with_index(metric_field f, std::uint8_t i) const {
  auto idx = idx_;
  idx[slot(f)] = i;
  return from_indices(idx);
}

std::string cvss_vector::to_string() const {
  std::string out;
  out.reserve(36);
  for (auto f : all_fields) {
    if (!out.empty()) out += '/';
    out += field_name(f);
    out += ':';
    out += letter(f);
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const cvss_vector& v) { return os << v.to_string(); }

cvss_vector parse_vector(std::string_view s) {
  for (std::string_view prefix : {"CVSS:3.0/", "CVSS:3.1/"}) {
    if (s.starts_with(prefix)) {
      s.remove_prefix(prefix.size());
      break;
    }
  }
  if (s.empty()) throw parse_error("empty vector string");

  std::array<std::optional<std::uint8_t>, field_count> seen{};
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find('/', start);
    if (end == std::string_view::npos) end = s.size();
    const auto token = s.substr(start, end - start);
    start = end + 1;

    const auto colon = token.find(':');
    if (colon == std::string_view::npos)
      throw parse_error(fmt::format("malformed token '{}': expected FIELD:LETTER", token));
    const auto name = token.substr(0, colon);
    const auto letters = token.substr(colon + 1);
    auto f = field_from_name(name);
    if (!f) throw parse_error(fmt::format("unknown field '{}' in token '{}'", name, token));
    if (seen[slot(*f)])
      throw parse_error(fmt::format("duplicate field {} in token '{}'", name, token));
    std::optional<std::uint8_t> i;
    if (letters.size() == 1) i = letter_index(*f, letters[0]);
    if (!i)
      throw parse_error(fmt::format("field {}: letter '{}' not in {{{}}} (token '{}')", name,
                                    letters, fmt::join(field_domain(*f), ","), token));
    seen[slot(*f)] = *i;
  }

  std::array<std::uint8_t, field_count> idx{};
  for (auto f : all_fields) {
    if (!seen[slot(f)])
      throw parse_error(fmt::format("missing field {}", field_name(f)));
    idx[slot(f)] = *seen[slot(f)];
  }
  return cvss_vector::from_indices(idx);
}

double round_up_tenth(double x) {
  const double tenths = x * 10.0;
  const double nearest = std::round(tenths);
  if (std::abs(tenths - nearest) < 1e-8) return nearest / 10.0;
  return std::ceil(tenths) / 10.0;
}

score_breakdown score(const cvss_vector& v) {
  const bool changed = v.scope_changed();
  auto w = [&](metric_field f) { return weight_at(f, v.index(f), changed); };

  score_breakdown out;
  out.iss = 1.0 - (1.0 - w(metric_field::C)) * (1.0 - w(metric_field::I)) *
                      (1.0 - w(metric_field::A));
  out.impact = changed ? 7.52 * (out.iss - 0.029) - 3.25 * std::pow(out.iss - 0.02, 15)
                       : 6.42 * out.iss;
  out.exploitability =
      8.22 * w(metric_field::AV) * w(metric_field::AC) * w(metric_field::PR) * w(metric_field::UI);

  if (out.impact <= 0.0) {
    out.base = 0.0;
  } else if (changed) {
    out.base = round_up_tenth(std::min(1.08 * (out.impact + out.exploitability), 10.0));
  } else {
    out.base = round_up_tenth(std::min(out.impact + out.exploitability, 10.0));
  }
  return out;
}

std::vector<scored_entry> enumerate_all() {
  std::vector<scored_entry> out;
  out.reserve(vector_space_size);
  for (std::size_t n = 0; n < vector_space_size; ++n) {
    auto v = cvss_vector::from_ordinal(n);
    out.push_back({v, score(v)});
  }
  return out;
}

}  // namespace cvcov
