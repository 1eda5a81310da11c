#pragma once

// CVE record ingestion, pattern matching and vulnerability coverage.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvcov/cvss.hpp"
#include "cvcov/metrics.hpp"

namespace cvcov::coverage {

struct cve_record {
  std::string id;
  cvss_vector vector;
  double base = 0.0;
  std::string description;

  friend bool operator==(const cve_record&, const cve_record&) = default;
};

bool is_cve_id(std::string_view id);

struct ingest_result {
  std::vector<cve_record> records;
  // Items without a usable v3 base vector.
  int skipped = 0;
  // Published scores that disagree with local rescoring by more than this
  // are kept but flagged.
  static constexpr double score_tolerance = 0.05;
  int flagged = 0;
  std::vector<std::string> diagnostics;
};

// NVD JSON 1.1 feed text. Throws data_error on malformed JSON or a document
// without a CVE_Items array; bad items are skipped with a diagnostic.
ingest_result ingest(std::string_view feed_json);

// Reads a plain or gzip-compressed feed file.
ingest_result ingest_file(const std::filesystem::path& path);

// One JSON object per line: id, vector, base, description.
std::string to_jsonl(const std::vector<cve_record>& records);
std::vector<cve_record> from_jsonl(std::string_view text);
void save_store(const std::filesystem::path& path, const std::vector<cve_record>& records);
std::vector<cve_record> load_store(const std::filesystem::path& path);

enum class match_mode { exact_pattern, score_band, hamming };

std::string_view mode_name(match_mode m);
match_mode parse_mode(std::string_view name);

struct match_options {
  match_mode mode = match_mode::exact_pattern;
  std::optional<metrics::band> band;
  // hamming mode: a record matches when some pattern is within this distance.
  int max_distance = 1;
};

struct coverage_report {
  int inspected = 0;
  int total = 0;
  double percent = 0.0;
  std::vector<std::string> matched_ids;
  match_mode mode = match_mode::exact_pattern;
};

// (inspected / total) * 100 rounded to one decimal.
double coverage(int inspected, int total);

coverage_report match(const std::vector<cvss_vector>& patterns,
                      const std::vector<cve_record>& db, const match_options& opts);

std::string report_json(const coverage_report& r);
std::string report_table(const coverage_report& r);

// Pattern files: a JSON array of objects with a "vector" key (pool and
// swarm exports) or of bare vector strings.
std::vector<cvss_vector> load_patterns(const std::filesystem::path& path);

}  // namespace cvcov::coverage
