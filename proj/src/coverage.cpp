#include "cvcov/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <zlib.h>

#include "cvcov/error.hpp"
#include "json.hpp"

namespace cvcov::coverage {

using nlohmann::json;
using nlohmann::ordered_json;

bool is_cve_id(std::string_view id) {
  static const std::regex re("CVE-[0-9]{4}-[0-9]{4,}");
  return std::regex_match(id.begin(), id.end(), re);
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string gunzip_file(const std::filesystem::path& path) {
  gzFile gz = gzopen(path.string().c_str(), "rb");
  if (!gz) throw data_error(fmt::format("cannot open {}", path.string()));
  std::string out;
  char buf[1 << 15];
  int n = 0;
  while ((n = gzread(gz, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
  int err = 0;
  const char* msg = gzerror(gz, &err);
  const std::string what = msg ? msg : "";
  gzclose(gz);
  if (n < 0 || (err != Z_OK && err != Z_STREAM_END))
    throw data_error(fmt::format("{}: gzip error: {}", path.string(), what));
  return out;
}

const json* find_path(const json& j, std::initializer_list<const char*> keys) {
  const json* cur = &j;
  for (const char* k : keys) {
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(k);
    if (it == cur->end()) return nullptr;
    cur = &*it;
  }
  return cur;
}

std::string english_description(const json& item) {
  const json* data = find_path(item, {"cve", "description", "description_data"});
  if (!data || !data->is_array()) return {};
  for (const auto& d : *data)
    if (d.is_object() && d.value("lang", "") == "en" && d.contains("value") &&
        d["value"].is_string())
      return d["value"].get<std::string>();
  return {};
}

}  // namespace

ingest_result ingest(std::string_view feed_json) {
  json doc = json::parse(feed_json, nullptr, false);
  if (doc.is_discarded()) throw data_error("feed: malformed JSON");
  if (!doc.is_object() || !doc.contains("CVE_Items") || !doc["CVE_Items"].is_array())
    throw data_error("feed: missing CVE_Items array");

  ingest_result out;
  std::size_t position = 0;
  for (const auto& item : doc["CVE_Items"]) {
    const auto where = fmt::format("item {}", position++);
    const json* id_node = find_path(item, {"cve", "CVE_data_meta", "ID"});
    const std::string id = id_node && id_node->is_string() ? id_node->get<std::string>() : "";
    const auto label = id.empty() ? where : id;

    if (!is_cve_id(id)) {
      ++out.skipped;
      out.diagnostics.push_back(fmt::format("{}: skipped, bad or missing CVE id '{}'", where, id));
      continue;
    }
    const json* v3 = find_path(item, {"impact", "baseMetricV3", "cvssV3"});
    const json* vs = v3 ? find_path(*v3, {"vectorString"}) : nullptr;
    if (!vs || !vs->is_string()) {
      ++out.skipped;
      out.diagnostics.push_back(fmt::format("{}: skipped, no CVSS v3 base vector", label));
      continue;
    }
    cve_record rec;
    try {
      rec.vector = parse_vector(vs->get<std::string>());
    } catch (const parse_error& e) {
      ++out.skipped;
      out.diagnostics.push_back(fmt::format("{}: skipped, {}", label, e.what()));
      continue;
    }
    rec.id = id;
    rec.base = base_score(rec.vector);
    rec.description = english_description(item);

    const json* published = find_path(*v3, {"baseScore"});
    if (published && published->is_number()) {
      const double p = published->get<double>();
      if (std::abs(p - rec.base) > ingest_result::score_tolerance) {
        ++out.flagged;
        out.diagnostics.push_back(fmt::format(
            "{}: published baseScore {:.1f} differs from local score {:.1f}", id, p, rec.base));
      }
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

ingest_result ingest_file(const std::filesystem::path& path) {
  std::string raw = read_file(path);
  if (raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0x1f &&
      static_cast<unsigned char>(raw[1]) == 0x8b)
    raw = gunzip_file(path);
  return ingest(raw);
}

std::string to_jsonl(const std::vector<cve_record>& records) {
  std::string out;
  for (const auto& r : records) {
    ordered_json j;
    j["id"] = r.id;
    j["vector"] = r.vector.to_string();
    j["base"] = r.base;
    j["description"] = r.description;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<cve_record> from_jsonl(std::string_view text) {
  std::vector<cve_record> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw data_error(fmt::format("store line {}: malformed JSON", line_no));
    try {
      cve_record r;
      r.id = j.at("id").get<std::string>();
      r.vector = parse_vector(j.at("vector").get<std::string>());
      r.base = j.at("base").get<double>();
      r.description = j.value("description", "");
      if (!is_cve_id(r.id))
        throw data_error(fmt::format("bad CVE id '{}'", r.id));
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw data_error(fmt::format("store line {}: {}", line_no, e.what()));
    } catch (const data_error& e) {
      throw data_error(fmt::format("store line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

void save_store(const std::filesystem::path& path, const std::vector<cve_record>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error(fmt::format("cannot write {}", path.string()));
  out << to_jsonl(records);
}

std::vector<cve_record> load_store(const std::filesystem::path& path) {
  return from_jsonl(read_file(path));
}

std::string_view mode_name(match_mode m) {
  switch (m) {
    case match_mode::exact_pattern: return "exact-pattern";
    case match_mode::score_band: return "score-band";
    case match_mode::hamming: return "hamming";
  }
  return "?";
}

match_mode parse_mode(std::string_view name) {
  if (name == "exact" || name == "exact-pattern") return match_mode::exact_pattern;
  if (name == "score-band") return match_mode::score_band;
  if (name == "hamming") return match_mode::hamming;
  throw config_error(fmt::format("unknown match mode '{}'", name));
}

double coverage(int inspected, int total) {
  if (total <= 0) throw data_error("empty database");
  if (inspected < 0 || inspected > total)
    throw data_error(fmt::format("inspected {} outside [0, {}]", inspected, total));
  return std::round(1000.0 * inspected / total) / 10.0;
}

coverage_report match(const std::vector<cvss_vector>& patterns,
                      const std::vector<cve_record>& db, const match_options& opts) {
  if (db.empty()) throw data_error("empty database");
  if (opts.mode == match_mode::score_band && !opts.band)
    throw config_error("score-band mode requires a band");
  if (opts.mode == match_mode::hamming && (opts.max_distance < 0 || opts.max_distance > 8))
    throw config_error("hamming mode distance must lie in [0, 8]");

  const std::unordered_set<cvss_vector> exact(patterns.begin(), patterns.end());
  auto matches = [&](const cve_record& r) {
    switch (opts.mode) {
      case match_mode::exact_pattern: return exact.contains(r.vector);
      case match_mode::score_band: return opts.band->contains(r.base);
      case match_mode::hamming:
        return std::any_of(patterns.begin(), patterns.end(), [&](const cvss_vector& p) {
          return metrics::hamming(p, r.vector) <= opts.max_distance;
        });
    }
    return false;
  };

  coverage_report rep;
  rep.mode = opts.mode;
  rep.total = static_cast<int>(db.size());
  for (const auto& r : db)
    if (matches(r)) rep.matched_ids.push_back(r.id);
  rep.inspected = static_cast<int>(rep.matched_ids.size());
  rep.percent = coverage(rep.inspected, rep.total);
  return rep;
}

std::string report_json(const coverage_report& r) {
  ordered_json j;
  j["inspected"] = r.inspected;
  j["total"] = r.total;
  j["percent"] = r.percent;
  j["matched_ids"] = r.matched_ids;
  j["match_mode"] = std::string(mode_name(r.mode));
  return j.dump(2) + "\n";
}

std::string report_table(const coverage_report& r) {
  std::string out;
  out += fmt::format("{:<12} {}\n", "mode", mode_name(r.mode));
  out += fmt::format("{:<12} {}\n", "inspected", r.inspected);
  out += fmt::format("{:<12} {}\n", "total", r.total);
  out += fmt::format("{:<12} {:.1f}%\n", "coverage", r.percent);
  for (const auto& id : r.matched_ids) out += fmt::format("  {}\n", id);
  return out;
}

std::vector<cvss_vector> load_patterns(const std::filesystem::path& path) {
  json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_array())
    throw data_error(fmt::format("{}: expected a JSON array of patterns", path.string()));
  std::vector<cvss_vector> out;
  for (const auto& e : doc) {
    if (e.is_string())
      out.push_back(parse_vector(e.get<std::string>()));
    else if (e.is_object() && e.contains("vector") && e["vector"].is_string())
      out.push_back(parse_vector(e["vector"].get<std::string>()));
    else
      throw data_error(fmt::format("{}: pattern entry without a vector", path.string()));
  }
  return out;
}

}  // namespace cvcov::coverage
