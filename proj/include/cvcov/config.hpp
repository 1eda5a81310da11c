#pragma once

// Flat key=value configuration shared by the config file and CLI flags.

#include <map>
#include <string>
#include <string_view>

#include "cvcov/ga.hpp"
#include "cvcov/pso.hpp"

namespace cvcov {

using config_map = std::map<std::string, std::string, std::less<>>;

// One `key = value` per line; '#' starts a comment. Later keys win.
config_map parse_config(std::string_view text);
config_map load_config(const std::string& path);

// Every key understood by any command; apply_* reject anything else.
bool is_known_key(std::string_view key);

void apply(const config_map& m, ga::config& cfg);
void apply(const config_map& m, pso::config& cfg);

// Typed accessors that raise config_error naming the key.
long long get_int(const config_map& m, std::string_view key, long long fallback);
double get_real(const config_map& m, std::string_view key, double fallback);
bool get_bool(const config_map& m, std::string_view key, bool fallback);
std::string get_string(const config_map& m, std::string_view key, std::string fallback);

}  // namespace cvcov
