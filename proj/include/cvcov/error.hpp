#pragma once

#include <stdexcept>
#include <string>

namespace cvcov {

// Malformed user input: vector strings, feeds, stores, pattern files.
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected configuration (GA/PSO knobs, bands, experiment settings).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class parse_error : public data_error {
 public:
  using data_error::data_error;
};

}  // namespace cvcov
