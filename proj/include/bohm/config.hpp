// Experiment configuration text.
//
// Grammar (one statement per line):
//
//   # comment             anything after '#' is ignored
//   [section]             subsequent keys are read as section.key
//   key = value
//
// Keys outside any section are top-level. A key may appear once. Unknown keys
// are fatal. Values:
//
//   complex    0.6 | 0.6+0.8i | -0.5i
//   axes       z, x, -z | 0.6 0 0.8; z     (names or unit triples, ',' or ';' separated)
//              none                    (empty list)
//   scenario   stern_gerlach | sequential | no_crossing | equilibrium | pointer
//
// The full key list and defaults are in `config_keys()`; `canonical_config`
// echoes every key after defaults are filled.

#ifndef BOHM_CONFIG_HPP_
#define BOHM_CONFIG_HPP_

#include "bohm/experiments.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bohm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates. `scenario` (from the command line) picks the
/// defaults; a conflicting `scenario` key in the text is an error.
ExperimentConfig parse_config(std::string_view text, std::optional<Scenario> scenario = std::nullopt);

std::vector<std::string> config_keys();

/// Sorted `key = value` lines covering every key.
std::string canonical_config(const ExperimentConfig& config);

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string content_hash(std::string_view text);
std::string config_hash(const ExperimentConfig& config);

Complex parse_complex(std::string_view text);
std::string format_complex(Complex value);
std::vector<Vector3> parse_axes(std::string_view text);

}  // namespace bohm

#endif  // BOHM_CONFIG_HPP_
