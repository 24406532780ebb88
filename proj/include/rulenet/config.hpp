#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rulenet/model.hpp"

namespace rulenet {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FoodDefault { SingleAtom, AllAtoms };

// Settings of one command-line run. Every field has a config-file key of the
// same name; see to_canonical() for the full list.
struct RunConfig {
  std::string model = "I";  // "I" (z = 1) or "II"
  int alphabet = 3;
  // Empty for the command default, "levels:0,1" for one food per level, or
  // "words:a,ab" for explicit food molecules.
  std::string foods;
  double p = 0.08;
  double q = 0.08;
  double z = 1.0;
  int exponent_shift = 0;
  std::string z_grid;  // start:stop:step
  int samples = 100;
  int n_max = 54;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: RULENET_THREADS, else 1
  std::size_t budget = 100'000'000;
  int chain_level = 1;  // start level m of the catabolic level-shift chain

  // Parameters with the command's food default; throws ConfigError.
  ModelParams model_params(FoodDefault default_foods = FoodDefault::SingleAtom) const;
  // Worker count after the environment fallback.
  int resolved_threads() const;
  // Sorted key = value lines of every field, the input of config_hash().
  std::string to_canonical() const;
  std::string hash() const;
};

// Parses "start:stop:step" into the points start + i * step up to stop; a
// stop that lies on the grid up to rounding is included.
std::vector<double> parse_z_grid(const std::string& spec);

// 64-bit FNV-1a of the text, as 16 hex digits.
std::string config_hash(const std::string& text);

}  // namespace rulenet
