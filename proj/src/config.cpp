#include "rulenet/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace rulenet {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + " '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string("cannot parse ") + what + " '" + text + "'");
  }
  return v;
}

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ModelParams RunConfig::model_params(FoodDefault default_foods) const {
  if (model != "I" && model != "II") throw ConfigError("model must be I or II");
  if (alphabet < 2 || alphabet > 16) throw ConfigError("alphabet size must lie in [2, 16]");
  if (n_max < 0) throw ConfigError("n_max must be non-negative");
  if (samples < 1) throw ConfigError("samples must be positive");
  if (exponent_shift < 0) throw ConfigError("exponent_shift must be non-negative");
  if (model == "I" && z != 1.0) throw ConfigError("Model I requires z = 1");
  if (model == "II" && !(z > 0.0 && z < 1.0)) throw ConfigError("Model II requires z in (0,1)");

  const Alphabet alpha(alphabet);
  ModelParams params = ModelParams::model_two(alphabet, p, q, z);
  params.exponent_shift = exponent_shift;
  try {
    if (foods.empty()) {
      params.foodset = default_foods == FoodDefault::AllAtoms ? Foodset::atoms(alpha)
                                                              : Foodset::of_levels(alpha, {0});
    } else if (foods.rfind("levels:", 0) == 0) {
      std::vector<int> levels;
      for (const std::string& item : split(foods.substr(7), ',')) {
        levels.push_back(static_cast<int>(parse_double(item, "food level")));
      }
      params.foodset = Foodset::of_levels(alpha, levels);
    } else if (foods.rfind("words:", 0) == 0) {
      std::vector<Word> words;
      for (const std::string& item : split(foods.substr(6), ',')) {
        words.push_back(Word::parse(item, alpha));
      }
      params.foodset = Foodset(std::move(words));
    } else {
      throw ConfigError("foods must start with levels: or words:");
    }
    params.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return params;
}

int RunConfig::resolved_threads() const {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("RULENET_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::string RunConfig::to_canonical() const {
  std::ostringstream out;
  out << "alphabet = " << alphabet << '\n'
      << "budget = " << budget << '\n'
      << "chain_level = " << chain_level << '\n'
      << "exponent_shift = " << exponent_shift << '\n'
      << "foods = " << foods << '\n'
      << "model = " << model << '\n'
      << "n_max = " << n_max << '\n'
      << "p = " << full_precision(p) << '\n'
      << "q = " << full_precision(q) << '\n'
      << "samples = " << samples << '\n'
      << "seed = " << seed << '\n'
      << "z = " << full_precision(z) << '\n'
      << "z_grid = " << z_grid << '\n';
  return out.str();
}

std::string RunConfig::hash() const { return config_hash(to_canonical()); }

std::vector<double> parse_z_grid(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.size() != 3) throw ConfigError("z grid must be start:stop:step");
  const double start = parse_double(parts[0], "grid start");
  const double stop = parse_double(parts[1], "grid stop");
  const double step = parse_double(parts[2], "grid step");
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
  if (stop < start) throw ConfigError("grid stop lies below its start");
  // Points are start + i * step, so rounding does not accumulate.
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rulenet
