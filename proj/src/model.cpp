#include "rulenet/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rulenet {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t reaction_hash(std::uint64_t seed, const ReactionId& r) {
  std::uint64_t h = mix64(seed + kGolden * (r.kind == Kind::Anabolic ? 1 : 2));
  auto absorb = [&h](std::uint64_t v) { h = mix64(h ^ v) + kGolden; };
  absorb(r.food.low());
  absorb(r.food.high());
  absorb(r.reactant.low());
  absorb(r.reactant.high());
  absorb(static_cast<std::uint64_t>(r.cut));
  return mix64(h);
}

double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

const char* to_string(Kind kind) {
  return kind == Kind::Anabolic ? "anabolic" : "catabolic";
}

const char* to_string(Variant variant) {
  return variant == Variant::ModelI ? "I" : "II";
}

Foodset::Foodset(std::vector<Word> foods) : foods_(std::move(foods)) {
  if (foods_.empty()) throw std::invalid_argument("foodset must be non-empty");
  if (static_cast<int>(foods_.size()) > kMaxFoods) {
    throw std::invalid_argument("foodset holds at most 64 foods");
  }
  for (std::size_t i = 0; i < foods_.size(); ++i) {
    if (foods_[i].empty()) throw std::invalid_argument("foods are non-empty words");
    for (std::size_t j = 0; j < i; ++j) {
      if (foods_[i] == foods_[j]) throw std::invalid_argument("duplicate food " + foods_[i].str());
    }
  }
}

Foodset Foodset::atoms(const Alphabet& alphabet) {
  std::vector<Word> foods;
  for (int a = 0; a < std::min(alphabet.size(), kMaxFoods); ++a) {
    foods.push_back(Word::single(a, alphabet));
  }
  return Foodset(std::move(foods));
}

Foodset Foodset::of_levels(const Alphabet& alphabet, const std::vector<int>& levels) {
  std::vector<Word> foods;
  std::vector<int> used;
  for (int level : levels) {
    if (level < 0) throw std::invalid_argument("food levels are non-negative");
    // The k-th food of a given level spells k in base |A| over level+1 atoms.
    int k = static_cast<int>(std::count(used.begin(), used.end(), level));
    used.push_back(level);
    std::vector<int> atoms(level + 1, 0);
    for (int i = level; i >= 0 && k > 0; --i) {
      atoms[i] = k % alphabet.size();
      k /= alphabet.size();
    }
    if (k > 0) throw std::invalid_argument("too many foods for level " + std::to_string(level));
    foods.push_back(Word::from_atoms(atoms, alphabet));
  }
  return Foodset(std::move(foods));
}

std::optional<int> Foodset::index_of(const Word& w) const {
  for (int i = 0; i < size(); ++i) {
    if (foods_[i] == w) return i;
  }
  return std::nullopt;
}

ModelParams ModelParams::model_one(int alphabet_size, double p, double q) {
  Alphabet alphabet(alphabet_size);
  return ModelParams{alphabet, Foodset::of_levels(alphabet, {0}), p, q, 1.0, Variant::ModelI, 0};
}

ModelParams ModelParams::model_two(int alphabet_size, double p, double q, double z) {
  Alphabet alphabet(alphabet_size);
  return ModelParams{alphabet, Foodset::of_levels(alphabet, {0}), p, q, z,
                     z == 1.0 ? Variant::ModelI : Variant::ModelII, 0};
}

ModelParams ModelParams::with_z(double z_new) const {
  ModelParams out = *this;
  out.z = z_new;
  out.variant = z_new == 1.0 ? Variant::ModelI : Variant::ModelII;
  return out;
}

ModelParams ModelParams::with_foodset(Foodset foods) const {
  ModelParams out = *this;
  out.foodset = std::move(foods);
  return out;
}

void ModelParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in (0,1)");
  if (!(z > 0.0 && z <= 1.0)) throw std::invalid_argument("z must lie in (0,1]");
  if ((variant == Variant::ModelI) != (z == 1.0)) {
    throw std::invalid_argument("Model I requires z = 1 and Model II requires z < 1");
  }
  if (exponent_shift < 0) throw std::invalid_argument("exponent shift must be non-negative");
  for (const Word& f : foodset.foods()) {
    if (f.bits_per_atom() != alphabet.bits_per_atom()) {
      throw std::invalid_argument("food word built over a different alphabet");
    }
    for (int a : f.atoms()) {
      if (a >= alphabet.size()) throw std::invalid_argument("food atom outside alphabet");
    }
  }
}

bool ReactionId::valid() const {
  if (reactant.empty()) return false;
  if (kind == Kind::Anabolic) return !food.empty();
  return cut >= 1 && cut <= reactant.length() - 1;
}

int ReactionId::complexity_level() const {
  return kind == Kind::Anabolic ? food.level() + reactant.level() : reactant.level();
}

std::size_t ReactionIdHash::operator()(const ReactionId& r) const noexcept {
  return static_cast<std::size_t>(reaction_hash(0x5eedULL, r));
}

double acceptance(const ModelParams& params, Kind kind, int ell) {
  const double rate = kind == Kind::Anabolic ? params.p : params.q;
  if (params.z == 1.0) return rate;
  return rate * std::pow(params.z, ell + params.exponent_shift);
}

double bernoulli_param(const ModelParams& params, const ReactionId& rid) {
  if (!rid.valid()) throw std::invalid_argument("invalid reaction id");
  return acceptance(params, rid.kind, rid.complexity_level());
}

double reaction_uniform(std::uint64_t seed, const ReactionId& rid) {
  return to_unit(reaction_hash(seed, rid));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master ^ 0x6a09e667f3bcc909ULL) + kGolden * (index + 1));
}

HashOracle::HashOracle(const ModelParams& params, std::uint64_t seed)
    : seed_(seed), p_(params.p), q_(params.q), shift_(params.exponent_shift) {
  params.validate();
  constexpr int kTable = 1024;
  zpow_.resize(kTable);
  for (int k = 0; k < kTable; ++k) zpow_[k] = params.z == 1.0 ? 1.0 : std::pow(params.z, k);
}

double HashOracle::param(const ReactionId& rid) const {
  const double rate = rid.kind == Kind::Anabolic ? p_ : q_;
  return rate * zpow_[rid.complexity_level() + shift_];
}

bool HashOracle::omega(const ReactionId& rid) const {
  return reaction_uniform(seed_, rid) < param(rid);
}

InjectedOracle::InjectedOracle(std::vector<ReactionId> firing) {
  for (const ReactionId& r : firing) firing_.insert(r);
}

bool is_reactant_anabolic(const ReactionOracle& oracle, const Word& food, const Word& x) {
  const int n = x.length();
  for (int len = 1; len <= n; ++len) {
    for (int i = 0; i + len <= n; ++i) {
      if (oracle.omega(ReactionId::anabolic(food, x.sub(i, len)))) return true;
    }
  }
  return false;
}

bool is_decomposable(const ReactionOracle& oracle, const Word& x) {
  const int n = x.length();
  for (int len = 2; len <= n; ++len) {
    for (int i = 0; i + len <= n; ++i) {
      const Word s = x.sub(i, len);
      for (int cut = 1; cut < len; ++cut) {
        if (oracle.omega(ReactionId::catabolic(s, cut))) return true;
      }
    }
  }
  return false;
}

std::optional<int> complexity_index(const ReactionOracle& oracle, const ReactionId& rid) {
  if (!rid.valid()) throw std::invalid_argument("invalid reaction id");
  const Word& x = rid.reactant;
  const int n = x.length();
  // Subwords are scanned by increasing length, so the first hit is minimal.
  for (int len = 1; len <= n; ++len) {
    for (int i = 0; i + len <= n; ++i) {
      const Word s = x.sub(i, len);
      if (rid.kind == Kind::Anabolic) {
        if (oracle.omega(ReactionId::anabolic(rid.food, s))) return rid.food.level() + s.level();
      } else if (i < rid.cut && rid.cut < i + len) {
        if (oracle.omega(ReactionId::catabolic(s, rid.cut - i))) return s.level();
      }
    }
  }
  return std::nullopt;
}

}  // namespace rulenet
