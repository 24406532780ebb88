#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "rulenet/word.hpp"

namespace rulenet {

enum class Kind { Anabolic, Catabolic };
enum class Variant { ModelI, ModelII };

const char* to_string(Kind kind);
const char* to_string(Variant variant);

class Foodset {
 public:
  explicit Foodset(std::vector<Word> foods);

  // One food per atom, the default of the network analysis.
  static Foodset atoms(const Alphabet& alphabet);
  // One food for each requested level; foods sharing a level get distinct contents.
  static Foodset of_levels(const Alphabet& alphabet, const std::vector<int>& levels);

  const std::vector<Word>& foods() const { return foods_; }
  int size() const { return static_cast<int>(foods_.size()); }
  const Word& operator[](int i) const { return foods_[i]; }
  // Index of a food equal to the given word, if any.
  std::optional<int> index_of(const Word& w) const;

  static constexpr int kMaxFoods = 64;

 private:
  std::vector<Word> foods_;
};

struct ModelParams {
  Alphabet alphabet;
  Foodset foodset;
  double p = 0.1;
  double q = 0.1;
  double z = 1.0;
  Variant variant = Variant::ModelI;
  // Offset added to the complexity level in the acceptance exponent: 0 follows
  // p z^{|F|+|X|}, 1 gives the ell+1 convention p z^{|F|+|X|+1}.
  int exponent_shift = 0;

  static ModelParams model_one(int alphabet_size, double p, double q);
  static ModelParams model_two(int alphabet_size, double p, double q, double z);

  // Copy with a different fugacity; the variant follows z (ModelI iff z = 1).
  ModelParams with_z(double z_new) const;
  ModelParams with_foodset(Foodset foods) const;

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct ReactionId {
  Kind kind = Kind::Anabolic;
  Word food;      // anabolic only
  Word reactant;
  int cut = 0;    // catabolic only: atoms [0, cut) separate from [cut, len)

  static ReactionId anabolic(const Word& food, const Word& reactant) {
    return {Kind::Anabolic, food, reactant, 0};
  }
  static ReactionId catabolic(const Word& reactant, int cut) {
    return {Kind::Catabolic, Word{}, reactant, cut};
  }

  bool valid() const;
  // Sum of reactant levels: |F| + |X| (anabolic) or |X| (catabolic).
  int complexity_level() const;

  friend bool operator==(const ReactionId&, const ReactionId&) = default;
};

struct ReactionIdHash {
  std::size_t operator()(const ReactionId& r) const noexcept;
};

// Acceptance probability of a reaction whose reactant levels sum to ell:
// rate * z^{ell + exponent_shift}, with rate = p (anabolic) or q (catabolic).
// Every theory formula goes through this function, so the exponent convention
// lives in exactly one place.
double acceptance(const ModelParams& params, Kind kind, int ell);

double bernoulli_param(const ModelParams& params, const ReactionId& rid);

// Hash-derived uniform in [0, 1) for (seed, rid).
double reaction_uniform(std::uint64_t seed, const ReactionId& rid);

// Stable mix of a master seed and a run index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// A realization of the quenched field omega.
class ReactionOracle {
 public:
  virtual ~ReactionOracle() = default;
  virtual bool omega(const ReactionId& rid) const = 0;
};

// omega = [u(seed, rid) < bernoulli_param(rid)].
class HashOracle final : public ReactionOracle {
 public:
  HashOracle(const ModelParams& params, std::uint64_t seed);
  bool omega(const ReactionId& rid) const override;
  double param(const ReactionId& rid) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  double p_;
  double q_;
  std::vector<double> zpow_;
  int shift_;
};

// Fires exactly on an explicit set of reactions; used for hand-built fields.
class InjectedOracle final : public ReactionOracle {
 public:
  InjectedOracle() = default;
  explicit InjectedOracle(std::vector<ReactionId> firing);
  void add(const ReactionId& rid) { firing_.insert(rid); }
  bool omega(const ReactionId& rid) const override { return firing_.count(rid) != 0; }

 private:
  std::unordered_set<ReactionId, ReactionIdHash> firing_;
};

// True iff some subword of x (x included) fires with food f.
bool is_reactant_anabolic(const ReactionOracle& oracle, const Word& food, const Word& x);

// True iff some (subword, aligned cut) of x fires.
bool is_decomposable(const ReactionOracle& oracle, const Word& x);

// Minimal complexity level over firing reactions from which rid derives;
// nullopt when the completed reaction is not in the network.
std::optional<int> complexity_index(const ReactionOracle& oracle, const ReactionId& rid);

}  // namespace rulenet
