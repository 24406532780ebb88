#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rulenet/gw.hpp"
#include "rulenet/model.hpp"

namespace rulenet {

// Parameters of a phase function. The fugacity of `params` is ignored; every
// function takes z explicitly. `weight` multiplies the reaction mass, so
// weight 2 gives psi(z | |A|, 2|F|, p') for the two-sided network events.
struct PhaseSpec {
  Kind kind = Kind::Anabolic;
  ModelParams params;
  double weight = 1.0;

  // The lemma specializations: p'(z) = p z with |F| p = food_rate, and
  // psi_cata = log|A| - q (z/(1-z))^2. Both use the ell + 1 exponent convention.
  static PhaseSpec anabolic_lemma(int alphabet_size, double food_rate);
  static PhaseSpec catabolic_lemma(int alphabet_size, double q);
  PhaseSpec with_weight(double w) const;
};

// Reaction mass per level: anabolic c(z) = p sum_F z^{|F| + s}, catabolic q z^s.
double reaction_mass(const PhaseSpec& spec, double z);
double psi(const PhaseSpec& spec, double z);
double phi(const PhaseSpec& spec, double z);
double dphi(const PhaseSpec& spec, double z);
// The lemma cubic whose sign is that of phi' (lemma specs only).
double lemma_cubic(const PhaseSpec& spec, double z);

enum class Phase { ALocalized, ADelocalized, B, C };
const char* to_string(Phase phase);

struct PhaseRoots {
  std::optional<double> y_phi;
  std::optional<double> z_phi;
  std::optional<double> zp_phi;  // z'_phi, the maximum of phi
  std::optional<double> z_star;
  double phi_max = 0.0;
  bool phase_a_empty = false;
};

PhaseRoots phase_roots(const PhaseSpec& spec);

struct PhaseLabel {
  Phase phase = Phase::C;
  bool boundary = false;  // |phi| or |psi| or |phi'| below tolerance
};

PhaseLabel classify_phase(const PhaseSpec& spec, double z);

struct CharacteristicLevels {
  std::optional<int> n0;        // argmax of <V_n>
  std::optional<double> n0_real;
  std::optional<int> n0p;       // first level with m_{1,n} < 1
  std::optional<int> m0;        // argmax of <Prim_n>
  std::optional<int> m0p;       // first level where the primitive bracket turns negative
  bool levels_defined = false;  // reactive phase (n0, n0p)
  bool prim_levels_defined = false;  // phi < 0 (m0, m0p)
};

// Levels from exact finite products at fugacity z (z = 1 gives Model I).
CharacteristicLevels characteristic_levels(const PhaseSpec& spec, double z);

// Asymptotic forms, exposed for comparison with the exact levels.
double n0_asymptotic(const PhaseSpec& spec, double z);
double m0_asymptotic(const PhaseSpec& spec, double z);
// Model I: log|A| / log(1/(1-p)).
double n0_model_one(int alphabet_size, double p);
// Catabolic Model I: sqrt(2 log|A| / log(1/(1-q))) and its small-q form.
double n_frag(int alphabet_size, double q);
double n_frag_asymptotic(int alphabet_size, double q);

struct LevelPrediction {
  double mean_v = 0.0;
  double mean_prim = 0.0;
  double log_mean_v = 0.0;
  double log_mean_prim = 0.0;
};

// k = 0 corrected predictions for <V_n> and <Prim_n> at the params' fugacity.
LevelPrediction predicted_level_means(Kind kind, const ModelParams& params, int n);

struct SeriesProbability {
  double prob = 0.0;
  double log_prob = 0.0;
  bool diverges = false;
  int terms = 0;
};

// Probability that no reaction at all is accepted.
SeriesProbability empty_network_prob(Kind kind, const ModelParams& params);

}  // namespace rulenet
