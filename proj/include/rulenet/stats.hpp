#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rulenet/model.hpp"
#include "rulenet/tree.hpp"

namespace rulenet {

struct EnsembleConfig {
  ModelParams params = ModelParams::model_one(3, 0.08, 0.08);
  Kind kind = Kind::Anabolic;
  int sample_size = 100;
  int n_max = 54;
  std::uint64_t master_seed = 1;
  int threads = 1;
  std::size_t vertex_budget = 100'000'000;  // per run

  // Throws std::invalid_argument when the configuration cannot run.
  void validate() const;
  // Seed of run i: derive_seed(master_seed, i).
  std::uint64_t run_seed(int i) const {
    return derive_seed(master_seed, static_cast<std::uint64_t>(i));
  }
};

// A run that exceeded its vertex budget, with the levels it completed.
class EnsembleBudgetError : public std::runtime_error {
 public:
  EnsembleBudgetError(int run, std::uint64_t seed, const MemoryBudgetError& cause);
  int run() const { return run_; }
  std::uint64_t seed() const { return seed_; }
  const RuleTree& partial() const { return partial_; }

 private:
  int run_;
  std::uint64_t seed_;
  RuleTree partial_;
};

struct HeightBin {
  int height = -1;  // -1 for a tree with no red vertex
  std::uint64_t count = 0;
  bool censored = false;  // the n_max sentinel of trees still alive at n_max
};

struct StatsReport {
  EnsembleConfig config;
  std::vector<double> mean_v;
  std::vector<double> mean_prim;
  std::vector<double> sd_v;  // sample standard deviation of |V_n|
  std::vector<double> sd_prim;
  // Mean of log |V_n| over runs with |V_n| >= 1; NaN where no run survives.
  std::vector<double> mean_log_v;
  std::vector<int> surviving_runs;
  std::vector<double> log_mean_v;  // log <V_n>, -inf where <V_n> = 0
  // log of the mean of |V_n| over the same surviving runs; NaN where none survive.
  std::vector<double> log_mean_v_surviving;
  // log(<V_{n+1}> / <V_n>) for n < n_max; NaN where undefined.
  std::vector<double> log_growth;
  std::vector<HeightBin> heights;  // ascending height, censored bin last
  int censored = 0;
  // P[ht < n] for n = 0..n_max; censored trees count as height n_max.
  std::vector<double> extinction_cdf;
  std::optional<int> n0;   // smallest argmax of <V_n>
  std::optional<int> n0p;  // first level with <V_n> < 1
  std::optional<int> m0;   // smallest argmax of <Prim_n>
  std::optional<int> m0p;  // first level at or above m0 with <Prim_n> < 1
};

StatsReport run_ensemble(const EnsembleConfig& config);

// Levels where the surviving-run mean of log |V_n| exceeds the log of their
// mean |V_n| by more than rounding (1e-12 relative). Jensen makes this empty.
std::vector<int> jensen_violations(const StatsReport& report);

// Aggregates already built trees; the config supplies sample_size and n_max.
StatsReport aggregate_trees(const EnsembleConfig& config, const std::vector<RuleTree>& trees);

// Predicted level means of the comparison process for the config's model.
struct TheoryCurves {
  std::vector<double> plain;  // m_{1,n}, one root
  std::vector<double> k0;     // |A| r0^{|A|} m_{1,n}
  std::vector<double> k1;     // level-0/level-1 enumeration, exact at level 0; empty if |A| > 4
  std::vector<double> prim;   // <Prim_n> with the k = 0 prefactor
};

TheoryCurves theory_curves(Kind kind, const ModelParams& params, int n_max);

class ShapeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ComparisonRow {
  int level = 0;
  double empirical = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;      // empirical / predicted
  double log_ratio = 0.0;  // NaN when either side is zero
};

struct Comparison {
  std::string label;
  std::vector<ComparisonRow> rows;
  int peak_offset = 0;         // argmax(empirical) - argmax(predicted)
  int best_shift = 0;          // integer shift d minimising the mean squared
                               // log-ratio of empirical(n) against predicted(n - d)
  double max_abs_log_ratio = 0.0;
  double mean_abs_log_ratio = 0.0;
  int compared_levels = 0;     // levels with both sides positive
};

// Per-level ratios of empirical means against one prediction. Only levels
// where both sides are positive enter the summary statistics; min_empirical
// drops noisy levels whose empirical mean is below it.
Comparison compare_levels(const std::string& label, const std::vector<double>& empirical,
                          const std::vector<double>& predicted, double min_empirical = 0.0);

// Empirical <V_n> against the plain, k = 0 and (when available) k = 1 curves.
std::vector<Comparison> compare_report(const StatsReport& stats, const TheoryCurves& theory,
                                       double min_empirical = 1.0);

enum class ScanOutcome { Finite, Exploding };
const char* to_string(ScanOutcome outcome);

struct ScanPoint {
  double z = 0.0;
  ScanOutcome outcome = ScanOutcome::Finite;
  int runs = 0;
  int extinct = 0;   // runs with no red vertex at n_max
  int censored = 0;  // runs alive at n_max
  int budget_exceeded = 0;
};

struct TransitionScan {
  std::vector<ScanPoint> points;
  // Largest z classified exploding and smallest z above it classified finite.
  std::optional<double> exploding_below;
  std::optional<double> finite_above;
  std::optional<double> midpoint() const;
};

// Runs a budgeted ensemble at each z of the grid. A z is finite when every run
// dies out before n_max, and exploding when some run exceeds the budget or
// keeps red vertices at n_max.
TransitionScan model2_transition_scan(const EnsembleConfig& base, const std::vector<double>& z_grid);

}  // namespace rulenet
