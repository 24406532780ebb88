#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rulenet/model.hpp"
#include "rulenet/theory.hpp"

namespace rulenet {

// A directed edge X -> Y of the anabolic network, Y = X.F or F.X.
struct NetworkEdge {
  Word from;
  Word to;
  friend bool operator==(const NetworkEdge&, const NetworkEdge&) = default;
};

struct NetworkOptions {
  bool components = true;        // union-find partitions of both graphs
  std::size_t vertex_budget = 50'000'000;
};

class NetworkBudgetError : public std::runtime_error {
 public:
  NetworkBudgetError(std::size_t budget, std::size_t required);
  std::size_t budget() const { return budget_; }
  std::size_t required() const { return required_; }

 private:
  std::size_t budget_;
  std::size_t required_;
};

// Per-level counts of the clean primitive components: singletons {X} and
// two-vertex components {X, Y} joined by one primitive reaction. A component
// is clean when every firing rule touching one of its vertices is the rule of
// one of its edges. Candidates whose primitive product lies above the
// truncation are counted as open at the level of their source.
struct ComponentCounts {
  std::vector<std::uint64_t> words;
  std::vector<std::uint64_t> isolated;
  std::vector<std::uint64_t> two_molecule;  // indexed by the level of the product
  std::vector<std::uint64_t> open_flagged;
};

// The anabolic reaction network on all words up to level n_max with the
// concatenation product rule. A firing rule (F, V) makes X -> X.F a reaction
// whenever V is a subword of X, and X -> F.X whenever V reversed is a subword
// of X; the second orientation reads the submolecule backwards.
class AnabolicNetwork {
 public:
  AnabolicNetwork(const ModelParams& params, const ReactionOracle& oracle, int n_max,
                  NetworkOptions opts = {});

  int n_max() const { return n_max_; }
  const ModelParams& params() const { return params_; }
  std::uint64_t vertex_count() const { return offsets_.back(); }
  std::uint64_t level_size(int level) const;

  // Food bitmasks of the rules touching x in each orientation.
  std::uint64_t right_mask(const Word& x) const;
  std::uint64_t left_mask(const Word& x) const;
  bool is_isolated(const Word& x) const;

  // Reactions with x as reactant whose product lies inside the truncation.
  std::vector<NetworkEdge> out_edges(const Word& x) const;
  std::vector<NetworkEdge> primitive_out_edges(const Word& x) const;
  std::vector<NetworkEdge> primitive_edges() const;

  // Partitions of the undirected network and of its primitive subgraph.
  bool same_component(const Word& x, const Word& y) const;
  bool same_primitive_component(const Word& x, const Word& y) const;
  std::uint64_t component_count() const;

  const ComponentCounts& counts() const { return counts_; }
  // The edges {X, Y} of the two-molecule components behind counts().
  const std::vector<NetworkEdge>& two_molecule_components() const { return two_molecule_; }

 private:
  std::uint64_t index(const Word& x) const;
  std::uint64_t global(int level, std::uint64_t idx) const { return offsets_[level] + idx; }
  std::uint64_t find(std::vector<std::uint64_t>& parent, std::uint64_t v) const;
  std::uint64_t find_const(const std::vector<std::uint64_t>& parent, std::uint64_t v) const;
  void count_components();
  void build_partitions();

  ModelParams params_;
  const ReactionOracle* oracle_;
  int n_max_;
  int a_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::vector<Word>> words_;
  std::vector<std::vector<std::uint64_t>> rev_;
  std::vector<std::vector<std::uint64_t>> own_;    // omega(F, X)
  std::vector<std::vector<std::uint64_t>> right_;  // some subword V of X fires
  std::vector<std::vector<std::uint64_t>> left_;   // some reversed subword fires
  std::vector<std::uint64_t> parent_;
  std::vector<std::uint64_t> prim_parent_;
  bool has_partitions_ = false;
  ComponentCounts counts_;
  std::vector<NetworkEdge> two_molecule_;
};

AnabolicNetwork build_anabolic_network(const ModelParams& params, const ReactionOracle& oracle,
                                       int n_max, NetworkOptions opts = {});

// Counts only, for ensembles: skips the partitions.
ComponentCounts anabolic_component_counts(const ModelParams& params, std::uint64_t seed,
                                          int n_max);

// Closed forms with a single food level convention: the product over
// suffix levels k = 1..n of prod_F (1 - acc(|F| + k))^{2 (n + 1 - k)}.
double isolated_prob(const ModelParams& params, int n);
double log_isolated_prob(const ModelParams& params, int n);
// {X, X.A} with X of level n - 1: acc(n - 1) / (1 - acc(n - 1)) times the above.
double two_molecule_prob(const ModelParams& params, int n);
double log_two_molecule_prob(const ModelParams& params, int n);

// Exact probabilities for one word under independent acceptance, counting each
// distinct rule identity once.
double isolated_prob_exact(const ModelParams& params, const Word& x);
// {x, x.F} as a clean two-vertex component, where F is foodset[food].
double two_molecule_prob_exact(const ModelParams& params, const Word& x, int food);

// Predicted growth rates of the isolated and two-molecule counts:
// psi and phi with doubled food weight.
double isolated_growth_rate(const ModelParams& params, double z);
double two_molecule_growth_rate(const ModelParams& params, double z);

class ReverseForkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A primitive connected component given by its vertices and directed edges;
// it must be a fork-free directed tree whose edges append or prepend an atom.
struct PrimitiveComponent {
  std::vector<Word> vertices;
  std::vector<NetworkEdge> edges;

  Word root() const;
  int min_level() const;
  int max_level() const;
};

// Throws ReverseForkError or std::invalid_argument when the shape is not admissible.
void validate_component(const PrimitiveComponent& g);
double primitive_component_prob(const ModelParams& params, const PrimitiveComponent& g);
double log_primitive_component_prob(const ModelParams& params, const PrimitiveComponent& g);

struct TwoPaths {
  std::vector<Word> first;
  std::vector<Word> second;
};

// Which paths count as the same. Embedded paths also agree on where the source
// sits inside the target: the number of prepend steps. Two paths can reach the
// same word with different embeddings only when the target repeats a factor.
enum class PathIdentity { Embedded, Endpoints };

// nullopt when no ordered pair of vertices is joined by two distinct directed
// paths; otherwise a witness. An edge that both appends and prepends (a power
// of one atom) is read as an append.
std::optional<TwoPaths> find_two_paths(const std::vector<NetworkEdge>& edges,
                                       PathIdentity identity = PathIdentity::Embedded);
bool no_two_paths(const AnabolicNetwork& network,
                  PathIdentity identity = PathIdentity::Embedded);

// Probability that a word of level m is not a fragmentation product; zero with
// the divergence flag in the fragmentation phase z >= 1/|A|.
SeriesProbability frag_product_prob(const ModelParams& params, int m);
// -2 q |A| z^3 (1 - z^m) / ((1 - z)(1 - |A| z)), the small-q log-probability.
double frag_product_log_asymptotic(const ModelParams& params, int m);

enum class CatabolicPhase { Finite, Fragmentation };
const char* to_string(CatabolicPhase phase);

struct LevelShiftReport {
  double n_frag = 0.0;          // log(1 / (2 q |A|)) / log(|A| z)
  int g_argmax = 0;
  std::vector<double> g;        // g(0), g(1), ...
  std::vector<double> shift_chain;
  double n_max_cutoff = 0.0;    // log(1/q) / (1 - z)
  double j_dis = 0.0;           // log(|A| z) / (1 - z)
  double g_zero_level = 0.0;    // log(1 / (q z^(m+s-1))) / log(|A| z), s the exponent shift
};

class PhaseError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Level shifts of fragmentation chains from a word of level m; chain_length
// entries m_1 = m, m_2, ... Throws PhaseError unless z > 1/|A|.
LevelShiftReport level_shift_analysis(const ModelParams& params, int m, int chain_length = 12);

struct CatabolicNetworkReport {
  CatabolicPhase phase = CatabolicPhase::Finite;
  std::optional<LevelShiftReport> shifts;
  std::optional<double> isolated_slope;  // finite phase only
};

CatabolicNetworkReport catabolic_network_report(const ModelParams& params, int m = 1);

// psi_cata(z), the growth rate of isolated catabolic words; finite phase only.
double isolated_catabolic_slope(const ModelParams& params);

// Words of each level that are neither decomposable nor a fragmentation
// product of a word up to level n_max.
std::vector<std::uint64_t> isolated_catabolic_counts(const ModelParams& params,
                                                     const ReactionOracle& oracle, int n_max);

}  // namespace rulenet
