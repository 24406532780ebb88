#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rulenet/model.hpp"

namespace rulenet {

// A blue vertex together with what made it primitive: the bitmask of foods
// firing on it (anabolic) or the first firing cut (catabolic).
struct PrimVertex {
  Word word;
  std::uint64_t tag = 0;

  friend bool operator==(const PrimVertex&, const PrimVertex&) = default;
};

struct TreeHeight {
  int level = -1;         // highest non-empty red level, -1 for an empty tree
  bool censored = false;  // red vertices remain at n_max

  friend bool operator==(const TreeHeight&, const TreeHeight&) = default;
};

// Red vertices V_n and primitive (blue) vertices Prim_n, level by level.
// Serves as the composition tree (anabolic) and the fragmentation tree
// (catabolic); levels are stored as sorted packed-word arrays.
struct RuleTree {
  Kind kind = Kind::Anabolic;
  int n_max = 0;
  std::vector<std::vector<Word>> red;
  std::vector<std::vector<PrimVertex>> prim;
  std::optional<int> extinct_at;

  std::vector<std::size_t> level_sizes() const;
  std::vector<std::size_t> prim_counts() const;
  TreeHeight height() const;
  std::size_t total_vertices() const;
  bool is_red(const Word& w) const;
  bool is_prim(const Word& w) const;
};

using CompositionTree = RuleTree;
using FragmentationTree = RuleTree;

struct BuildOptions {
  int threads = 1;
  std::size_t vertex_budget = 100'000'000;
};

// Thrown when the summed vertex count exceeds the budget; carries every level
// completed before the overflow.
class MemoryBudgetError : public std::runtime_error {
 public:
  MemoryBudgetError(std::size_t budget, RuleTree partial);
  const RuleTree& partial() const { return partial_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
  RuleTree partial_;
};

CompositionTree build_anabolic_tree(const ModelParams& params, const ReactionOracle& oracle,
                                    int n_max, const BuildOptions& options = {});
CompositionTree build_anabolic_tree(const ModelParams& params, std::uint64_t seed, int n_max,
                                    const BuildOptions& options = {});

FragmentationTree build_fragmentation_tree(const ModelParams& params,
                                           const ReactionOracle& oracle, int n_max,
                                           const BuildOptions& options = {});
FragmentationTree build_fragmentation_tree(const ModelParams& params, std::uint64_t seed,
                                           int n_max, const BuildOptions& options = {});

RuleTree build_tree(Kind kind, const ModelParams& params, std::uint64_t seed, int n_max,
                    const BuildOptions& options = {});

}  // namespace rulenet
