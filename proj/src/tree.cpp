#include <algorithm>
#include <string>

#include "rulenet/tree.hpp"

namespace rulenet {

MemoryBudgetError::MemoryBudgetError(std::size_t budget, RuleTree partial)
    : std::runtime_error("vertex budget of " + std::to_string(budget) + " exceeded at level " +
                         std::to_string(static_cast<int>(partial.red.size()) - 1)),
      budget_(budget),
      partial_(std::move(partial)) {}

std::vector<std::size_t> RuleTree::level_sizes() const {
  std::vector<std::size_t> out;
  out.reserve(red.size());
  for (const auto& level : red) out.push_back(level.size());
  return out;
}

std::vector<std::size_t> RuleTree::prim_counts() const {
  std::vector<std::size_t> out;
  out.reserve(prim.size());
  for (const auto& level : prim) out.push_back(level.size());
  return out;
}

TreeHeight RuleTree::height() const {
  TreeHeight h;
  for (std::size_t n = 0; n < red.size(); ++n) {
    if (!red[n].empty()) h.level = static_cast<int>(n);
  }
  h.censored = static_cast<int>(red.size()) == n_max + 1 && !red.back().empty();
  return h;
}

std::size_t RuleTree::total_vertices() const {
  std::size_t total = 0;
  for (std::size_t n = 0; n < red.size(); ++n) total += red[n].size() + prim[n].size();
  return total;
}

bool RuleTree::is_red(const Word& w) const {
  const int n = w.level();
  if (n < 0 || n >= static_cast<int>(red.size())) return false;
  return std::binary_search(red[n].begin(), red[n].end(), w);
}

bool RuleTree::is_prim(const Word& w) const {
  const int n = w.level();
  if (n < 0 || n >= static_cast<int>(prim.size())) return false;
  return std::binary_search(prim[n].begin(), prim[n].end(), PrimVertex{w, 0},
                            [](const PrimVertex& a, const PrimVertex& b) { return a.word < b.word; });
}

RuleTree build_tree(Kind kind, const ModelParams& params, std::uint64_t seed, int n_max,
                    const BuildOptions& options) {
  return kind == Kind::Anabolic ? build_anabolic_tree(params, seed, n_max, options)
                                : build_fragmentation_tree(params, seed, n_max, options);
}

}  // namespace rulenet
