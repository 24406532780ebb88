#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

#include "rulenet/tree.hpp"

namespace rulenet::detail {

enum class Fate { Red, Blue, Discard };

struct Verdict {
  Fate fate = Fate::Red;
  std::uint64_t tag = 0;
};

inline void sort_level(std::vector<Word>& red, std::vector<PrimVertex>& prim) {
  std::sort(red.begin(), red.end());
  std::sort(prim.begin(), prim.end(),
            [](const PrimVertex& a, const PrimVertex& b) { return a.word < b.word; });
}

// Grows a rule tree level by level from its level-0 classification. Each level
// is a barrier; parents of one level are split into contiguous chunks whose
// outputs are concatenated in order, so the result does not depend on the
// number of threads.
template <class Classify>
RuleTree grow_tree(Kind kind, const Alphabet& alphabet, int n_max, const BuildOptions& options,
                   Classify classify) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  if (n_max > alphabet.max_level()) {
    throw CapacityError("n_max exceeds the packed word capacity");
  }
  RuleTree tree;
  tree.kind = kind;
  tree.n_max = n_max;
  std::size_t total = 0;

  auto commit = [&](std::vector<Word> red, std::vector<PrimVertex> prim) {
    sort_level(red, prim);
    total += red.size() + prim.size();
    const bool empty = red.empty();
    tree.red.push_back(std::move(red));
    tree.prim.push_back(std::move(prim));
    if (empty && !tree.extinct_at) tree.extinct_at = static_cast<int>(tree.red.size()) - 1;
    if (total > options.vertex_budget) throw MemoryBudgetError(options.vertex_budget, tree);
  };

  {
    std::vector<Word> red;
    std::vector<PrimVertex> prim;
    for (int a = 0; a < alphabet.size(); ++a) {
      const Word w = Word::single(a, alphabet);
      const Verdict v = classify(w);
      if (v.fate == Fate::Red) red.push_back(w);
      if (v.fate == Fate::Blue) prim.push_back({w, v.tag});
    }
    commit(std::move(red), std::move(prim));
  }

  for (int n = 1; n <= n_max; ++n) {
    const std::vector<Word>& parents = tree.red[n - 1];
    const std::size_t threads = std::clamp<std::size_t>(
        options.threads < 1 ? 1 : options.threads, 1, std::max<std::size_t>(1, parents.size() / 64));
    std::vector<std::vector<Word>> red_parts(threads);
    std::vector<std::vector<PrimVertex>> prim_parts(threads);
    auto work = [&](std::size_t part) {
      const std::size_t lo = parents.size() * part / threads;
      const std::size_t hi = parents.size() * (part + 1) / threads;
      for (std::size_t i = lo; i < hi; ++i) {
        for (int b = 0; b < alphabet.size(); ++b) {
          const Word child = parents[i].append(b);
          const Verdict v = classify(child);
          if (v.fate == Fate::Red) red_parts[part].push_back(child);
          if (v.fate == Fate::Blue) prim_parts[part].push_back({child, v.tag});
        }
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
    std::vector<Word> red;
    std::vector<PrimVertex> prim;
    for (std::size_t t = 0; t < threads; ++t) {
      red.insert(red.end(), red_parts[t].begin(), red_parts[t].end());
      prim.insert(prim.end(), prim_parts[t].begin(), prim_parts[t].end());
    }
    commit(std::move(red), std::move(prim));
  }
  return tree;
}

}  // namespace rulenet::detail
