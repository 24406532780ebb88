#pragma once

// Exact level means of the red and primitive sets by enumerating every firing
// pattern of the reactions that can decide a word, weighted by its probability.
// Reactions outside that set never change the word's color, so summing over
// them is exact.

#include <set>
#include <vector>

#include "rulenet/model.hpp"
#include "support/brute_force.hpp"

namespace rulenet::testing {

struct ExactLevelMeans {
  std::vector<double> red;
  std::vector<double> prim;
};

inline std::vector<ReactionId> deciding_reactions(Kind kind, const ModelParams& params,
                                                  const Word& x) {
  std::set<Word> subs;
  for (const Word& s : strict_subwords(x)) subs.insert(s);
  subs.insert(x);
  std::vector<ReactionId> out;
  for (const Word& s : subs) {
    if (kind == Kind::Anabolic) {
      for (const Word& f : params.foodset.foods()) out.push_back(ReactionId::anabolic(f, s));
    } else {
      for (int cut = 1; cut < s.length(); ++cut) out.push_back(ReactionId::catabolic(s, cut));
    }
  }
  return out;
}

inline ExactLevelMeans exact_level_means(Kind kind, const ModelParams& params, int n_max) {
  ExactLevelMeans out;
  for (int n = 0; n <= n_max; ++n) {
    double red = 0.0;
    double prim = 0.0;
    for (const Word& x : all_words(params.alphabet, n)) {
      const std::vector<ReactionId> ids = deciding_reactions(kind, params, x);
      std::vector<Word> strict = strict_subwords(x);
      for (std::uint64_t mask = 0; mask < (1ULL << ids.size()); ++mask) {
        InjectedOracle oracle;
        double weight = 1.0;
        for (std::size_t i = 0; i < ids.size(); ++i) {
          const double a = bernoulli_param(params, ids[i]);
          if (mask >> i & 1) {
            oracle.add(ids[i]);
            weight *= a;
          } else {
            weight *= 1.0 - a;
          }
        }
        if (weight == 0.0) continue;
        bool strict_fires = false;
        for (const Word& s : strict) {
          strict_fires = strict_fires || fires(kind, oracle, params.foodset, s);
        }
        if (strict_fires) continue;
        if (fires(kind, oracle, params.foodset, x)) {
          prim += weight;
        } else {
          red += weight;
        }
      }
    }
    out.red.push_back(red);
    out.prim.push_back(prim);
  }
  return out;
}

}  // namespace rulenet::testing
