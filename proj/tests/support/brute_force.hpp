#pragma once

// Independent reference implementations used as test oracles. They classify
// every word by exhaustive subword scans instead of growing a tree.

#include <algorithm>
#include <vector>

#include "rulenet/model.hpp"
#include "rulenet/tree.hpp"

namespace rulenet::testing {

inline bool any_food_fires(const ReactionOracle& oracle, const Foodset& foods, const Word& s) {
  for (const Word& f : foods.foods()) {
    if (oracle.omega(ReactionId::anabolic(f, s))) return true;
  }
  return false;
}

inline bool cut_fires(const ReactionOracle& oracle, const Word& s) {
  for (int cut = 1; cut < s.length(); ++cut) {
    if (oracle.omega(ReactionId::catabolic(s, cut))) return true;
  }
  return false;
}

inline bool fires(Kind kind, const ReactionOracle& oracle, const Foodset& foods, const Word& s) {
  return kind == Kind::Anabolic ? any_food_fires(oracle, foods, s) : cut_fires(oracle, s);
}

struct BruteLevels {
  std::vector<std::vector<Word>> red;
  std::vector<std::vector<Word>> prim;
};

// Red: no subword fires. Blue: the word fires and none of its strict subwords does.
inline BruteLevels brute_force_classify(Kind kind, const ModelParams& params,
                                        const ReactionOracle& oracle, int n_max) {
  BruteLevels out;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<Word> red;
    std::vector<Word> prim;
    for (const Word& x : all_words(params.alphabet, n)) {
      bool strict_fires = false;
      for (const Word& s : strict_subwords(x)) {
        if (fires(kind, oracle, params.foodset, s)) {
          strict_fires = true;
          break;
        }
      }
      if (strict_fires) continue;
      if (fires(kind, oracle, params.foodset, x)) {
        prim.push_back(x);
      } else {
        red.push_back(x);
      }
    }
    std::sort(red.begin(), red.end());
    std::sort(prim.begin(), prim.end());
    out.red.push_back(std::move(red));
    out.prim.push_back(std::move(prim));
  }
  return out;
}

inline std::vector<Word> prim_words(const std::vector<PrimVertex>& level) {
  std::vector<Word> out;
  for (const PrimVertex& v : level) out.push_back(v.word);
  return out;
}

}  // namespace rulenet::testing
