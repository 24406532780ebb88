#include "rulenet/tree.hpp"
#include "tree_growth.hpp"

namespace rulenet {

CompositionTree build_anabolic_tree(const ModelParams& params, const ReactionOracle& oracle,
                                    int n_max, const BuildOptions& options) {
  params.validate();
  const std::vector<Word>& foods = params.foodset.foods();
  // Suffixes are scanned shortest first: the first firing one is primitive,
  // and it decides whether the child is blue (full word) or derived (proper suffix).
  auto classify = [&](const Word& child) {
    const int len = child.length();
    for (int k = 1; k <= len; ++k) {
      const Word s = child.suffix(k);
      std::uint64_t mask = 0;
      for (std::size_t f = 0; f < foods.size(); ++f) {
        if (oracle.omega(ReactionId::anabolic(foods[f], s))) mask |= std::uint64_t{1} << f;
      }
      if (mask != 0) {
        return k == len ? detail::Verdict{detail::Fate::Blue, mask}
                        : detail::Verdict{detail::Fate::Discard, 0};
      }
    }
    return detail::Verdict{};
  };
  return detail::grow_tree(Kind::Anabolic, params.alphabet, n_max, options, classify);
}

CompositionTree build_anabolic_tree(const ModelParams& params, std::uint64_t seed, int n_max,
                                    const BuildOptions& options) {
  const HashOracle oracle(params, seed);
  return build_anabolic_tree(params, oracle, n_max, options);
}

}  // namespace rulenet
