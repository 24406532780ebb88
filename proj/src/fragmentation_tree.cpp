#include "rulenet/tree.hpp"
#include "tree_growth.hpp"

namespace rulenet {

FragmentationTree build_fragmentation_tree(const ModelParams& params,
                                           const ReactionOracle& oracle, int n_max,
                                           const BuildOptions& options) {
  params.validate();
  auto classify = [&](const Word& child) {
    const int len = child.length();
    for (int k = 2; k <= len; ++k) {
      const Word s = child.suffix(k);
      for (int cut = 1; cut < k; ++cut) {
        if (oracle.omega(ReactionId::catabolic(s, cut))) {
          return k == len ? detail::Verdict{detail::Fate::Blue, static_cast<std::uint64_t>(cut)}
                          : detail::Verdict{detail::Fate::Discard, 0};
        }
      }
    }
    return detail::Verdict{};
  };
  return detail::grow_tree(Kind::Catabolic, params.alphabet, n_max, options, classify);
}

FragmentationTree build_fragmentation_tree(const ModelParams& params, std::uint64_t seed,
                                           int n_max, const BuildOptions& options) {
  const HashOracle oracle(params, seed);
  return build_fragmentation_tree(params, oracle, n_max, options);
}

}  // namespace rulenet
