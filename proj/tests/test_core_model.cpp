#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "rulenet/model.hpp"
#include "support/brute_force.hpp"

using namespace rulenet;

TEST_CASE("alphabet rejects degenerate sizes") {
  CHECK_THROWS_AS(Alphabet(1), std::invalid_argument);
  CHECK(Alphabet(2).bits_per_atom() == 1);
  CHECK(Alphabet(3).bits_per_atom() == 2);
  CHECK(Alphabet(3).max_atoms() == 58);
}

TEST_CASE("word packing round trips and slices") {
  const Alphabet a3(3);
  const Word w = Word::parse("abcab", a3);
  CHECK(w.length() == 5);
  CHECK(w.level() == 4);
  CHECK(w.str() == "abcab");
  CHECK(w.prefix(2).str() == "ab");
  CHECK(w.suffix(3).str() == "cab");
  CHECK(w.sub(1, 3).str() == "bca");
  CHECK(w.reversed().str() == "bacba");
  CHECK(w.append(2).str() == "abcabc");
  CHECK(Word::parse("ab", a3).concat(Word::parse("ca", a3)).str() == "abca");
  CHECK(w.contains(Word::parse("bca", a3)));
  CHECK_FALSE(w.contains(Word::parse("cc", a3)));
}

TEST_CASE("word capacity is enforced") {
  const Alphabet a3(3);
  std::vector<int> atoms(a3.max_atoms(), 1);
  const Word full = Word::from_atoms(atoms, a3);
  CHECK(full.length() == 58);
  CHECK_THROWS_AS(full.append(0), CapacityError);
  atoms.push_back(0);
  CHECK_THROWS_AS(Word::from_atoms(atoms, a3), CapacityError);
}

TEST_CASE("strict subwords") {
  const Alphabet a3(3);
  auto strs = [](const std::vector<Word>& ws) {
    std::set<std::string> out;
    for (const Word& w : ws) out.insert(w.str());
    return out;
  };
  CHECK(strs(strict_subwords(Word::parse("ab", a3))) == std::set<std::string>{"a", "b"});
  CHECK(strs(strict_subwords(Word::parse("abc", a3))) ==
        std::set<std::string>{"a", "b", "c", "ab", "bc"});

  // Against a set built from every (start, end) position pair.
  const Alphabet a2(2);
  for (int n = 1; n <= 6; ++n) {
    for (const Word& x : all_words(a2, n - 1)) {
      std::set<std::string> expected;
      const std::string s = x.str();
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
          if (j - i < n) expected.insert(s.substr(i, j - i));
        }
      }
      CHECK(strs(strict_subwords(x)) == expected);
    }
  }
}

TEST_CASE("bernoulli_param follows the displayed exponents") {
  const Alphabet a3(3);
  ModelParams one = ModelParams::model_one(3, 0.08, 0.2);
  const Word x = Word::parse("abc", a3);
  const Word f = Word::parse("a", a3);
  CHECK(bernoulli_param(one, ReactionId::anabolic(f, x)) == 0.08);
  CHECK(bernoulli_param(one, ReactionId::catabolic(x, 1)) == 0.2);

  ModelParams two = ModelParams::model_two(3, 0.5, 0.3, 0.5);
  CHECK(bernoulli_param(two, ReactionId::anabolic(f, f)) == doctest::Approx(0.5).epsilon(1e-15));
  two = two.with_z(0.9);
  const Word x3 = Word::parse("abca", a3);
  CHECK(bernoulli_param(two, ReactionId::catabolic(x3, 2)) ==
        doctest::Approx(0.2187).epsilon(1e-12));

  two.exponent_shift = 1;
  CHECK(bernoulli_param(two, ReactionId::catabolic(x3, 2)) ==
        doctest::Approx(0.2187 * 0.9).epsilon(1e-12));
}

TEST_CASE("model parameters validate their invariants") {
  CHECK_NOTHROW(ModelParams::model_one(3, 0.1, 0.1).validate());
  ModelParams bad = ModelParams::model_one(3, 0.1, 0.1);
  bad.variant = Variant::ModelII;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ModelParams::model_one(3, 1.5, 0.1);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  const Alphabet a3(3);
  CHECK_THROWS_AS(Foodset({Word::parse("a", a3), Word::parse("a", a3)}), std::invalid_argument);
  CHECK_FALSE(ReactionId::catabolic(Word::parse("ab", a3), 2).valid());
  CHECK(ReactionId::catabolic(Word::parse("ab", a3), 1).valid());
}

TEST_CASE("oracle is deterministic and has the right rate") {
  const ModelParams params = ModelParams::model_one(3, 0.08, 0.1);
  const Alphabet& a3 = params.alphabet;
  const HashOracle oracle(params, 42);
  const Word f = Word::single(0, a3);
  const ReactionId rid = ReactionId::anabolic(f, Word::parse("abc", a3));
  const bool first = oracle.omega(rid);
  bool stable = true;
  for (int i = 0; i < 1'000'000; ++i) stable = stable && oracle.omega(rid) == first;
  CHECK(stable);

  // 10^5 distinct level-2 anabolic reactions: vary the food and the seed
  // over all 27 reactants.
  const double p = 0.08;
  long hits = 0;
  long total = 0;
  for (std::uint64_t seed = 0; total < 100'000; ++seed) {
    const HashOracle o(params, seed);
    for (const Word& x : all_words(a3, 2)) {
      hits += o.omega(ReactionId::anabolic(f, x));
      ++total;
    }
  }
  const double rate = static_cast<double>(hits) / total;
  CHECK(std::abs(rate - p) < 3.0 * std::sqrt(p * (1 - p) / total));
}

TEST_CASE("threshold coupling is monotone in p and z") {
  const Alphabet a3(3);
  const Word f = Word::single(0, a3);
  const ModelParams lo = ModelParams::model_two(3, 0.2, 0.2, 0.7);
  const ModelParams hi_p = ModelParams::model_two(3, 0.4, 0.4, 0.7);
  const ModelParams hi_z = ModelParams::model_two(3, 0.2, 0.2, 0.9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const HashOracle o_lo(lo, seed), o_p(hi_p, seed), o_z(hi_z, seed);
    for (int n = 0; n < 4; ++n) {
      for (const Word& x : all_words(a3, n)) {
        const ReactionId ana = ReactionId::anabolic(f, x);
        if (o_lo.omega(ana)) {
          CHECK(o_p.omega(ana));
          CHECK(o_z.omega(ana));
        }
        for (int cut = 1; cut < x.length(); ++cut) {
          const ReactionId cata = ReactionId::catabolic(x, cut);
          if (o_lo.omega(cata)) {
            CHECK(o_p.omega(cata));
            CHECK(o_z.omega(cata));
          }
        }
      }
    }
  }
}

TEST_CASE("null field fires nowhere") {
  const Alphabet a3(3);
  const InjectedOracle none;
  for (const Word& x : all_words(a3, 3)) {
    CHECK_FALSE(is_reactant_anabolic(none, Word::single(0, a3), x));
    CHECK_FALSE(is_decomposable(none, x));
  }
}

TEST_CASE("reactant and complexity index on the worked example field") {
  const Alphabet a3(3);
  const Word f = Word::single(0, a3);
  InjectedOracle oracle;
  oracle.add(ReactionId::anabolic(f, Word::parse("c", a3)));
  CHECK(is_reactant_anabolic(oracle, f, Word::parse("ac", a3)));
  CHECK_FALSE(is_reactant_anabolic(oracle, f, Word::parse("ab", a3)));
  const auto idx = complexity_index(oracle, ReactionId::anabolic(f, Word::parse("ac", a3)));
  REQUIRE(idx.has_value());
  CHECK(*idx == 0);
  CHECK_FALSE(complexity_index(oracle, ReactionId::anabolic(f, Word::parse("ab", a3))));

  oracle.add(ReactionId::anabolic(f, Word::parse("abb", a3)));
  CHECK(*complexity_index(oracle, ReactionId::anabolic(f, Word::parse("abb", a3))) == 2);
}

TEST_CASE("reactant and complexity index match brute force on random fields") {
  const ModelParams params = ModelParams::model_two(2, 0.3, 0.25, 0.8);
  const Alphabet& a2 = params.alphabet;
  const Word f = Word::single(1, a2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const HashOracle oracle(params, seed);
    for (int n = 0; n <= 5; ++n) {
      for (const Word& x : all_words(a2, n)) {
        bool any = false;
        std::optional<int> best;
        std::vector<Word> subs = strict_subwords(x);
        subs.push_back(x);
        for (const Word& s : subs) {
          if (oracle.omega(ReactionId::anabolic(f, s))) {
            any = true;
            const int ell = f.level() + s.level();
            best = best ? std::min(*best, ell) : ell;
          }
        }
        CHECK(is_reactant_anabolic(oracle, f, x) == any);
        CHECK(complexity_index(oracle, ReactionId::anabolic(f, x)) == best);

        // Catabolic: (subword occurrence, aligned cut) pairs for every cut of x.
        for (int cut = 1; cut < x.length(); ++cut) {
          std::optional<int> cbest;
          for (int i = 0; i < x.length(); ++i) {
            for (int j = i + 2; j <= x.length(); ++j) {
              if (i < cut && cut < j &&
                  oracle.omega(ReactionId::catabolic(x.sub(i, j - i), cut - i))) {
                cbest = cbest ? std::min(*cbest, j - i - 1) : j - i - 1;
              }
            }
          }
          CHECK(complexity_index(oracle, ReactionId::catabolic(x, cut)) == cbest);
        }
      }
    }
  }
}

TEST_CASE("reactant property is context independent") {
  const ModelParams params = ModelParams::model_one(2, 0.15, 0.1);
  const Word f = Word::single(0, params.alphabet);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const HashOracle oracle(params, seed);
    for (int n = 0; n <= 4; ++n) {
      for (const Word& x : all_words(params.alphabet, n)) {
        if (!is_reactant_anabolic(oracle, f, x)) continue;
        for (int b = 0; b < 2; ++b) {
          CHECK(is_reactant_anabolic(oracle, f, x.append(b)));
          CHECK(is_reactant_anabolic(oracle, f, Word::single(b, params.alphabet).concat(x)));
        }
      }
    }
  }
}

TEST_CASE("derived seeds differ by index") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}
