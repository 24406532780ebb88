#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rulenet/gw.hpp"

using namespace rulenet;

namespace {

GwSchedule ana_one(double p, int a = 3) {
  return GwSchedule(Kind::Anabolic, ModelParams::model_one(a, p, 0.1));
}

GwSchedule cata_one(double q, int a = 3) {
  return GwSchedule(Kind::Catabolic, ModelParams::model_one(a, 0.1, q));
}

double n0_model_one(double p, int a = 3) { return std::log(a) / std::log(1.0 / (1.0 - p)); }

}  // namespace

TEST_CASE("progeny probabilities") {
  CHECK(ana_one(0.08).progeny_prob(1) == doctest::Approx(0.92).epsilon(1e-14));
  CHECK(cata_one(0.5).progeny_prob(2) == doctest::Approx(0.125).epsilon(1e-14));
  const GwSchedule s = ana_one(0.08);
  for (int n = 1; n < 60; ++n) CHECK(s.progeny_prob(n + 1) <= s.progeny_prob(n));
}

TEST_CASE("Model II progeny reduces to Model I as z tends to 1") {
  const GwSchedule one = ana_one(0.08);
  const GwSchedule near(Kind::Anabolic, ModelParams::model_two(3, 0.08, 0.1, 1.0 - 1e-12));
  for (int n = 1; n <= 30; ++n) {
    CHECK(near.progeny_prob(n) == doctest::Approx(one.progeny_prob(n)).epsilon(1e-9));
  }
}

TEST_CASE("shift 1 reproduces the printed Model II products") {
  ModelParams params = ModelParams::model_two(3, 0.3, 0.2, 0.85);
  params.foodset = Foodset::of_levels(params.alphabet, {0, 1, 1});
  params.exponent_shift = 1;
  const GwSchedule ana(Kind::Anabolic, params);
  const GwSchedule cata(Kind::Catabolic, params);
  for (int n = 1; n <= 12; ++n) {
    double pn = 1.0;
    double qn = 1.0;
    for (int k = 1; k <= n; ++k) {
      for (const Word& f : params.foodset.foods()) {
        const double p_prime = 0.3 * std::pow(0.85, f.level() + 1);
        pn *= 1.0 - p_prime * std::pow(0.85, k);
      }
      qn *= std::pow(1.0 - 0.2 * std::pow(0.85, k + 1), k);
    }
    CHECK(ana.progeny_prob(n) == doctest::Approx(pn).epsilon(1e-12));
    CHECK(cata.progeny_prob(n) == doctest::Approx(qn).epsilon(1e-12));
  }
}

TEST_CASE("plain means") {
  const GwSchedule s = ana_one(0.08);
  CHECK(mean_level_size(s, 0) == 1.0);
  CHECK(mean_level_size(s, 2) == doctest::Approx(9 * std::pow(0.92, 3)).epsilon(1e-12));
  CHECK(9 * std::pow(0.92, 3) == doctest::Approx(7.0087).epsilon(1e-4));
  for (int n = 0; n <= 30; ++n) {
    CHECK(log_mean_level_size_continuous(s, n) ==
          doctest::Approx(log_mean_level_size(s, n)).epsilon(1e-12));
  }
  const double x = 2 * n0_model_one(0.08) - 1;
  CHECK(std::abs(std::exp(log_mean_level_size_continuous(s, x)) - 1.0) < 1e-6);
  const GwSchedule c = cata_one(0.08);
  CHECK(mean_level_size(c, 4) ==
        doctest::Approx(std::pow(3.0, 4) * std::pow(0.92, 20)).epsilon(1e-12));
}

TEST_CASE("k = 0 corrected means") {
  const GwSchedule s = ana_one(0.08);
  const int n0 = static_cast<int>(n0_model_one(0.08));
  CHECK(n0 == 13);
  const double expected =
      3 * std::pow(0.92, 3) * std::pow(3 * std::pow(0.92, (n0 + 1) / 2.0), n0);
  CHECK(corrected_mean_k0(s, n0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(corrected_mean_k0(s, n0) == doctest::Approx(1.9e3).epsilon(0.02));
  CHECK(corrected_mean_k0(cata_one(0.08), 4) == doctest::Approx(36).epsilon(0.02));
  CHECK(ana_one(1e-9).k0_prefactor() == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("k = 1 corrected means") {
  const GwSchedule s = ana_one(0.08);
  for (int n : {2, 5, 13}) {
    const double paper = 3 * std::pow(0.92, 3 + 9) * std::pow(3 * std::pow(0.92, (n - 1) / 2.0), n);
    CHECK(corrected_mean_k1_max_term(s, n) == doctest::Approx(paper).epsilon(1e-12));
    CHECK(corrected_mean_k1(s, n) > corrected_mean_k1_max_term(s, n));
  }
  const GwSchedule tiny = ana_one(1e-7);
  for (int n : {2, 6, 12}) {
    CHECK(corrected_mean_k1(tiny, n) / corrected_mean_k0(tiny, n) ==
          doctest::Approx(1.0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(corrected_mean_k1(ana_one(0.1, 5), 3), std::invalid_argument);
}

TEST_CASE("k = 1 mean equals the exact two-level field expectation") {
  // |A| = 2: enumerate the 2 level-0 and 4 level-1 firing bits with their
  // probabilities, then push E[Z_n | T_1] through explicit mean matrices.
  for (const double p : {0.2, 0.45}) {
    const GwSchedule s = ana_one(p, 2);
    const int n = 3;
    double exact = 0.0;
    for (int bits = 0; bits < 64; ++bits) {
      double w = 1.0;
      for (int i = 0; i < 6; ++i) w *= (bits >> i & 1) ? p : 1 - p;
      const bool red0[2] = {!(bits & 1), !(bits & 2)};
      double z1[2] = {0, 0};  // level-1 red words ending in atom b
      bool edge[2][2];
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          edge[x][y] = red0[x] && red0[y] && !(bits >> (2 + 2 * x + y) & 1);
          if (edge[x][y]) z1[y] += 1;
        }
      }
      double v[2] = {z1[0], z1[1]};
      for (int l = 2; l <= n; ++l) {
        const double m = std::pow(1 - p, l - 1);
        double next[2] = {0, 0};
        for (int x = 0; x < 2; ++x) {
          for (int y = 0; y < 2; ++y) next[y] += edge[x][y] ? v[x] * m : 0.0;
        }
        v[0] = next[0];
        v[1] = next[1];
      }
      exact += w * (v[0] + v[1]);
    }
    CHECK(corrected_mean_k1(s, n) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("generating functions and backward iterates") {
  const GwSchedule s = ana_one(0.08);
  CHECK(generating_fn(s, 5, 1.0) == 1.0);
  CHECK(generating_fn(s, 3, 0.0) == doctest::Approx(std::pow(1 - s.progeny_prob(3), 3)));
  const GwSchedule fixed = GwSchedule::from_factors(3, {0.08});
  CHECK(generating_fn(fixed, 1, 0.5) == doctest::Approx(0.884736).epsilon(1e-12));
  CHECK_THROWS_AS(generating_fn(s, 1, 1.5), std::domain_error);

  CHECK(iterate_backward(s, 1, 0.0) == doctest::Approx(std::pow(1 - s.progeny_prob(1), 3)));
  CHECK(iterate_backward(s, 0, 0.3) == 0.3);
  for (int n = 1; n <= 40; ++n) {
    const double s1 = std::pow(1 - s.progeny_prob(n), 3);
    CHECK(iterate_backward(s, n, 0.0) == doctest::Approx(iterate_backward(s, n - 1, s1)));
    CHECK(iterate_backward(s, n, 1.0) == 1.0);
    CHECK(extinction_prob(s, n) >= extinction_prob(s, n - 1 > 0 ? n - 1 : 1) - 1e-15);
    double prev = -1.0;
    for (double x = 0.0; x <= 1.0; x += 0.05) {
      const double v = iterate_backward(s, n, x);
      CHECK(v >= prev);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
  CHECK(extinction_prob(s, 120) > 0.999);
}

TEST_CASE("derivative at 1 equals the mean") {
  for (const GwSchedule& s : {ana_one(0.08), cata_one(0.08),
                              GwSchedule(Kind::Anabolic, ModelParams::model_two(3, 0.5, 0.1, 0.8))}) {
    for (int n = 0; n <= 40; ++n) {
      const double h = 1e-9;
      const double d1 = iterate_backward_complement(s, n, h) / h;
      const double d2 = iterate_backward_complement(s, n, h / 2) / (h / 2);
      const double derivative = 2 * d2 - d1;
      const double m = mean_level_size(s, n);
      // Below this, m h is subnormal and a finite difference cannot resolve it.
      if (m < 1e-280) continue;
      CHECK(std::abs(derivative / m - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("fixed point picture of a single generation") {
  for (const double pn : {0.9, 0.5, 0.3, 0.2}) {
    const GwSchedule s = GwSchedule::from_factors(3, {pn});
    // Iterating f from 0 converges to the smallest fixed point.
    double x = 0.0;
    for (int i = 0; i < 100000; ++i) x = generating_fn(s, 1, x);
    if (3 * pn > 1) {
      CHECK(x < 1.0 - 1e-6);
      CHECK(generating_fn(s, 1, x) == doctest::Approx(x).epsilon(1e-12));
      // Attractive: |f'(s0)| < 1.
      CHECK(3 * pn * std::pow(1 - pn * (1 - x), 2) < 1.0);
    } else {
      CHECK(x == doctest::Approx(1.0).epsilon(1e-3));
    }
  }
}

TEST_CASE("extinction bounds sandwich the exact value") {
  for (const GwSchedule& s : {ana_one(0.08), ana_one(0.2), cata_one(0.08),
                              GwSchedule(Kind::Anabolic, ModelParams::model_two(3, 0.5, 0.1, 0.85))}) {
    int upper_used = 0;
    for (int n = 1; n <= 60; ++n) {
      const ExtinctionEstimate e = extinction_bounds(s, n);
      // The absolute floor covers results in the subnormal range.
      CHECK(e.one_minus_u >= e.lower_one_minus_u * (1 - 1e-12) - 1e-300);
      if (e.upper_one_minus_u) {
        ++upper_used;
        CHECK(e.one_minus_u <= *e.upper_one_minus_u * (1 + 1e-12) + 1e-300);
      }
      CHECK(e.lower <= e.u_exact + 1e-12);
      CHECK(e.u_exact <= e.upper + 1e-12);
    }
    CHECK(upper_used > 0);
  }
}

TEST_CASE("extinction regimes for the Model I protocol") {
  const GwSchedule s = ana_one(0.08);
  for (int n = 2; n <= 13; ++n) {
    const ExtinctionEstimate e = extinction_bounds(s, n);
    CHECK(e.regime[0] == 'A');
    CHECK(e.u_exact == doctest::Approx(std::pow(0.08, 3)).epsilon(0.2));
  }
  // -log(1 - u) becomes of order one near 2 n0.
  const double at = -std::log(extinction_bounds(s, 26).one_minus_u);
  CHECK(at > 0.1);
  CHECK(at < 3.0);
  CHECK(extinction_bounds(s, 40).regime == "B1");
  CHECK(-std::log(extinction_bounds(s, 40).one_minus_u) > 5.0);
}

TEST_CASE("simulated trajectories") {
  const GwSchedule zero = GwSchedule::from_factors(3, {0.0, 0.0, 0.0});
  const GwTrajectory t0 = simulate_gw(zero, 1, 3);
  CHECK(t0.sizes == std::vector<std::uint64_t>{1, 0, 0, 0});

  const GwSchedule s = ana_one(0.08);
  const int runs = 10000;
  const int n_max = 20;
  std::vector<double> sum(n_max + 1, 0.0), sum2(n_max + 1, 0.0), extinct(n_max + 1, 0.0);
  for (int r = 0; r < runs; ++r) {
    const GwTrajectory t = simulate_gw(s, derive_seed(99, r), n_max);
    CHECK(t.sizes[0] == 1);
    for (int n = 0; n <= n_max; ++n) {
      const double z = static_cast<double>(t.sizes[n]);
      sum[n] += z;
      sum2[n] += z * z;
      extinct[n] += t.sizes[n] == 0 ? 1.0 : 0.0;
      if (n > 0) CHECK(t.sizes[n] <= 3 * t.sizes[n - 1]);
    }
  }
  for (int n = 1; n <= n_max; ++n) {
    const double mean = sum[n] / runs;
    const double sd = std::sqrt((sum2[n] / runs - mean * mean) / runs);
    CHECK(std::abs(mean - mean_level_size(s, n)) < 3 * sd + 1e-12);
    const double u = extinction_prob(s, n);
    const double frac = extinct[n] / runs;
    CHECK(std::abs(frac - u) < 3 * std::sqrt(u * (1 - u) / runs) + 1e-12);
  }
}

TEST_CASE("logarithmic sizes") {
  const GwSchedule s = ana_one(0.08);
  for (int n = 5; n <= 20; ++n) {
    const QuadratureResult q = expected_log_size(s, n, GwStart::Atoms);
    CHECK(q.converged);
    const double log_mean = log_mean_from_start(s, n, GwStart::Atoms);
    CHECK(q.value <= log_mean);
    CHECK(std::abs(q.value - log_mean) / log_mean < 0.01);
    // From a single root the Jensen gap stays positive but exceeds 1% at the ends.
    const double single = expected_log_size(s, n).value;
    CHECK(single < log_mean_level_size(s, n));
  }
  // The relative gap opens up close to 2 n0.
  const double log_mean_24 = log_mean_from_start(s, 24, GwStart::Atoms);
  CHECK((log_mean_24 - expected_log_size(s, 24, GwStart::Atoms).value) / log_mean_24 > 0.01);
  // Deterministic growth: E[log Z_n] = n log 3.
  const GwSchedule sure = GwSchedule::from_factors(3, std::vector<double>(10, 1.0));
  for (int n = 1; n <= 10; ++n) {
    CHECK(expected_log_size(sure, n).value == doctest::Approx(n * std::log(3.0)).epsilon(1e-9));
    // The harmonic integral gives the harmonic number H_{3^n} instead.
    double h = 0.0;
    for (int k = 1; k <= static_cast<int>(std::pow(3, n)); ++k) h += 1.0 / k;
    CHECK(harmonic_log_size(sure, n).value == doctest::Approx(h).epsilon(1e-9));
  }
  // Leading order n log|A| - n^2 p / 2 for small p.
  const GwSchedule small = ana_one(0.001);
  const int n = 30;
  CHECK(expected_log_size(small, n).value ==
        doctest::Approx(n * std::log(3.0) - n * n * 0.001 / 2).epsilon(0.005));
}

TEST_CASE("expected log size against simulation") {
  const GwSchedule s = ana_one(0.08);
  const int runs = 20000;
  for (int n : {3, 8, 15}) {
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < runs; ++r) {
      const GwTrajectory t = simulate_gw(s, derive_seed(5, r), n);
      const double v = t.sizes[n] > 0 ? std::log(static_cast<double>(t.sizes[n])) : 0.0;
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / runs;
    const double sd = std::sqrt((sum2 / runs - mean * mean) / runs);
    CHECK(std::abs(mean - expected_log_size(s, n).value) < 3 * sd);
  }
}

TEST_CASE("twisted iterates") {
  const GwSchedule s = ana_one(0.2);
  for (double x : {0.9, 1.0, 1.1}) {
    CHECK(twisted_iterate(s, 6, x, 1.0) == 1.0);
    CHECK(twisted_iterate(s, 6, x, 1.0, TwistTarget::Primitive) == 1.0);
  }
  // x = 1, n = 2: E[u^{Z_1 + Z_2}] = sum_z P[Z_1 = z] (u f_2(u))^z.
  for (double u : {0.1, 0.5, 0.9}) {
    const double p1 = s.progeny_prob(1);
    const double inner = u * generating_fn(s, 2, u);
    double expected = 0.0;
    for (int z = 0; z <= 3; ++z) {
      const double choose = z == 0 || z == 3 ? 1 : 3;
      expected += choose * std::pow(p1, z) * std::pow(1 - p1, 3 - z) * std::pow(inner, z);
    }
    CHECK(twisted_iterate(s, 2, 1.0, u) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("average primitive height against simulation") {
  const GwSchedule s = ana_one(0.15);
  const int n_max = 25;
  const HeightEstimate est = average_primitive_height(s, n_max);
  CHECK(est.stable);
  const int runs = 10000;
  double sum = 0.0, sum2 = 0.0;
  int counted = 0;
  for (int r = 0; r < runs; ++r) {
    const GwTrajectory t = simulate_gw(s, derive_seed(17, r), n_max);
    double num = 0.0, den = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      num += n * static_cast<double>(t.blue[n]);
      den += static_cast<double>(t.blue[n]);
    }
    if (den == 0.0) continue;
    ++counted;
    sum += num / den;
    sum2 += (num / den) * (num / den);
  }
  const double mean = sum / counted;
  const double sd = std::sqrt((sum2 / counted - mean * mean) / counted);
  CHECK(std::abs(mean - est.value) < 3 * sd);
}
