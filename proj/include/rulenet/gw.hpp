#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rulenet/model.hpp"

namespace rulenet {

enum class GwVariant { AnaI, AnaII, CataI, CataII, Custom };

const char* to_string(GwVariant variant);

// Generation-indexed progeny law of the inhomogeneous Galton-Watson
// comparison tree. A vertex of level n-1 has Bin(|A|, p_n) red children with
// p_n = r_1 r_2 ... r_n, where r_k is the probability that no reaction with a
// level-k suffix fires: prod_F (1 - acc(|F| + k)) (anabolic) or
// (1 - acc(k))^k (catabolic). A child is blue (primitive) with probability
// b_n = p_{n-1} (1 - r_n).
class GwSchedule {
 public:
  static constexpr int kDefaultMaxLevel = 1024;

  GwSchedule(Kind kind, const ModelParams& params, int max_level = kDefaultMaxLevel);

  // A schedule given directly by its per-level factors r_1..r_N; r_0 is the
  // level-0 survival factor used by the corrected means.
  static GwSchedule from_factors(int alphabet_size, std::vector<double> r, double r0 = 1.0);

  GwVariant variant() const { return variant_; }
  Kind kind() const { return kind_; }
  int alphabet_size() const { return a_; }
  int max_level() const { return static_cast<int>(log_r_.size()) - 1; }

  // Survival factor r_k of a single suffix level; r_0 is the level-0 factor.
  double factor(int k) const;
  double log_factor(int k) const;
  // p_n, with p_0 = 1.
  double progeny_prob(int n) const;
  double log_progeny_prob(int n) const;
  // b_n = p_{n-1} (1 - r_n), for n >= 1.
  double blue_prob(int n) const;
  // Level-0 prefactor |A| r0^{|A|} of the k = 0 correction; r0 is the probability
  // that an atom is red: prod_F (1 - acc(|F|)) (anabolic), 1 - acc(0) (catabolic).
  double k0_prefactor() const;
  // Probability that a level-0 word is red in the k = 1 enumeration; the
  // catabolic level 0 has no bond to cut.
  double level0_red_prob() const;

  const ModelParams* params() const { return params_ ? &*params_ : nullptr; }

 private:
  GwSchedule() = default;
  void finish();

  GwVariant variant_ = GwVariant::Custom;
  Kind kind_ = Kind::Anabolic;
  int a_ = 2;
  std::optional<ModelParams> params_;
  std::vector<double> log_r_;        // index 0 holds log r_0
  std::vector<double> log_p_;        // prefix sums, log_p_[0] = 0
  std::vector<double> log1m_r_;      // log(1 - r_k)
};

// The plain mean m_{1,n} = prod_{k=1}^n |A| p_k of a tree started from one vertex.
double mean_level_size(const GwSchedule& s, int n);
double log_mean_level_size(const GwSchedule& s, int n);
// Model I closed form extended to real levels: (|A| (1-p)^{(x+1)/2})^x for the
// anabolic schedule, |A|^x (1-q)^{x(x+1)(x+2)/6} for the catabolic one.
double log_mean_level_size_continuous(const GwSchedule& s, double x);

// k = 0 correction: |A| r0^{|A|} m_{1,n}.
double corrected_mean_k0(const GwSchedule& s, int n);
double log_corrected_mean_k0(const GwSchedule& s, int n);

// k = 1 correction by enumeration of all level-0/level-1 trees (|A| <= 4).
double corrected_mean_k1(const GwSchedule& s, int n);
// The single term of the maximal level-1 tree.
double corrected_mean_k1_max_term(const GwSchedule& s, int n);

// <Prim_n> with the k = 0 prefactor; the level-0 value is the exact |A| (1 - r0).
double primitive_mean(const GwSchedule& s, int n);
double log_primitive_mean(const GwSchedule& s, int n);

// f_n(s) = (1 - p_n (1 - s))^{|A|}.
double generating_fn(const GwSchedule& s, int n, double x);
// f^{(n)}(x) = f_1(f_2(... f_n(x))), with f^{(0)}(x) = x.
double iterate_backward(const GwSchedule& s, int n, double x);
// 1 - f^{(n)}(1 - c), computed without cancellation.
double iterate_backward_complement(const GwSchedule& s, int n, double c);

struct ExtinctionEstimate {
  int n = 0;
  double u_exact = 0.0;
  double one_minus_u = 1.0;
  // Bounds on 1 - u from the telescoped eta recursions.
  double lower_one_minus_u = 0.0;
  std::optional<double> upper_one_minus_u;  // nullopt when inapplicable
  double lower = 0.0;  // bounds on u itself
  double upper = 1.0;
  std::string regime;  // "A1", "A2", "B1" or "B2"
  bool upper_applicable = false;
};

// Real-valued level where |A| p_x crosses 1 (log-linear interpolation), or
// nullopt if it does not cross within the schedule.
std::optional<double> critical_level(const GwSchedule& s);

ExtinctionEstimate extinction_bounds(const GwSchedule& s, int n);

struct GwTrajectory {
  std::vector<std::uint64_t> sizes;  // Z_0 .. Z_n
  std::vector<std::uint64_t> blue;   // primitive counts per level, blue[0] = 0
};

GwTrajectory simulate_gw(const GwSchedule& s, std::uint64_t seed, int n_max);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

// Initial population: one root, or the level-0 atoms of the k = 0 corrected
// process, Z_0 ~ Bin(|A|, r0) independent roots.
enum class GwStart { SingleRoot, Atoms };

// E[Z_n] for the given start: m_{1,n} or |A| r0 m_{1,n}.
double log_mean_from_start(const GwSchedule& s, int n, GwStart start);

// E[log Z_n ; Z_n >= 1] through the Frullani representation
// log y = int_0^inf (e^{-t} - e^{-ty}) dt / t, which is exact for every y > 0.
QuadratureResult expected_log_size(const GwSchedule& s, int n,
                                   GwStart start = GwStart::SingleRoot);
// The harmonic-number integral int_0^1 (1 - f^{(n)}(s)) / (1 - s) ds = E[H_{Z_n}].
QuadratureResult harmonic_log_size(const GwSchedule& s, int n,
                                   GwStart start = GwStart::SingleRoot);
double extinction_prob(const GwSchedule& s, int n);

enum class TwistTarget { Red, Primitive };

// f^{(1,n)}(x, u) = E[u^{G}] with G = sum_{j=1}^n x^j Z_j (red target) or
// G = sum_{j=1}^n x^j Prim_j (primitive target).
double twisted_iterate(const GwSchedule& s, int n, double x, double u,
                       TwistTarget target = TwistTarget::Red);
// 1 - E[exp(-t G(x))], without cancellation; t = +inf gives P[G > 0].
double twisted_complement(const GwSchedule& s, int n, double x, double t, TwistTarget target);
// E[log G(x) ; G(x) > 0] via the Frullani integral.
QuadratureResult expected_log_twisted(const GwSchedule& s, int n, double x, TwistTarget target);

struct HeightEstimate {
  double value = 0.0;
  double derivative_error = 0.0;
  bool stable = true;
};

// <sum n Prim_n / sum Prim_n> over runs with at least one primitive vertex,
// from the central difference of E[log G(x)] at x = 1.
HeightEstimate average_primitive_height(const GwSchedule& s, int n_max);

}  // namespace rulenet
