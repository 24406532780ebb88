#include "rulenet/gw.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace rulenet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1 - (1 - x)^a for x in [0, 1], accurate for small x.
double one_minus_pow_complement(double x, int a) {
  return -std::expm1(a * std::log1p(-x));
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

template <class F>
QuadratureResult integrate(F f, double lo, double hi) {
  QuadratureResult out;
  double error = 0.0;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-12,
                                                                            &error, &l1);
  out.error = error;
  out.converged = std::isfinite(out.value) && error <= 1e-8 * std::max(1.0, std::abs(l1));
  return out;
}

}  // namespace

const char* to_string(GwVariant variant) {
  switch (variant) {
    case GwVariant::AnaI: return "AnaI";
    case GwVariant::AnaII: return "AnaII";
    case GwVariant::CataI: return "CataI";
    case GwVariant::CataII: return "CataII";
    case GwVariant::Custom: return "Custom";
  }
  return "?";
}

GwSchedule::GwSchedule(Kind kind, const ModelParams& params, int max_level)
    : kind_(kind), a_(params.alphabet.size()), params_(params) {
  params.validate();
  const bool one = params.variant == Variant::ModelI;
  variant_ = kind == Kind::Anabolic ? (one ? GwVariant::AnaI : GwVariant::AnaII)
                                    : (one ? GwVariant::CataI : GwVariant::CataII);
  log_r_.resize(max_level + 1);
  for (int k = 0; k <= max_level; ++k) {
    double lr = 0.0;
    if (kind == Kind::Anabolic) {
      for (const Word& f : params.foodset.foods()) {
        lr += std::log1p(-acceptance(params, Kind::Anabolic, f.level() + k));
      }
    } else {
      lr = (k == 0 ? 1 : k) * std::log1p(-acceptance(params, Kind::Catabolic, k));
    }
    log_r_[k] = lr;
  }
  finish();
}

GwSchedule GwSchedule::from_factors(int alphabet_size, std::vector<double> r, double r0) {
  if (alphabet_size < 1) throw std::invalid_argument("alphabet size must be positive");
  GwSchedule s;
  s.a_ = alphabet_size;
  s.log_r_.push_back(std::log(r0));
  for (double v : r) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("factors must lie in [0,1]");
    s.log_r_.push_back(std::log(v));
  }
  s.finish();
  return s;
}

void GwSchedule::finish() {
  const int top = static_cast<int>(log_r_.size()) - 1;
  log_p_.assign(top + 1, 0.0);
  log1m_r_.assign(top + 1, 0.0);
  for (int k = 0; k <= top; ++k) {
    log1m_r_[k] = std::log(-std::expm1(log_r_[k]));
    if (k >= 1) log_p_[k] = log_p_[k - 1] + log_r_[k];
  }
}

double GwSchedule::log_factor(int k) const {
  if (k < 0 || k > max_level()) throw std::out_of_range("level outside the schedule");
  return log_r_[k];
}

double GwSchedule::factor(int k) const { return std::exp(log_factor(k)); }

double GwSchedule::log_progeny_prob(int n) const {
  if (n < 0 || n > max_level()) throw std::out_of_range("level outside the schedule");
  return log_p_[n];
}

double GwSchedule::progeny_prob(int n) const { return clamp01(std::exp(log_progeny_prob(n))); }

double GwSchedule::blue_prob(int n) const {
  if (n < 1 || n > max_level()) throw std::out_of_range("level outside the schedule");
  return clamp01(std::exp(log_p_[n - 1] + log1m_r_[n]));
}

double GwSchedule::k0_prefactor() const { return a_ * std::exp(a_ * log_r_[0]); }

double GwSchedule::level0_red_prob() const {
  if (variant_ == GwVariant::CataI || variant_ == GwVariant::CataII) return 1.0;
  return std::exp(log_r_[0]);
}

double log_mean_level_size(const GwSchedule& s, int n) {
  if (n < 0) throw std::out_of_range("negative level");
  double out = 0.0;
  const double log_a = std::log(s.alphabet_size());
  for (int k = 1; k <= n; ++k) out += log_a + s.log_progeny_prob(k);
  return out;
}

double mean_level_size(const GwSchedule& s, int n) { return std::exp(log_mean_level_size(s, n)); }

double log_mean_level_size_continuous(const GwSchedule& s, double x) {
  const double log_a = std::log(s.alphabet_size());
  const double l = s.log_factor(1);
  switch (s.variant()) {
    case GwVariant::AnaI: return x * log_a + l * x * (x + 1) / 2;
    case GwVariant::CataI: return x * log_a + l * x * (x + 1) * (x + 2) / 6;
    default: throw std::invalid_argument("continuous levels need a Model I schedule");
  }
}

double log_corrected_mean_k0(const GwSchedule& s, int n) {
  return std::log(s.k0_prefactor()) + log_mean_level_size(s, n);
}

double corrected_mean_k0(const GwSchedule& s, int n) {
  return std::exp(log_corrected_mean_k0(s, n));
}

namespace {

// prod_{l=2}^n prod_{k=2}^l r_k: the mean factor of one branch past level 1.
double log_branch_factor(const GwSchedule& s, int n) {
  double out = 0.0;
  for (int l = 2; l <= n; ++l) out += s.log_progeny_prob(l) - s.log_factor(1);
  return out;
}

}  // namespace

double corrected_mean_k1(const GwSchedule& s, int n) {
  const int a = s.alphabet_size();
  if (a > 4) throw std::invalid_argument("k = 1 enumeration supports |A| <= 4");
  if (n < 1) throw std::out_of_range("k = 1 correction needs n >= 1");
  const double r0 = s.level0_red_prob();
  const double r1 = s.factor(1);
  const double branch = std::exp(log_branch_factor(s, n));
  double total = 0.0;
  for (unsigned level0 = 0; level0 < (1u << a); ++level0) {
    const int j = std::popcount(level0);
    const double w0 = std::pow(r0, j) * std::pow(1 - r0, a - j);
    if (j == 0 || w0 == 0.0) continue;
    std::vector<int> atoms;
    for (int i = 0; i < a; ++i) {
      if (level0 >> i & 1u) atoms.push_back(i);
    }
    const int pairs = j * j;
    for (std::uint32_t edges = 0; edges < (1u << pairs); ++edges) {
      const int e = std::popcount(edges);
      const double w1 = std::pow(r1, e) * std::pow(1 - r1, pairs - e);
      if (e == 0 || w1 == 0.0) continue;
      // Walks of n edges in the level-1 digraph on the surviving atoms.
      std::vector<double> v(j, 1.0);
      for (int step = 0; step < n; ++step) {
        std::vector<double> next(j, 0.0);
        for (int x = 0; x < j; ++x) {
          for (int y = 0; y < j; ++y) {
            if (edges >> (x * j + y) & 1u) next[y] += v[x];
          }
        }
        v = std::move(next);
      }
      double walks = 0.0;
      for (double c : v) walks += c;
      total += w0 * w1 * walks;
    }
  }
  return total * branch;
}

double corrected_mean_k1_max_term(const GwSchedule& s, int n) {
  const int a = s.alphabet_size();
  const double log_w = a * std::log(s.level0_red_prob()) + a * a * s.log_factor(1);
  return std::exp(log_w + (n + 1) * std::log(a) + log_branch_factor(s, n));
}

double log_primitive_mean(const GwSchedule& s, int n) {
  const int a = s.alphabet_size();
  if (n < 0) throw std::out_of_range("negative level");
  if (n == 0) {
    if (s.variant() == GwVariant::CataI || s.variant() == GwVariant::CataII) return -kInf;
    return std::log(a) + std::log(-std::expm1(s.log_factor(0)));
  }
  const double log_b = std::log(s.blue_prob(n));
  return std::log(s.k0_prefactor()) + log_mean_level_size(s, n - 1) + std::log(a) + log_b;
}

double primitive_mean(const GwSchedule& s, int n) { return std::exp(log_primitive_mean(s, n)); }

double generating_fn(const GwSchedule& s, int n, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("generating function argument outside [0,1]");
  return std::pow(1.0 - s.progeny_prob(n) * (1.0 - x), s.alphabet_size());
}

double iterate_backward(const GwSchedule& s, int n, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("generating function argument outside [0,1]");
  for (int k = n; k >= 1; --k) x = generating_fn(s, k, x);
  return x;
}

double iterate_backward_complement(const GwSchedule& s, int n, double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw std::domain_error("complement argument outside [0,1]");
  for (int k = n; k >= 1; --k) c = one_minus_pow_complement(s.progeny_prob(k) * c, s.alphabet_size());
  return c;
}

double extinction_prob(const GwSchedule& s, int n) { return iterate_backward(s, n, 0.0); }

std::optional<double> critical_level(const GwSchedule& s) {
  const double log_a = std::log(s.alphabet_size());
  double prev = log_a;  // log(|A| p_0)
  for (int n = 1; n <= s.max_level(); ++n) {
    const double cur = log_a + s.log_progeny_prob(n);
    if (cur < 0.0) return (n - 1) + prev / (prev - cur);
    prev = cur;
  }
  return std::nullopt;
}

ExtinctionEstimate extinction_bounds(const GwSchedule& s, int n) {
  if (n < 1) throw std::out_of_range("extinction bounds need n >= 1");
  const int a = s.alphabet_size();
  ExtinctionEstimate est;
  est.n = n;
  est.u_exact = extinction_prob(s, n);

  // c[k] = 1 - u_{k,n}, with u_{n,n} = 0 and u_{k,n} = f_{k+1}(u_{k+1,n}).
  std::vector<double> c(n + 1);
  c[n] = 1.0;
  for (int k = n - 1; k >= 0; --k) {
    c[k] = one_minus_pow_complement(s.progeny_prob(k + 1) * c[k + 1], a);
  }
  est.one_minus_u = c[0];

  // Q_k = prod_{i=k+1}^n |A| p_i, so that eta_k = Q_k / (1 - u_{k,n}) obeys
  // eta_k <= eta_{k+1} + Q_k and, when p_{k+1}(1 - u_{k+1,n}) < 1/2,
  // eta_k >= eta_{k+1} - Q_k / |A|.
  std::vector<double> log_q(n + 1, 0.0);
  for (int k = n - 1; k >= 0; --k) {
    log_q[k] = log_q[k + 1] + std::log(a) + s.log_progeny_prob(k + 1);
  }
  const double eta_top = a * s.progeny_prob(n) / c[n - 1];
  double sum_q = 0.0;
  for (int k = 0; k <= n - 2; ++k) sum_q += std::exp(log_q[k]);
  const double q0 = std::exp(log_q[0]);

  est.lower_one_minus_u = q0 / (eta_top + sum_q);
  bool small_steps = true;
  for (int k = 0; k <= n - 2; ++k) {
    if (!(s.progeny_prob(k + 1) * c[k + 1] < 0.5)) small_steps = false;
  }
  const double denom = eta_top - sum_q / a;
  est.upper_applicable = small_steps && denom > 0.0;
  if (est.upper_applicable) est.upper_one_minus_u = q0 / denom;
  est.upper = std::min(1.0, 1.0 - est.lower_one_minus_u);
  est.lower = est.upper_one_minus_u ? std::max(0.0, 1.0 - *est.upper_one_minus_u) : 0.0;

  const std::optional<double> n0 = critical_level(s);
  const bool early = !n0 || n <= *n0;
  const double one_minus_s1 = c[n - 1];
  const bool small_start = one_minus_s1 * mean_level_size(s, n) < 1.0;
  est.regime = std::string(early ? "A" : "B") + (small_start ? "1" : "2");
  return est;
}

GwTrajectory simulate_gw(const GwSchedule& s, std::uint64_t seed, int n_max) {
  std::mt19937_64 rng(seed);
  GwTrajectory out;
  out.sizes.assign(n_max + 1, 0);
  out.blue.assign(n_max + 1, 0);
  out.sizes[0] = 1;
  for (int n = 1; n <= n_max; ++n) {
    const std::uint64_t trials = out.sizes[n - 1] * static_cast<std::uint64_t>(s.alphabet_size());
    if (trials == 0) break;
    const double p = s.progeny_prob(n);
    std::binomial_distribution<std::uint64_t> red(trials, p);
    out.sizes[n] = red(rng);
    const std::uint64_t rest = trials - out.sizes[n];
    if (rest > 0 && p < 1.0) {
      std::binomial_distribution<std::uint64_t> blue(rest, clamp01(s.blue_prob(n) / (1.0 - p)));
      out.blue[n] = blue(rng);
    }
  }
  return out;
}

namespace {

// Frullani form of E[log G; G > 0] = int [c(t) - c(inf) (1 - e^{-t})] dt / t,
// integrated in v = log t; `mean` bounds E[G] and fixes the lower cutoff.
template <class Complement>
QuadratureResult frullani(Complement complement, double mean) {
  const double c_inf = complement(kInf);
  auto integrand = [&](double v) {
    const double t = std::exp(v);
    return complement(t) - c_inf * (-std::expm1(-t));
  };
  const double lo = std::log(1e-14 / (1.0 + mean));
  const double hi = std::log(80.0);
  return integrate(integrand, lo, hi);
}

}  // namespace

double log_mean_from_start(const GwSchedule& s, int n, GwStart start) {
  const double base = log_mean_level_size(s, n);
  if (start == GwStart::SingleRoot) return base;
  return std::log(s.alphabet_size() * s.level0_red_prob()) + base;
}

namespace {

// 1 - E[(1 - c)^{Z_n}] from the single-root complement.
double start_complement(const GwSchedule& s, double single, GwStart start) {
  if (start == GwStart::SingleRoot) return single;
  return one_minus_pow_complement(s.level0_red_prob() * single, s.alphabet_size());
}

}  // namespace

QuadratureResult expected_log_size(const GwSchedule& s, int n, GwStart start) {
  auto complement = [&](double t) {
    const double c = iterate_backward_complement(s, n, t == kInf ? 1.0 : -std::expm1(-t));
    return start_complement(s, c, start);
  };
  return frullani(complement, std::exp(log_mean_from_start(s, n, start)));
}

QuadratureResult harmonic_log_size(const GwSchedule& s, int n, GwStart start) {
  // int_0^1 C(c) / c dc with c = 1 - s, integrated in w = log c.
  auto integrand = [&](double w) {
    return start_complement(s, iterate_backward_complement(s, n, std::exp(w)), start);
  };
  const double lo = std::log(1e-14 / (1.0 + std::exp(log_mean_from_start(s, n, start))));
  return integrate(integrand, lo, 0.0);
}

double twisted_complement(const GwSchedule& s, int n, double x, double t, TwistTarget target) {
  const int a = s.alphabet_size();
  double c = 0.0;
  for (int j = n; j >= 1; --j) {
    const double weight = std::pow(x, j);
    const double hit = t == kInf ? 1.0 : -std::expm1(-t * weight);
    double lost = 0.0;
    if (target == TwistTarget::Red) {
      // 1 - u^{x^j} F_{j+1}, with F_{j+1} = 1 - c.
      lost = t == kInf ? 1.0 : -std::expm1(-t * weight + std::log1p(-c));
      lost = s.progeny_prob(j) * lost;
    } else {
      lost = s.progeny_prob(j) * c + s.blue_prob(j) * hit;
    }
    c = one_minus_pow_complement(std::min(1.0, lost), a);
  }
  return c;
}

double twisted_iterate(const GwSchedule& s, int n, double x, double u, TwistTarget target) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("u outside [0,1]");
  const double t = u == 0.0 ? kInf : -std::log(u);
  return 1.0 - twisted_complement(s, n, x, t, target);
}

QuadratureResult expected_log_twisted(const GwSchedule& s, int n, double x, TwistTarget target) {
  double mean = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double m = target == TwistTarget::Red
                         ? mean_level_size(s, j)
                         : mean_level_size(s, j - 1) * s.alphabet_size() * s.blue_prob(j);
    mean += std::pow(std::max(x, 1.0), j) * m;
  }
  auto complement = [&](double t) { return twisted_complement(s, n, x, t, target); };
  return frullani(complement, mean);
}

HeightEstimate average_primitive_height(const GwSchedule& s, int n_max) {
  const double alive = twisted_complement(s, n_max, 1.0, kInf, TwistTarget::Primitive);
  auto derivative = [&](double h) {
    const double up = expected_log_twisted(s, n_max, 1.0 + h, TwistTarget::Primitive).value;
    const double down = expected_log_twisted(s, n_max, 1.0 - h, TwistTarget::Primitive).value;
    return (up - down) / (2 * h);
  };
  HeightEstimate out;
  const double d1 = derivative(1e-4);
  const double d2 = derivative(2e-4);
  out.value = d1 / alive;
  out.derivative_error = std::abs(d1 - d2) / alive;
  out.stable = out.derivative_error <= 1e-4 * std::max(1.0, std::abs(out.value));
  return out;
}

}  // namespace rulenet
