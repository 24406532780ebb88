#include "rulenet/theory.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace rulenet {

namespace {

constexpr double kRootTolerance = 1e-12;
constexpr double kBoundaryTolerance = 1e-9;
constexpr double kGridStep = 1e-3;

void check_open_unit(double z) {
  if (!(z > 0.0 && z < 1.0)) throw std::domain_error("phase functions need z in (0, 1)");
}

int food_level(const Word& food) { return food.length() - 1; }

bool is_lemma_form(const PhaseSpec& spec) {
  if (spec.params.exponent_shift != 1) return false;
  if (spec.kind == Kind::Catabolic) return true;
  for (const Word& f : spec.params.foodset.foods()) {
    if (food_level(f) != 0) return false;
  }
  return true;
}

// Bisection on a bracket [lo, hi] with sign(f(lo)) != sign(f(hi)).
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > kRootTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Scan points: a 1e-3 grid on (0, 1), refined towards both ends so that roots
// within 1e-3 of 0 or 1 are still bracketed.
const std::vector<double>& scan_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int j = 12; j >= 4; --j) g.push_back(std::pow(10.0, -j));
    const int steps = static_cast<int>(std::lround(1.0 / kGridStep));
    for (int k = 1; k < steps; ++k) g.push_back(k * kGridStep);
    for (int j = 4; j <= 15; ++j) g.push_back(1.0 - std::pow(10.0, -j));
    return g;
  }();
  return grid;
}

enum class Crossing { Up, Down };

// First sign change of f on the scan grid in the given direction, after `from`.
std::optional<double> first_crossing(const std::function<double(double)>& f, Crossing dir,
                                     double from = 0.0) {
  const auto& grid = scan_grid();
  double prev_z = -1.0;
  double prev_f = 0.0;
  for (double z : grid) {
    if (z <= from) continue;
    const double fz = f(z);
    if (prev_z > 0.0) {
      const bool up = prev_f < 0.0 && fz >= 0.0;
      const bool down = prev_f > 0.0 && fz <= 0.0;
      if ((dir == Crossing::Up && up) || (dir == Crossing::Down && down)) {
        return fz == 0.0 ? z : bisect(f, prev_z, z);
      }
    }
    prev_z = z;
    prev_f = fz;
  }
  return std::nullopt;
}

// d/dz of the reaction mass, for the derivative of psi.
double reaction_mass_derivative(const PhaseSpec& spec, double z) {
  const int s = spec.params.exponent_shift;
  if (spec.kind == Kind::Anabolic) {
    double sum = 0.0;
    for (const Word& f : spec.params.foodset.foods()) {
      const int e = food_level(f) + s;
      if (e > 0) sum += e * std::pow(z, e - 1);
    }
    return spec.weight * spec.params.p * sum;
  }
  return s > 0 ? spec.weight * spec.params.q * s * std::pow(z, s - 1) : 0.0;
}

}  // namespace

PhaseSpec PhaseSpec::anabolic_lemma(int alphabet_size, double food_rate) {
  // |F| p above 1 is spread over several atom foods so that p stays a probability.
  const int foods = std::max(1, static_cast<int>(std::ceil(food_rate)));
  if (foods > alphabet_size) {
    throw std::invalid_argument("|F| p exceeds the number of atom foods");
  }
  ModelParams params = ModelParams::model_two(alphabet_size, food_rate / foods, 0.5, 0.5);
  params.foodset = Foodset::of_levels(params.alphabet, std::vector<int>(foods, 0));
  params.exponent_shift = 1;
  return PhaseSpec{Kind::Anabolic, params, 1.0};
}

PhaseSpec PhaseSpec::catabolic_lemma(int alphabet_size, double q) {
  ModelParams params = ModelParams::model_two(alphabet_size, 0.5, q, 0.5);
  params.exponent_shift = 1;
  return PhaseSpec{Kind::Catabolic, params, 1.0};
}

PhaseSpec PhaseSpec::with_weight(double w) const {
  PhaseSpec out = *this;
  out.weight = w;
  return out;
}

double reaction_mass(const PhaseSpec& spec, double z) {
  const int s = spec.params.exponent_shift;
  if (spec.kind == Kind::Anabolic) {
    double sum = 0.0;
    for (const Word& f : spec.params.foodset.foods()) sum += std::pow(z, food_level(f) + s);
    return spec.weight * spec.params.p * sum;
  }
  return spec.weight * spec.params.q * std::pow(z, s);
}

double psi(const PhaseSpec& spec, double z) {
  check_open_unit(z);
  const double log_a = std::log(spec.params.alphabet.size());
  const double c = reaction_mass(spec, z);
  if (spec.kind == Kind::Anabolic) return log_a - c * z / (1.0 - z);
  return log_a - c * z / ((1.0 - z) * (1.0 - z));
}

double phi(const PhaseSpec& spec, double z) { return std::log(z) + psi(spec, z); }

double dphi(const PhaseSpec& spec, double z) {
  check_open_unit(z);
  const double c = reaction_mass(spec, z);
  const double dc = reaction_mass_derivative(spec, z);
  const double w = 1.0 - z;
  if (spec.kind == Kind::Anabolic) return 1.0 / z - (dc * z / w + c / (w * w));
  return 1.0 / z - (dc * z / (w * w) + c * (1.0 + z) / (w * w * w));
}

double lemma_cubic(const PhaseSpec& spec, double z) {
  if (!is_lemma_form(spec)) {
    throw std::invalid_argument("the lemma cubic needs level-0 foods and exponent shift 1");
  }
  if (spec.kind == Kind::Anabolic) {
    const double fp = spec.weight * spec.params.p * spec.params.foodset.size();
    return fp * z * z * z + (1.0 - 2.0 * fp) * z * z - 2.0 * z + 1.0;
  }
  const double q = spec.weight * spec.params.q;
  return z * z * z - (3.0 - 2.0 * q) * z * z + 3.0 * z - 1.0;
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::ALocalized: return "A_localized";
    case Phase::ADelocalized: return "A_delocalized";
    case Phase::B: return "B";
    case Phase::C: return "C";
  }
  return "?";
}

PhaseRoots phase_roots(const PhaseSpec& spec) {
  const auto f_phi = [&](double z) { return phi(spec, z); };
  const auto f_psi = [&](double z) { return psi(spec, z); };
  const auto f_dphi = [&](double z) { return dphi(spec, z); };

  PhaseRoots roots;
  roots.zp_phi = first_crossing(f_dphi, Crossing::Down);
  roots.z_star = first_crossing(f_psi, Crossing::Down);
  if (!roots.zp_phi) throw std::runtime_error("phi has no interior maximum");
  roots.phi_max = phi(spec, *roots.zp_phi);
  if (roots.phi_max <= 0.0) {
    roots.phase_a_empty = true;
    return roots;
  }
  roots.y_phi = first_crossing(f_phi, Crossing::Up);
  roots.z_phi = first_crossing(f_phi, Crossing::Down, *roots.zp_phi);
  return roots;
}

PhaseLabel classify_phase(const PhaseSpec& spec, double z) {
  const double f = phi(spec, z);
  const double g = psi(spec, z);
  PhaseLabel label;
  if (f > 0.0) {
    const double d = dphi(spec, z);
    label.phase = d > 0.0 ? Phase::ALocalized : Phase::ADelocalized;
    label.boundary = std::abs(d) < kBoundaryTolerance;
  } else if (g > 0.0) {
    label.phase = Phase::B;
  } else {
    label.phase = Phase::C;
  }
  label.boundary = label.boundary || std::abs(f) < kBoundaryTolerance ||
                   std::abs(g) < kBoundaryTolerance;
  return label;
}

CharacteristicLevels characteristic_levels(const PhaseSpec& spec, double z) {
  if (spec.weight != 1.0) throw std::invalid_argument("level predictions need weight 1");
  if (!(z > 0.0 && z <= 1.0)) throw std::domain_error("fugacity must lie in (0, 1]");
  CharacteristicLevels out;
  if (z == 1.0) {
    out.levels_defined = true;
    out.prim_levels_defined = true;
  } else {
    out.levels_defined = psi(spec, z) < 0.0;
    out.prim_levels_defined = phi(spec, z) < 0.0;
  }

  const GwSchedule s(spec.kind, spec.params.with_z(z));
  const int n_top = s.max_level();
  const double log_a = std::log(s.alphabet_size());

  if (out.levels_defined) {
    for (int n = 0; n < n_top; ++n) {
      if (log_a + s.log_progeny_prob(n + 1) < 0.0) {
        out.n0 = n;
        break;
      }
    }
    out.n0_real = critical_level(s);
    double log_m = 0.0;
    for (int n = 1; n <= n_top; ++n) {
      log_m += log_a + s.log_progeny_prob(n);
      if (log_m < 0.0) {
        out.n0p = n;
        break;
      }
    }
  }

  if (out.prim_levels_defined) {
    double best = -std::numeric_limits<double>::infinity();
    int arg = -1;
    for (int n = 1; n <= n_top; ++n) {
      const double v = log_primitive_mean(s, n);
      if (v > best) {
        best = v;
        arg = n;
      }
    }
    if (arg > 0 && arg < n_top) out.m0 = arg;

    // n log|A| + log((1 - r_n) / D_n) + sum_{j<n} (n - j + 1) log r_j, where
    // D_n is the level-0 analogue of 1 - r_n, so that the ratio is about z^n.
    const double d_ana = -std::expm1(std::log(s.factor(0)));
    const double log1m_r0_cata =
        std::log1p(-acceptance(spec.params.with_z(z), Kind::Catabolic, 0));
    double sum_log_r = 0.0;      // sum_{j<n} log r_j
    double weighted = 0.0;       // sum_{j<n} (n - j + 1) log r_j
    for (int n = 1; n <= n_top; ++n) {
      const double log1m_rn = std::log(-std::expm1(s.log_factor(n)));
      const double d = spec.kind == Kind::Anabolic ? d_ana : -std::expm1(n * log1m_r0_cata);
      const double bracket = n * log_a + log1m_rn - std::log(d) + weighted;
      if (bracket < 0.0) {
        out.m0p = n;
        break;
      }
      // Moving to n + 1 adds one unit of weight to every earlier term.
      weighted += sum_log_r + 2.0 * s.log_factor(n);
      sum_log_r += s.log_factor(n);
    }
  }
  return out;
}

double n0_asymptotic(const PhaseSpec& spec, double z) {
  const double log_a = std::log(spec.params.alphabet.size());
  const double c = reaction_mass(spec, z);
  if (spec.kind == Kind::Anabolic) return log_a / c;
  return std::sqrt(2.0 * log_a / c);
}

double m0_asymptotic(const PhaseSpec& spec, double z) {
  const double log_az = std::log(spec.params.alphabet.size() * z);
  const double c = reaction_mass(spec, z);
  if (spec.kind == Kind::Anabolic) return log_az / (c * z);
  return std::sqrt(2.0 * log_az / c);
}

double n0_model_one(int alphabet_size, double p) {
  return std::log(alphabet_size) / -std::log1p(-p);
}

double n_frag(int alphabet_size, double q) {
  return std::sqrt(2.0 * std::log(alphabet_size) / -std::log1p(-q));
}

double n_frag_asymptotic(int alphabet_size, double q) {
  return std::sqrt(2.0 * std::log(alphabet_size) / q);
}

LevelPrediction predicted_level_means(Kind kind, const ModelParams& params, int n) {
  if (n < 0) throw std::out_of_range("level must be non-negative");
  const GwSchedule s(kind, params, std::max(n, 1));
  LevelPrediction out;
  out.log_mean_v = n == 0 ? std::log(s.alphabet_size() * s.factor(0)) : log_corrected_mean_k0(s, n);
  out.log_mean_prim = log_primitive_mean(s, n);
  out.mean_v = std::exp(out.log_mean_v);
  out.mean_prim = std::exp(out.log_mean_prim);
  return out;
}

SeriesProbability empty_network_prob(Kind kind, const ModelParams& params) {
  params.validate();
  const int a = params.alphabet.size();
  SeriesProbability out;
  if (params.z * a >= 1.0) {
    out.diverges = true;
    out.log_prob = -std::numeric_limits<double>::infinity();
    return out;
  }
  // Level-n reactant words number |A|^{n+1}; each carries |F| food reactions
  // (anabolic) or n cuts (catabolic).
  const double ratio = a * params.z;
  double sum = 0.0;
  for (int n = 0; n < 100000; ++n) {
    double per_word = 0.0;
    if (kind == Kind::Anabolic) {
      for (const Word& f : params.foodset.foods()) {
        per_word += std::log1p(-acceptance(params, kind, food_level(f) + n));
      }
    } else if (n >= 1) {
      per_word = n * std::log1p(-acceptance(params, kind, n));
    }
    const double term = std::pow(static_cast<double>(a), n + 1) * per_word;
    sum += term;
    out.terms = n + 1;
    // Terms decay at least like ((n + 2) / (n + 1)) (|A| z) per level.
    const double rho = ratio * (n + 2.0) / (n + 1.0);
    if (n >= 1 && rho < 1.0) {
      const double tail = std::abs(term) * rho / (1.0 - rho);
      if (tail <= 1e-12 * std::abs(sum) || tail == 0.0) break;
    }
  }
  out.log_prob = sum;
  out.prob = std::exp(sum);
  return out;
}

}  // namespace rulenet
