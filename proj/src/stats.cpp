#include "rulenet/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "rulenet/gw.hpp"

namespace rulenet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<int> smallest_argmax(const std::vector<double>& xs, int from = 0) {
  std::optional<int> best;
  for (int n = from; n < static_cast<int>(xs.size()); ++n) {
    if (!best || xs[n] > xs[*best]) best = n;
  }
  return best;
}

std::optional<int> first_below_one(const std::vector<double>& xs, int from) {
  for (int n = from; n < static_cast<int>(xs.size()); ++n) {
    if (xs[n] < 1.0) return n;
  }
  return std::nullopt;
}

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <class Body>
void parallel_for(int count, int threads, Body body) {
  const int workers = std::clamp(threads, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace

void EnsembleConfig::validate() const {
  params.validate();
  if (sample_size < 1) throw std::invalid_argument("sample_size must be at least 1");
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  if (n_max > params.alphabet.max_level()) {
    throw CapacityError("n_max " + std::to_string(n_max) + " exceeds word capacity");
  }
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

EnsembleBudgetError::EnsembleBudgetError(int run, std::uint64_t seed,
                                         const MemoryBudgetError& cause)
    : std::runtime_error("run " + std::to_string(run) + " (seed " + std::to_string(seed) +
                         "): " + cause.what()),
      run_(run),
      seed_(seed),
      partial_(cause.partial()) {}

StatsReport aggregate_trees(const EnsembleConfig& config, const std::vector<RuleTree>& trees) {
  const int levels = config.n_max + 1;
  const double runs = static_cast<double>(trees.size());
  if (trees.empty()) throw std::invalid_argument("no trees to aggregate");
  StatsReport out;
  out.config = config;
  std::vector<double> sum_v(levels, 0.0), sum_v2(levels, 0.0);
  std::vector<double> sum_p(levels, 0.0), sum_p2(levels, 0.0);
  std::vector<double> sum_log(levels, 0.0);
  out.surviving_runs.assign(levels, 0);
  std::map<std::pair<int, bool>, std::uint64_t> hist;
  // Fixed run order keeps the floating-point sums reproducible.
  for (const RuleTree& tree : trees) {
    for (int n = 0; n < levels; ++n) {
      const double v = n < static_cast<int>(tree.red.size()) ? tree.red[n].size() : 0.0;
      const double p = n < static_cast<int>(tree.prim.size()) ? tree.prim[n].size() : 0.0;
      sum_v[n] += v;
      sum_v2[n] += v * v;
      sum_p[n] += p;
      sum_p2[n] += p * p;
      if (v >= 1.0) {
        sum_log[n] += std::log(v);
        ++out.surviving_runs[n];
      }
    }
    const TreeHeight h = tree.height();
    ++hist[{h.censored ? config.n_max : h.level, h.censored}];
    out.censored += h.censored;
  }
  const auto sd = [runs](double s, double s2) {
    if (runs < 2.0) return 0.0;
    const double mean = s / runs;
    return std::sqrt(std::max(0.0, (s2 - runs * mean * mean) / (runs - 1.0)));
  };
  for (int n = 0; n < levels; ++n) {
    out.mean_v.push_back(sum_v[n] / runs);
    out.mean_prim.push_back(sum_p[n] / runs);
    out.sd_v.push_back(sd(sum_v[n], sum_v2[n]));
    out.sd_prim.push_back(sd(sum_p[n], sum_p2[n]));
    out.mean_log_v.push_back(out.surviving_runs[n] > 0 ? sum_log[n] / out.surviving_runs[n]
                                                       : kNaN);
    out.log_mean_v.push_back(std::log(out.mean_v.back()));
    out.log_mean_v_surviving.push_back(
        out.surviving_runs[n] > 0 ? std::log(sum_v[n] / out.surviving_runs[n]) : kNaN);
  }
  for (int n = 0; n + 1 < levels; ++n) {
    out.log_growth.push_back(out.mean_v[n] > 0.0 ? out.log_mean_v[n + 1] - out.log_mean_v[n]
                                                 : kNaN);
  }
  for (const auto& [key, count] : hist) out.heights.push_back({key.first, count, key.second});

  // Heights from -1 up; a censored tree sits at n_max and is never below n.
  std::vector<double> below(levels + 1, 0.0);
  for (const HeightBin& bin : out.heights) {
    for (int n = bin.height + 1; n <= config.n_max; ++n) below[n] += bin.count;
  }
  for (int n = 0; n <= config.n_max; ++n) out.extinction_cdf.push_back(below[n] / runs);

  out.n0 = smallest_argmax(out.mean_v);
  out.n0p = first_below_one(out.mean_v, 0);
  out.m0 = smallest_argmax(out.mean_prim);
  if (out.m0) out.m0p = first_below_one(out.mean_prim, *out.m0);
  return out;
}

StatsReport run_ensemble(const EnsembleConfig& config) {
  config.validate();
  std::vector<RuleTree> trees(config.sample_size);
  std::vector<std::exception_ptr> errors(config.sample_size);
  BuildOptions options;
  options.vertex_budget = config.vertex_budget;
  parallel_for(config.sample_size, config.threads, [&](int i) {
    const std::uint64_t seed = config.run_seed(i);
    try {
      trees[i] = build_tree(config.kind, config.params, seed, config.n_max, options);
    } catch (const MemoryBudgetError& e) {
      errors[i] = std::make_exception_ptr(EnsembleBudgetError(i, seed, e));
    }
  });
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return aggregate_trees(config, trees);
}

std::vector<int> jensen_violations(const StatsReport& report) {
  std::vector<int> out;
  for (std::size_t n = 0; n < report.mean_log_v.size(); ++n) {
    if (report.surviving_runs[n] == 0) continue;
    const double lhs = report.mean_log_v[n];
    const double rhs = report.log_mean_v_surviving[n];
    if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) out.push_back(static_cast<int>(n));
  }
  return out;
}

TheoryCurves theory_curves(Kind kind, const ModelParams& params, int n_max) {
  const GwSchedule s(kind, params, std::max(n_max, 1));
  TheoryCurves out;
  const bool with_k1 = params.alphabet.size() <= 4;
  for (int n = 0; n <= n_max; ++n) {
    out.plain.push_back(mean_level_size(s, n));
    out.k0.push_back(corrected_mean_k0(s, n));
    if (with_k1) {
      // Level 0 is exact: each atom is red independently.
      out.k1.push_back(n == 0 ? s.alphabet_size() * s.level0_red_prob() : corrected_mean_k1(s, n));
    }
    out.prim.push_back(primitive_mean(s, n));
  }
  return out;
}

Comparison compare_levels(const std::string& label, const std::vector<double>& empirical,
                          const std::vector<double>& predicted, double min_empirical) {
  if (empirical.size() != predicted.size()) {
    throw ShapeMismatchError("comparison '" + label + "' has " +
                             std::to_string(empirical.size()) + " empirical and " +
                             std::to_string(predicted.size()) + " predicted levels");
  }
  Comparison out;
  out.label = label;
  const int levels = static_cast<int>(empirical.size());
  const auto usable = [&](int n) {
    return empirical[n] > 0.0 && predicted[n] > 0.0 && empirical[n] >= min_empirical;
  };
  double sum_abs = 0.0;
  for (int n = 0; n < levels; ++n) {
    ComparisonRow row;
    row.level = n;
    row.empirical = empirical[n];
    row.predicted = predicted[n];
    row.ratio = predicted[n] > 0.0 ? empirical[n] / predicted[n] : kNaN;
    row.log_ratio = usable(n) ? std::log(empirical[n]) - std::log(predicted[n]) : kNaN;
    if (usable(n)) {
      sum_abs += std::abs(row.log_ratio);
      out.max_abs_log_ratio = std::max(out.max_abs_log_ratio, std::abs(row.log_ratio));
      ++out.compared_levels;
    }
    out.rows.push_back(row);
  }
  if (out.compared_levels > 0) out.mean_abs_log_ratio = sum_abs / out.compared_levels;
  const auto e_peak = smallest_argmax(empirical);
  const auto p_peak = smallest_argmax(predicted);
  if (e_peak && p_peak) out.peak_offset = *e_peak - *p_peak;

  double best = std::numeric_limits<double>::infinity();
  for (int d = -levels / 2; d <= levels / 2; ++d) {
    double ss = 0.0;
    int count = 0;
    for (int n = 0; n < levels; ++n) {
      const int m = n - d;
      if (m < 0 || m >= levels || !usable(n) || predicted[m] <= 0.0) continue;
      const double lr = std::log(empirical[n]) - std::log(predicted[m]);
      ss += lr * lr;
      ++count;
    }
    // Shifts must keep most of the compared levels in range.
    if (count == 0 || 2 * count < out.compared_levels) continue;
    const double score = ss / count;
    const bool tie = std::abs(score - best) <= 1e-15 && std::abs(d) < std::abs(out.best_shift);
    if (score < best - 1e-15 || tie) {
      best = score;
      out.best_shift = d;
    }
  }
  return out;
}

std::vector<Comparison> compare_report(const StatsReport& stats, const TheoryCurves& theory,
                                       double min_empirical) {
  std::vector<Comparison> out;
  out.push_back(compare_levels("plain", stats.mean_v, theory.plain, min_empirical));
  out.push_back(compare_levels("k0", stats.mean_v, theory.k0, min_empirical));
  if (!theory.k1.empty()) {
    out.push_back(compare_levels("k1", stats.mean_v, theory.k1, min_empirical));
  }
  return out;
}

const char* to_string(ScanOutcome outcome) {
  return outcome == ScanOutcome::Finite ? "finite" : "exploding";
}

std::optional<double> TransitionScan::midpoint() const {
  if (!exploding_below || !finite_above) return std::nullopt;
  return 0.5 * (*exploding_below + *finite_above);
}

TransitionScan model2_transition_scan(const EnsembleConfig& base,
                                      const std::vector<double>& z_grid) {
  TransitionScan out;
  std::vector<double> grid = z_grid;
  std::sort(grid.begin(), grid.end());
  BuildOptions options;
  options.vertex_budget = base.vertex_budget;
  for (double z : grid) {
    if (!(z > 0.0 && z < 1.0)) throw std::invalid_argument("scan fugacities must lie in (0,1)");
    EnsembleConfig config = base;
    config.params = base.params.with_z(z);
    config.validate();
    ScanPoint point;
    point.z = z;
    std::vector<int> status(config.sample_size, 0);  // 0 extinct, 1 censored, 2 budget
    parallel_for(config.sample_size, config.threads, [&](int i) {
      try {
        const RuleTree tree = build_tree(config.kind, config.params, config.run_seed(i),
                                         config.n_max, options);
        status[i] = tree.height().censored ? 1 : 0;
      } catch (const MemoryBudgetError&) {
        status[i] = 2;
      }
    });
    for (int s : status) {
      ++point.runs;
      point.extinct += s == 0;
      point.censored += s == 1;
      point.budget_exceeded += s == 2;
    }
    point.outcome = point.extinct == point.runs ? ScanOutcome::Finite : ScanOutcome::Exploding;
    out.points.push_back(point);
  }
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    if (out.points[i].outcome != ScanOutcome::Exploding) continue;
    out.exploding_below = out.points[i].z;
    out.finite_above.reset();
    for (std::size_t j = i + 1; j < out.points.size(); ++j) {
      if (out.points[j].outcome == ScanOutcome::Finite) {
        out.finite_above = out.points[j].z;
        break;
      }
    }
  }
  return out;
}

}  // namespace rulenet
