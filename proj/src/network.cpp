#include "rulenet/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace rulenet {

namespace {

int level_of(const Word& w) { return w.length() - 1; }

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

std::uint64_t total_words(int a, int n_max) {
  long double total = 0.0L;
  for (int l = 0; l <= n_max; ++l) total += std::pow(static_cast<long double>(a), l + 1);
  return total > 1e19L ? std::numeric_limits<std::uint64_t>::max()
                       : static_cast<std::uint64_t>(total);
}

struct Rule {
  int food;
  Word reactant;
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct RuleHash {
  std::size_t operator()(const Rule& r) const noexcept {
    return WordHash{}(r.reactant) * 31u + static_cast<std::size_t>(r.food);
  }
};

// The distinct words read in either direction inside x: the reactants of the
// rules that can touch x.
std::vector<Word> touching_reactants(const Word& x) {
  std::vector<Word> subs = strict_subwords(x);
  subs.push_back(x);
  std::unordered_set<Word, WordHash> out(subs.begin(), subs.end());
  for (const Word& u : subs) out.insert(u.reversed());
  return {out.begin(), out.end()};
}

double rule_acceptance(const ModelParams& params, int food, const Word& reactant) {
  return acceptance(params, Kind::Anabolic,
                    level_of(params.foodset[food]) + level_of(reactant));
}

// True iff the firing rules touching y are exactly {r}.
bool touched_only_by(const ReactionOracle& oracle, const Foodset& foods, const Word& y,
                     const Rule& r) {
  for (const Word& u : touching_reactants(y)) {
    for (int f = 0; f < foods.size(); ++f) {
      if (oracle.omega(ReactionId::anabolic(foods[f], u)) && !(Rule{f, u} == r)) return false;
    }
  }
  return true;
}

}  // namespace

NetworkBudgetError::NetworkBudgetError(std::size_t budget, std::size_t required)
    : std::runtime_error("network of " + std::to_string(required) +
                         " vertices exceeds the budget of " + std::to_string(budget)),
      budget_(budget),
      required_(required) {}

AnabolicNetwork::AnabolicNetwork(const ModelParams& params, const ReactionOracle& oracle,
                                 int n_max, NetworkOptions opts)
    : params_(params), oracle_(&oracle), n_max_(n_max), a_(params.alphabet.size()) {
  params_.validate();
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  if (n_max + 1 > params_.alphabet.max_atoms()) {
    throw CapacityError("n_max " + std::to_string(n_max) + " exceeds word capacity");
  }
  const std::uint64_t total = total_words(a_, n_max);
  if (total > opts.vertex_budget) throw NetworkBudgetError(opts.vertex_budget, total);

  const Foodset& foods = params_.foodset;
  const int nf = foods.size();
  offsets_.assign(n_max + 2, 0);
  words_.resize(n_max + 1);
  rev_.resize(n_max + 1);
  own_.resize(n_max + 1);
  right_.resize(n_max + 1);
  left_.resize(n_max + 1);

  for (int l = 0; l <= n_max; ++l) {
    const std::uint64_t size = ipow(a_, l + 1);
    offsets_[l + 1] = offsets_[l] + size;
    auto& words = words_[l];
    auto& rev = rev_[l];
    auto& own = own_[l];
    words.resize(size);
    rev.resize(size);
    own.assign(size, 0);
    const std::uint64_t top = ipow(a_, l);  // weight of the first atom
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      const int last = static_cast<int>(idx % a_);
      if (l == 0) {
        words[idx] = Word::single(last, params_.alphabet);
        rev[idx] = idx;
      } else {
        const std::uint64_t pre = idx / a_;
        words[idx] = words_[l - 1][pre].append(last);
        rev[idx] = last * top + rev_[l - 1][pre];
      }
      std::uint64_t mask = 0;
      for (int f = 0; f < nf; ++f) {
        if (oracle.omega(ReactionId::anabolic(foods[f], words[idx]))) mask |= 1ULL << f;
      }
      own[idx] = mask;
    }
    auto& right = right_[l];
    auto& left = left_[l];
    right.resize(size);
    left.resize(size);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      std::uint64_t r = own[idx];
      std::uint64_t lm = own[rev[idx]];
      if (l > 0) {
        const std::uint64_t pre = idx / a_;
        const std::uint64_t suf = idx % top;
        r |= right_[l - 1][pre] | right_[l - 1][suf];
        lm |= left_[l - 1][pre] | left_[l - 1][suf];
      }
      right[idx] = r;
      left[idx] = lm;
    }
  }

  count_components();
  if (opts.components) build_partitions();
}

std::uint64_t AnabolicNetwork::level_size(int level) const {
  return offsets_.at(level + 1) - offsets_.at(level);
}

std::uint64_t AnabolicNetwork::index(const Word& x) const {
  const int l = level_of(x);
  if (l < 0 || l > n_max_) throw std::out_of_range("word outside the truncated network");
  std::uint64_t idx = 0;
  for (int i = 0; i < x.length(); ++i) idx = idx * a_ + x.atom(i);
  return idx;
}

std::uint64_t AnabolicNetwork::right_mask(const Word& x) const {
  return right_[level_of(x)][index(x)];
}

std::uint64_t AnabolicNetwork::left_mask(const Word& x) const {
  return left_[level_of(x)][index(x)];
}

bool AnabolicNetwork::is_isolated(const Word& x) const {
  return (right_mask(x) | left_mask(x)) == 0;
}

std::vector<NetworkEdge> AnabolicNetwork::out_edges(const Word& x) const {
  std::vector<NetworkEdge> out;
  const int l = level_of(x);
  const std::uint64_t idx = index(x);
  const Foodset& foods = params_.foodset;
  for (int f = 0; f < foods.size(); ++f) {
    if (l + foods[f].length() > n_max_) continue;
    if (right_[l][idx] >> f & 1) out.push_back({x, x.concat(foods[f])});
    if (left_[l][idx] >> f & 1) out.push_back({x, foods[f].concat(x)});
  }
  std::sort(out.begin(), out.end(), [](const NetworkEdge& a, const NetworkEdge& b) {
    return a.to < b.to;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NetworkEdge> AnabolicNetwork::primitive_out_edges(const Word& x) const {
  std::vector<NetworkEdge> out;
  const int l = level_of(x);
  const std::uint64_t idx = index(x);
  std::uint64_t strict_r = 0;
  std::uint64_t strict_l = 0;
  if (l > 0) {
    const std::uint64_t pre = idx / a_;
    const std::uint64_t suf = idx % ipow(a_, l);
    strict_r = right_[l - 1][pre] | right_[l - 1][suf];
    strict_l = left_[l - 1][pre] | left_[l - 1][suf];
  }
  const std::uint64_t prim_r = own_[l][idx] & ~strict_r;
  const std::uint64_t prim_l = own_[l][rev_[l][idx]] & ~strict_l;
  const Foodset& foods = params_.foodset;
  for (int f = 0; f < foods.size(); ++f) {
    if (l + foods[f].length() > n_max_) continue;
    if (prim_r >> f & 1) out.push_back({x, x.concat(foods[f])});
    if (prim_l >> f & 1) out.push_back({x, foods[f].concat(x)});
  }
  std::sort(out.begin(), out.end(), [](const NetworkEdge& a, const NetworkEdge& b) {
    return a.to < b.to;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NetworkEdge> AnabolicNetwork::primitive_edges() const {
  std::vector<NetworkEdge> out;
  for (int l = 0; l <= n_max_; ++l) {
    for (const Word& x : words_[l]) {
      for (NetworkEdge& e : primitive_out_edges(x)) out.push_back(std::move(e));
    }
  }
  return out;
}

std::uint64_t AnabolicNetwork::find(std::vector<std::uint64_t>& parent, std::uint64_t v) const {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

std::uint64_t AnabolicNetwork::find_const(const std::vector<std::uint64_t>& parent,
                                          std::uint64_t v) const {
  while (parent[v] != v) v = parent[v];
  return v;
}

void AnabolicNetwork::build_partitions() {
  const std::uint64_t n = vertex_count();
  parent_.resize(n);
  prim_parent_.resize(n);
  std::iota(parent_.begin(), parent_.end(), 0);
  std::iota(prim_parent_.begin(), prim_parent_.end(), 0);
  const auto unite = [this](std::vector<std::uint64_t>& parent, std::uint64_t u,
                            std::uint64_t v) {
    u = find(parent, u);
    v = find(parent, v);
    if (u != v) parent[std::max(u, v)] = std::min(u, v);
  };
  for (int l = 0; l <= n_max_; ++l) {
    for (std::uint64_t idx = 0; idx < level_size(l); ++idx) {
      const Word& x = words_[l][idx];
      const std::uint64_t gx = global(l, idx);
      for (const NetworkEdge& e : out_edges(x)) {
        unite(parent_, gx, global(level_of(e.to), index(e.to)));
      }
      for (const NetworkEdge& e : primitive_out_edges(x)) {
        unite(prim_parent_, gx, global(level_of(e.to), index(e.to)));
      }
    }
  }
  has_partitions_ = true;
}

bool AnabolicNetwork::same_component(const Word& x, const Word& y) const {
  if (!has_partitions_) throw std::logic_error("network built without partitions");
  return find_const(parent_, global(level_of(x), index(x))) ==
         find_const(parent_, global(level_of(y), index(y)));
}

bool AnabolicNetwork::same_primitive_component(const Word& x, const Word& y) const {
  if (!has_partitions_) throw std::logic_error("network built without partitions");
  return find_const(prim_parent_, global(level_of(x), index(x))) ==
         find_const(prim_parent_, global(level_of(y), index(y)));
}

std::uint64_t AnabolicNetwork::component_count() const {
  if (!has_partitions_) throw std::logic_error("network built without partitions");
  std::uint64_t roots = 0;
  for (std::uint64_t v = 0; v < parent_.size(); ++v) roots += parent_[v] == v;
  return roots;
}

void AnabolicNetwork::count_components() {
  const Foodset& foods = params_.foodset;
  counts_.words.assign(n_max_ + 1, 0);
  counts_.isolated.assign(n_max_ + 1, 0);
  counts_.two_molecule.assign(n_max_ + 1, 0);
  counts_.open_flagged.assign(n_max_ + 1, 0);
  for (int l = 0; l <= n_max_; ++l) {
    const std::uint64_t top = ipow(a_, l);
    counts_.words[l] = level_size(l);
    for (std::uint64_t idx = 0; idx < level_size(l); ++idx) {
      if ((right_[l][idx] | left_[l][idx]) == 0) {
        ++counts_.isolated[l];
        continue;
      }
      if (l > 0) {
        const std::uint64_t pre = idx / a_;
        const std::uint64_t suf = idx % top;
        if ((right_[l - 1][pre] | right_[l - 1][suf] | left_[l - 1][pre] |
             left_[l - 1][suf]) != 0) {
          continue;
        }
      }
      // Exactly one rule identity may touch x, and it must be x's own.
      const std::uint64_t own_r = own_[l][idx];
      const std::uint64_t own_l = own_[l][rev_[l][idx]];
      const bool palindrome = rev_[l][idx] == idx;
      const int ids = std::popcount(own_r) + (palindrome ? 0 : std::popcount(own_l));
      if (ids != 1) continue;
      const Word& x = words_[l][idx];
      const int f0 = std::countr_zero(own_r ? own_r : own_l);
      const Word& food = foods[f0];
      const Rule rule{f0, own_r ? x : x.reversed()};
      if (l + food.length() > n_max_) {
        ++counts_.open_flagged[l];
        continue;
      }
      // The rule's two primitive reactions: V -> V.F and reverse(V) -> F.reverse(V).
      const Word v = rule.reactant;
      const Word vr = v.reversed();
      const NetworkEdge e1{v, v.concat(food)};
      const NetworkEdge e2{vr, food.concat(vr)};
      std::vector<Word> comp{x};
      const auto touches = [&comp](const NetworkEdge& e) {
        return std::find(comp.begin(), comp.end(), e.from) != comp.end() ||
               std::find(comp.begin(), comp.end(), e.to) != comp.end();
      };
      const auto absorb = [&comp](const NetworkEdge& e) {
        for (const Word& w : {e.from, e.to}) {
          if (std::find(comp.begin(), comp.end(), w) == comp.end()) comp.push_back(w);
        }
      };
      bool used1 = false;
      bool used2 = false;
      for (int pass = 0; pass < 2; ++pass) {
        if (!used1 && touches(e1)) {
          absorb(e1);
          used1 = true;
        }
        if (!used2 && touches(e2)) {
          absorb(e2);
          used2 = true;
        }
      }
      if (comp.size() != 2) continue;
      const Word& y = comp[1];
      if (touched_only_by(*oracle_, foods, y, rule)) {
        ++counts_.two_molecule[level_of(y)];
        two_molecule_.push_back({x, y});
      }
    }
  }
}

AnabolicNetwork build_anabolic_network(const ModelParams& params, const ReactionOracle& oracle,
                                       int n_max, NetworkOptions opts) {
  return AnabolicNetwork(params, oracle, n_max, opts);
}

ComponentCounts anabolic_component_counts(const ModelParams& params, std::uint64_t seed,
                                          int n_max) {
  const HashOracle oracle(params, seed);
  NetworkOptions opts;
  opts.components = false;
  return AnabolicNetwork(params, oracle, n_max, opts).counts();
}

double log_isolated_prob(const ModelParams& params, int n) {
  if (n < 0) throw std::out_of_range("level must be non-negative");
  double out = 0.0;
  for (int k = 1; k <= n; ++k) {
    for (const Word& f : params.foodset.foods()) {
      out += 2.0 * (n + 1 - k) * std::log1p(-acceptance(params, Kind::Anabolic, level_of(f) + k));
    }
  }
  return out;
}

double isolated_prob(const ModelParams& params, int n) {
  return std::exp(log_isolated_prob(params, n));
}

double log_two_molecule_prob(const ModelParams& params, int n) {
  if (n < 1) throw std::out_of_range("a two-molecule component needs n >= 1");
  const double acc = acceptance(params, Kind::Anabolic, n - 1);
  return std::log(acc) - std::log1p(-acc) + log_isolated_prob(params, n);
}

double two_molecule_prob(const ModelParams& params, int n) {
  return std::exp(log_two_molecule_prob(params, n));
}

double isolated_prob_exact(const ModelParams& params, const Word& x) {
  double log_p = 0.0;
  for (const Word& u : touching_reactants(x)) {
    for (int f = 0; f < params.foodset.size(); ++f) {
      log_p += std::log1p(-rule_acceptance(params, f, u));
    }
  }
  return std::exp(log_p);
}

double two_molecule_prob_exact(const ModelParams& params, const Word& x, int food) {
  const Word& f = params.foodset[food];
  const Word y = x.concat(f);
  const Word xr = x.reversed();
  // The rule (F, x) also yields reverse(x) -> F.reverse(x); it must stay apart.
  const Word y2 = f.concat(xr);
  if (xr == x || y2 == y) {
    if (!(xr == x && y2 == y)) return 0.0;
  }
  const Rule rule{food, x};
  double log_p = std::log(rule_acceptance(params, food, x));
  for (const Word& u : touching_reactants(y)) {
    for (int g = 0; g < params.foodset.size(); ++g) {
      if (Rule{g, u} == rule) continue;
      log_p += std::log1p(-rule_acceptance(params, g, u));
    }
  }
  return std::exp(log_p);
}

double isolated_growth_rate(const ModelParams& params, double z) {
  return psi(PhaseSpec{Kind::Anabolic, params, 2.0}, z);
}

double two_molecule_growth_rate(const ModelParams& params, double z) {
  return phi(PhaseSpec{Kind::Anabolic, params, 2.0}, z);
}

namespace {

std::optional<int> appended_atom(const Word& x, const Word& y) {
  if (y.length() != x.length() + 1) return std::nullopt;
  if (y.prefix(x.length()) == x) return y.atom(x.length());
  if (y.suffix(x.length()) == x) return y.atom(0);
  return std::nullopt;
}

std::unordered_map<Word, int, WordHash> in_degrees(const PrimitiveComponent& g) {
  std::unordered_map<Word, int, WordHash> deg;
  for (const Word& v : g.vertices) deg.emplace(v, 0);
  for (const NetworkEdge& e : g.edges) ++deg[e.to];
  return deg;
}

}  // namespace

Word PrimitiveComponent::root() const {
  const auto deg = in_degrees(*this);
  for (const Word& v : vertices) {
    if (deg.at(v) == 0) return v;
  }
  throw std::invalid_argument("component has no root");
}

int PrimitiveComponent::min_level() const {
  int out = std::numeric_limits<int>::max();
  for (const Word& v : vertices) out = std::min(out, level_of(v));
  return out;
}

int PrimitiveComponent::max_level() const {
  int out = -1;
  for (const Word& v : vertices) out = std::max(out, level_of(v));
  return out;
}

void validate_component(const PrimitiveComponent& g) {
  if (g.vertices.empty()) throw std::invalid_argument("component has no vertices");
  std::unordered_map<Word, int, WordHash> id;
  for (const Word& v : g.vertices) {
    if (!id.emplace(v, static_cast<int>(id.size())).second) {
      throw std::invalid_argument("duplicate vertex " + v.str());
    }
  }
  std::vector<int> parent(id.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&parent](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const NetworkEdge& e : g.edges) {
    if (!id.count(e.from) || !id.count(e.to)) {
      throw std::invalid_argument("edge endpoint outside the vertex set");
    }
    if (!appended_atom(e.from, e.to)) {
      throw std::invalid_argument("edge " + e.from.str() + " -> " + e.to.str() +
                                  " does not add one atom");
    }
    parent[find(id[e.from])] = find(id[e.to]);
  }
  for (const auto& [v, d] : in_degrees(g)) {
    if (d > 1) throw ReverseForkError("reverse fork at " + v.str());
  }
  if (g.edges.size() + 1 != g.vertices.size()) {
    throw std::invalid_argument("component is not a tree");
  }
  for (const Word& v : g.vertices) {
    if (find(id[v]) != find(0)) throw std::invalid_argument("component is not connected");
  }
}

double log_primitive_component_prob(const ModelParams& params, const PrimitiveComponent& g) {
  validate_component(g);
  const int a = params.alphabet.size();
  // Each vertex of level n carries prod_{j=1}^n (1 - acc(j))^{2|A|}.
  const auto vertex_factor = [&](int n) {
    double out = 0.0;
    for (int j = 1; j <= n; ++j) {
      out += 2.0 * a * std::log1p(-acceptance(params, Kind::Anabolic, j));
    }
    return out;
  };
  double out = 0.0;
  for (const Word& v : g.vertices) out += vertex_factor(level_of(v));
  // Supplementary vertices: one per level 1..n_min - 1 below the root.
  for (int k = 1; k < g.min_level(); ++k) out += vertex_factor(k);
  for (const NetworkEdge& e : g.edges) {
    const double acc = acceptance(params, Kind::Anabolic, level_of(e.from));
    out += std::log(acc) - std::log1p(-acc);
  }
  return out;
}

double primitive_component_prob(const ModelParams& params, const PrimitiveComponent& g) {
  return std::exp(log_primitive_component_prob(params, g));
}

namespace {

// A path search state: a word and the offset of the source inside it.
struct State {
  Word word;
  int offset;
  friend bool operator==(const State&, const State&) = default;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    return WordHash{}(s.word) * 31u + static_cast<std::size_t>(s.offset);
  }
};

}  // namespace

std::optional<TwoPaths> find_two_paths(const std::vector<NetworkEdge>& edges,
                                       PathIdentity identity) {
  std::unordered_map<Word, std::vector<std::pair<Word, int>>, WordHash> adj;
  for (const NetworkEdge& e : edges) {
    const bool prepend = !(e.to.prefix(e.from.length()) == e.from);
    adj[e.from].push_back({e.to, prepend ? 1 : 0});
  }
  for (auto& [v, out] : adj) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  const bool embedded = identity == PathIdentity::Embedded;
  for (const auto& entry : adj) {
    const State source{entry.first, 0};
    std::unordered_map<State, State, StateHash> parent;
    std::vector<State> stack{source};
    parent.emplace(source, source);
    const auto path_to = [&](State v) {
      std::vector<Word> path{v.word};
      while (!(v == source)) {
        v = parent.at(v);
        path.push_back(v.word);
      }
      std::reverse(path.begin(), path.end());
      return path;
    };
    while (!stack.empty()) {
      const State u = stack.back();
      stack.pop_back();
      const auto it = adj.find(u.word);
      if (it == adj.end()) continue;
      for (const auto& [to, step] : it->second) {
        const State v{to, embedded ? u.offset + step : 0};
        const auto seen = parent.find(v);
        if (seen == parent.end()) {
          parent.emplace(v, u);
          stack.push_back(v);
        } else if (!(seen->second == u)) {
          TwoPaths out;
          out.first = path_to(v);
          out.second = path_to(u);
          out.second.push_back(v.word);
          return out;
        }
      }
    }
  }
  return std::nullopt;
}

bool no_two_paths(const AnabolicNetwork& network, PathIdentity identity) {
  return !find_two_paths(network.primitive_edges(), identity);
}

SeriesProbability frag_product_prob(const ModelParams& params, int m) {
  params.validate();
  if (m < 1) throw std::out_of_range("fragment level must be at least 1");
  const int a = params.alphabet.size();
  SeriesProbability out;
  if (params.z * a >= 1.0) {
    out.diverges = true;
    out.log_prob = -std::numeric_limits<double>::infinity();
    return out;
  }
  const double ratio = a * params.z;
  double sum = 0.0;
  for (int n = 0; n < 100000; ++n) {
    double per_level = 0.0;
    for (int l = 1; l <= m; ++l) {
      per_level += std::log1p(-acceptance(params, Kind::Catabolic, n + l + 1));
    }
    const double term = 2.0 * std::pow(static_cast<double>(a), n + 1) * per_level;
    sum += term;
    out.terms = n + 1;
    const double tail = std::abs(term) * ratio / (1.0 - ratio);
    if (tail <= 1e-12 * std::abs(sum) || tail == 0.0) break;
  }
  out.log_prob = sum;
  out.prob = std::exp(sum);
  return out;
}

double frag_product_log_asymptotic(const ModelParams& params, int m) {
  const double a = params.alphabet.size();
  const double z = params.z;
  const int s = params.exponent_shift;
  return -2.0 * params.q * a * std::pow(z, 2 + s) * (1.0 - std::pow(z, m)) /
         ((1.0 - z) * (1.0 - a * z));
}

const char* to_string(CatabolicPhase phase) {
  return phase == CatabolicPhase::Finite ? "finite" : "fragmentation";
}

LevelShiftReport level_shift_analysis(const ModelParams& params, int m, int chain_length) {
  params.validate();
  const int a = params.alphabet.size();
  const double z = params.z;
  if (!(z * a > 1.0 && z < 1.0)) {
    throw PhaseError("level shifts need 1/|A| < z < 1 (fragmentation phase)");
  }
  if (m < 0) throw std::out_of_range("level must be non-negative");
  const double q = params.q;
  const double log_az = std::log(a * z);
  const double eps = 1.0 - z;
  LevelShiftReport out;
  out.n_frag = std::log(1.0 / (2.0 * q * a)) / log_az;
  out.n_max_cutoff = std::log(1.0 / q) / eps;
  out.j_dis = log_az / eps;
  out.g_zero_level = std::log(1.0 / (q * std::pow(z, m + params.exponent_shift - 1))) / log_az;

  // g(n) = log(|A|^{n+1} acc(n + m + 1) prod_{n' < n} (1 - acc(n' + m + 1))^{|A|^{n'+1}}).
  double log_prod = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < 2000; ++n) {
    const double acc = acceptance(params, Kind::Catabolic, n + m + 1);
    const double g = (n + 1) * std::log(a) + std::log(acc) + log_prod;
    if (!std::isfinite(g)) break;
    out.g.push_back(g);
    if (g > best) {
      best = g;
      out.g_argmax = n;
    } else if (g < best - 50.0) {
      break;
    }
    log_prod += std::pow(static_cast<double>(a), n + 1) * std::log1p(-acc);
  }

  out.shift_chain.push_back(m);
  for (int j = 1; j < chain_length; ++j) {
    const double prev = out.shift_chain.back();
    out.shift_chain.push_back(std::log(1.0 / q) / log_az + (1.0 + eps / log_az) * prev);
  }
  return out;
}

CatabolicNetworkReport catabolic_network_report(const ModelParams& params, int m) {
  CatabolicNetworkReport out;
  const int a = params.alphabet.size();
  if (params.z * a >= 1.0) {
    out.phase = CatabolicPhase::Fragmentation;
    if (params.z * a > 1.0 && params.z < 1.0) out.shifts = level_shift_analysis(params, m);
  } else {
    out.phase = CatabolicPhase::Finite;
    out.isolated_slope = isolated_catabolic_slope(params);
  }
  return out;
}

double isolated_catabolic_slope(const ModelParams& params) {
  if (params.z * params.alphabet.size() >= 1.0) {
    throw PhaseError("isolated catabolic words grow only in the finite phase z < 1/|A|");
  }
  return psi(PhaseSpec{Kind::Catabolic, params, 1.0}, params.z);
}

std::vector<std::uint64_t> isolated_catabolic_counts(const ModelParams& params,
                                                     const ReactionOracle& oracle, int n_max) {
  params.validate();
  const int a = params.alphabet.size();
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  if (n_max >= 64 || n_max + 1 > params.alphabet.max_atoms()) {
    throw CapacityError("n_max " + std::to_string(n_max) + " exceeds word capacity");
  }
  const std::uint64_t budget = NetworkOptions{}.vertex_budget;
  const std::uint64_t total = total_words(a, n_max);
  if (total > budget) throw NetworkBudgetError(budget, total);

  // active[l][idx]: bit c-1 set when cut c of the word is a decomposition,
  // derived from any subword straddling it.
  std::vector<std::vector<std::uint64_t>> active(n_max + 1);
  std::vector<std::vector<char>> product(n_max + 1);
  std::vector<Word> prev_words;
  for (int l = 0; l <= n_max; ++l) {
    const std::uint64_t size = ipow(a, l + 1);
    const std::uint64_t top = ipow(a, l);
    std::vector<Word> words(size);
    active[l].assign(size, 0);
    product[l].assign(size, 0);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      const int last = static_cast<int>(idx % a);
      if (l == 0) {
        words[idx] = Word::single(last, params.alphabet);
        continue;
      }
      const std::uint64_t pre = idx / a;
      words[idx] = prev_words[pre].append(last);
      std::uint64_t mask = active[l - 1][pre] | (active[l - 1][idx % top] << 1);
      for (int cut = 1; cut <= l; ++cut) {
        if (oracle.omega(ReactionId::catabolic(words[idx], cut))) mask |= 1ULL << (cut - 1);
      }
      active[l][idx] = mask;
    }
    prev_words = std::move(words);
  }
  for (int l = 1; l <= n_max; ++l) {
    for (std::uint64_t idx = 0; idx < active[l].size(); ++idx) {
      std::uint64_t mask = active[l][idx];
      while (mask) {
        const int cut = std::countr_zero(mask) + 1;
        mask &= mask - 1;
        const std::uint64_t tail = ipow(a, l + 1 - cut);
        product[cut - 1][idx / tail] = 1;
        product[l - cut][idx % tail] = 1;
      }
    }
  }
  std::vector<std::uint64_t> out(n_max + 1, 0);
  for (int l = 0; l <= n_max; ++l) {
    for (std::uint64_t idx = 0; idx < active[l].size(); ++idx) {
      out[l] += active[l][idx] == 0 && !product[l][idx];
    }
  }
  return out;
}

}  // namespace rulenet
