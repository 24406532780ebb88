#include "rulenet/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace rulenet::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

// Parses "# schema_version=1 table=levels config_hash=..." into its fields.
void parse_metadata(const std::string& line, Table& table) {
  if (line.rfind("#", 0) != 0) throw SchemaError("missing schema_version metadata line");
  std::istringstream in(line.substr(1));
  std::string field;
  std::optional<int> version;
  while (in >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "schema_version") {
      try {
        version = std::stoi(value);
      } catch (const std::exception&) {
        throw SchemaError("unreadable schema_version '" + value + "'");
      }
    } else if (key == "table") {
      table.name = value;
    } else if (key == "config_hash") {
      table.config_hash = value;
    }
  }
  if (!version) throw SchemaError("missing schema_version");
  if (*version != kSchemaVersion) {
    throw SchemaError("unknown schema_version " + std::to_string(*version));
  }
}

std::string format_count(std::uint64_t v) { return std::to_string(v); }

Table make_table(std::string name, const std::string& hash, std::vector<std::string> columns) {
  Table t;
  t.name = std::move(name);
  t.config_hash = hash;
  t.columns = std::move(columns);
  return t;
}

nlohmann::json optional_json(const std::optional<int>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? json_number(*v) : nlohmann::json(nullptr);
}

nlohmann::json header_json(const std::string& name, const std::string& hash) {
  return {{"schema_version", kSchemaVersion}, {"table", name}, {"config_hash", hash}};
}

nlohmann::json params_json(const ModelParams& params) {
  std::vector<std::string> foods;
  for (const Word& f : params.foodset.foods()) foods.push_back(f.str());
  return {{"alphabet", params.alphabet.size()},
          {"foods", foods},
          {"p", params.p},
          {"q", params.q},
          {"z", params.z},
          {"variant", to_string(params.variant)},
          {"exponent_shift", params.exponent_shift}};
}

std::vector<double> column_values(const Table& t, const std::string& name) {
  std::vector<double> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) out.push_back(t.number(r, name));
  return out;
}

void require_levels(const Table& t) {
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.number(r, "level") != static_cast<double>(r)) {
      throw SchemaError("table " + t.name + " does not list levels 0, 1, ... in order");
    }
  }
}

}  // namespace

std::size_t Table::column(const std::string& column_name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == column_name) return i;
  }
  throw SchemaError("table " + name + " has no column '" + column_name + "'");
}

double Table::number(std::size_t row, const std::string& column_name) const {
  return parse_number(rows.at(row).at(column(column_name)));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}

double parse_number(const std::string& cell) {
  if (cell.empty() || cell == "nan") return kNaN;
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw SchemaError("non-numeric cell '" + cell + "'");
  }
  if (used != cell.size()) throw SchemaError("non-numeric cell '" + cell + "'");
  return v;
}

void write_table(std::ostream& out, const Table& table) {
  out << "# schema_version=" << kSchemaVersion << " table=" << table.name
      << " config_hash=" << table.config_hash << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void write_table_file(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_table(out, table);
  if (!out) throw std::runtime_error("write failed for " + path);
}

Table read_table(std::istream& in, const std::string& expected_name) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty table");
  parse_metadata(line, table);
  if (!expected_name.empty() && table.name != expected_name) {
    throw SchemaError("expected table " + expected_name + ", found '" + table.name + "'");
  }
  if (!std::getline(in, line)) throw SchemaError("table " + table.name + " has no header");
  table.columns = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> row = split_csv_line(line);
    if (row.size() != table.columns.size()) {
      throw SchemaError("table " + table.name + " has a row of " + std::to_string(row.size()) +
                        " cells under " + std::to_string(table.columns.size()) + " columns");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table read_table_file(const std::string& path, const std::string& expected_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  return read_table(in, expected_name);
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  if (!doc.contains("schema_version") || doc["schema_version"] != kSchemaVersion) {
    throw SchemaError("unknown or missing schema_version in " + path);
  }
  return doc;
}

nlohmann::json json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

Table levels_table(const StatsReport& report, const std::string& hash) {
  Table t = make_table("levels", hash,
                       {"level", "mean_V", "mean_prim", "mean_logV", "surviving_runs", "log_mean_V",
                        "sd_V", "sd_prim", "log_mean_V_surviving", "extinction_cdf"});
  for (std::size_t n = 0; n < report.mean_v.size(); ++n) {
    t.rows.push_back({std::to_string(n), format_number(report.mean_v[n]),
                      format_number(report.mean_prim[n]), format_number(report.mean_log_v[n]),
                      std::to_string(report.surviving_runs[n]), format_number(report.log_mean_v[n]),
                      format_number(report.sd_v[n]), format_number(report.sd_prim[n]),
                      format_number(report.log_mean_v_surviving[n]),
                      format_number(report.extinction_cdf[n])});
  }
  return t;
}

Table heights_table(const StatsReport& report, const std::string& hash) {
  Table t = make_table("heights", hash, {"height", "count", "censored"});
  for (const HeightBin& b : report.heights) {
    t.rows.push_back({std::to_string(b.height), format_count(b.count), b.censored ? "1" : "0"});
  }
  return t;
}

nlohmann::json summary_json(const StatsReport& report, const std::string& hash) {
  nlohmann::json doc = header_json("summary", hash);
  const EnsembleConfig& c = report.config;
  double height_sum = 0.0;
  for (const HeightBin& b : report.heights) height_sum += b.height * static_cast<double>(b.count);
  nlohmann::json cdf = nlohmann::json::array();
  for (double v : report.extinction_cdf) cdf.push_back(json_number(v));
  doc["kind"] = to_string(c.kind);
  doc["params"] = params_json(c.params);
  doc["sample_size"] = c.sample_size;
  doc["n_max"] = c.n_max;
  doc["master_seed"] = c.master_seed;
  doc["n0"] = optional_json(report.n0);
  doc["n0p"] = optional_json(report.n0p);
  doc["m0"] = optional_json(report.m0);
  doc["m0p"] = optional_json(report.m0p);
  doc["censored"] = report.censored;
  doc["mean_height"] = json_number(height_sum / c.sample_size);
  doc["extinction_cdf"] = cdf;
  doc["jensen_violations"] = jensen_violations(report);
  return doc;
}

Table scan_table(const TransitionScan& scan, const std::string& hash) {
  Table t = make_table("scan", hash,
                       {"z", "outcome", "runs", "extinct", "censored", "budget_exceeded"});
  for (const ScanPoint& p : scan.points) {
    t.rows.push_back({format_number(p.z), to_string(p.outcome), std::to_string(p.runs),
                      std::to_string(p.extinct), std::to_string(p.censored),
                      std::to_string(p.budget_exceeded)});
  }
  return t;
}

Table phases_table(const PhaseSpec& spec, const std::vector<double>& z_grid,
                   const std::string& hash) {
  Table t = make_table("phases", hash,
                       {"z", "psi", "phi", "dphi", "phase", "boundary", "n0", "n0p", "m0", "m0p",
                        "empty_network_prob", "empty_network_diverges"});
  for (double z : z_grid) {
    if (!(z > 0.0 && z < 1.0)) throw std::invalid_argument("phase grid points must lie in (0,1)");
    const PhaseLabel label = classify_phase(spec, z);
    const CharacteristicLevels levels = characteristic_levels(spec, z);
    const SeriesProbability empty = empty_network_prob(spec.kind, spec.params.with_z(z));
    t.rows.push_back({format_number(z), format_number(psi(spec, z)), format_number(phi(spec, z)),
                      format_number(dphi(spec, z)), to_string(label.phase),
                      label.boundary ? "1" : "0", format_optional(levels.n0),
                      format_optional(levels.n0p), format_optional(levels.m0),
                      format_optional(levels.m0p),
                      empty.diverges ? std::string() : format_number(empty.prob),
                      empty.diverges ? "1" : "0"});
  }
  return t;
}

nlohmann::json roots_json(const PhaseSpec& spec, const std::string& hash) {
  const PhaseRoots roots = phase_roots(spec);
  nlohmann::json doc = header_json("roots", hash);
  doc["kind"] = to_string(spec.kind);
  doc["params"] = params_json(spec.params);
  doc["weight"] = spec.weight;
  doc["y_phi"] = optional_json(roots.y_phi);
  doc["zp_phi"] = optional_json(roots.zp_phi);
  doc["z_phi"] = optional_json(roots.z_phi);
  doc["z_star"] = optional_json(roots.z_star);
  doc["phi_max"] = json_number(roots.phi_max);
  doc["phase_a_empty"] = roots.phase_a_empty;
  return doc;
}

Table predictions_table(Kind kind, const ModelParams& params, int n_max, const std::string& hash) {
  const TheoryCurves th = theory_curves(kind, params, n_max);
  Table t = make_table("predictions", hash,
                       {"level", "plain", "k0", "k1", "prim", "log_k0", "log_prim"});
  for (int n = 0; n <= n_max; ++n) {
    t.rows.push_back({std::to_string(n), format_number(th.plain[n]), format_number(th.k0[n]),
                      th.k1.empty() ? std::string() : format_number(th.k1[n]),
                      format_number(th.prim[n]), format_number(std::log(th.k0[n])),
                      format_number(std::log(th.prim[n]))});
  }
  return t;
}

Table extinction_table(const GwSchedule& schedule, int n_max, int runs, std::uint64_t seed,
                       const std::string& hash) {
  if (runs < 1) throw std::invalid_argument("extinction table needs at least one run");
  std::vector<std::uint64_t> extinct(n_max + 1, 0);
  for (int r = 0; r < runs; ++r) {
    const GwTrajectory traj = simulate_gw(schedule, derive_seed(seed, r), n_max);
    for (int n = 0; n <= n_max; ++n) extinct[n] += traj.sizes[n] == 0;
  }
  Table t = make_table("extinction", hash,
                       {"n", "u0n", "lower", "upper", "regime", "monte_carlo", "stderr"});
  for (int n = 0; n <= n_max; ++n) {
    const double mc = static_cast<double>(extinct[n]) / runs;
    const double se = std::sqrt(mc * (1.0 - mc) / runs);
    if (n == 0) {
      t.rows.push_back({"0", format_number(0.0), "", "", "", format_number(mc), format_number(se)});
      continue;
    }
    const ExtinctionEstimate est = extinction_bounds(schedule, n);
    t.rows.push_back({std::to_string(n), format_number(est.u_exact), format_number(est.lower),
                      est.upper_applicable ? format_number(est.upper) : std::string(), est.regime,
                      format_number(mc), format_number(se)});
  }
  return t;
}

Table logsize_table(const GwSchedule& schedule, int n_max, const std::string& hash) {
  Table t = make_table("logsize", hash,
                       {"n", "expected_log", "log_expected", "relative_gap", "harmonic",
                        "survival"});
  for (int n = 1; n <= n_max; ++n) {
    const QuadratureResult el = expected_log_size(schedule, n, GwStart::Atoms);
    const QuadratureResult h = harmonic_log_size(schedule, n, GwStart::Atoms);
    const double le = log_mean_from_start(schedule, n, GwStart::Atoms);
    // Survival of the atom-started process: 1 - E[u^{Z_0}] with Z_0 ~ Bin(|A|, r0).
    const double u = extinction_prob(schedule, n);
    const double r0 = schedule.factor(0);
    const double survival = 1.0 - std::pow(1.0 - r0 + r0 * u, schedule.alphabet_size());
    t.rows.push_back({std::to_string(n), format_number(el.value), format_number(le),
                      format_number(std::abs(el.value - le) / std::abs(le)),
                      format_number(h.value), format_number(survival)});
  }
  return t;
}

Table components_table(const ModelParams& params, const std::vector<ComponentCounts>& runs,
                       const std::string& hash) {
  if (runs.empty()) throw std::invalid_argument("components table needs at least one run");
  const std::size_t levels = runs.front().isolated.size();
  Table t = make_table("components", hash,
                       {"level", "words", "isolated", "two_molecule", "open_flagged",
                        "isolated_closed_form", "two_molecule_closed_form"});
  const double a = params.alphabet.size();
  const double foods = params.foodset.size();
  for (std::size_t n = 0; n < levels; ++n) {
    double iso = 0.0;
    double two = 0.0;
    double open = 0.0;
    for (const ComponentCounts& c : runs) {
      iso += static_cast<double>(c.isolated[n]);
      two += static_cast<double>(c.two_molecule[n]);
      open += static_cast<double>(c.open_flagged[n]);
    }
    const double k = static_cast<double>(runs.size());
    const int level = static_cast<int>(n);
    const double iso_cf = std::pow(a, level + 1) * isolated_prob(params, level);
    // Each level n-1 word has |F| products X.F, doubled by the mirror orientation.
    const double two_cf =
        level == 0 ? 0.0 : 2.0 * foods * std::pow(a, level) * two_molecule_prob(params, level);
    t.rows.push_back({std::to_string(n), format_count(runs.front().words[n]),
                      format_number(iso / k), format_number(two / k), format_number(open / k),
                      format_number(iso_cf), format_number(two_cf)});
  }
  return t;
}

nlohmann::json catabolic_report_json(const ModelParams& params, int m,
                                     const std::optional<std::vector<double>>& isolated_means,
                                     const std::string& hash) {
  const CatabolicNetworkReport report = catabolic_network_report(params, m);
  nlohmann::json doc = header_json("catabolic_report", hash);
  doc["params"] = params_json(params);
  doc["phase"] = to_string(report.phase);
  doc["isolated_slope"] = optional_json(report.isolated_slope);
  if (report.shifts) {
    const LevelShiftReport& s = *report.shifts;
    nlohmann::json g = nlohmann::json::array();
    for (double v : s.g) g.push_back(json_number(v));
    doc["level_shifts"] = {{"start_level", m},
                           {"n_frag", json_number(s.n_frag)},
                           {"g_argmax", s.g_argmax},
                           {"g", g},
                           {"shift_chain", s.shift_chain},
                           {"n_max_cutoff", json_number(s.n_max_cutoff)},
                           {"j_dis", json_number(s.j_dis)},
                           {"g_zero_level", json_number(s.g_zero_level)}};
  } else {
    doc["level_shifts"] = nullptr;
  }
  if (isolated_means) {
    nlohmann::json means = nlohmann::json::array();
    for (double v : *isolated_means) means.push_back(json_number(v));
    doc["isolated_means"] = means;
  } else {
    doc["isolated_means"] = nullptr;
  }
  return doc;
}

std::vector<Comparison> join_comparisons(const Table& empirical, const Table& predictions) {
  if (predictions.name != "predictions") {
    throw SchemaError("expected a predictions table, found '" + predictions.name + "'");
  }
  if (empirical.name != "levels" && empirical.name != "predictions") {
    throw SchemaError("expected a levels or predictions table, found '" + empirical.name + "'");
  }
  require_levels(empirical);
  require_levels(predictions);
  if (empirical.rows.size() != predictions.rows.size()) {
    throw SchemaError("tables cover " + std::to_string(empirical.rows.size()) + " and " +
                      std::to_string(predictions.rows.size()) + " levels");
  }
  std::vector<Comparison> out;
  for (const char* label : {"plain", "k0", "k1"}) {
    const std::vector<double> pred = column_values(predictions, label);
    if (std::isnan(pred.front())) continue;  // k1 is absent for large alphabets
    // A predictions table compared with itself matches each curve to itself.
    const std::vector<double> emp =
        column_values(empirical, empirical.name == "levels" ? "mean_V" : label);
    out.push_back(compare_levels(label, emp, pred, empirical.name == "levels" ? 1.0 : 0.0));
  }
  return out;
}

Table ratios_table(const Table& empirical, const Table& predictions) {
  const std::vector<Comparison> cmps = join_comparisons(empirical, predictions);
  Table t = make_table("ratios", empirical.config_hash,
                       {"label", "level", "empirical", "predicted", "ratio", "log_ratio"});
  for (const Comparison& c : cmps) {
    for (const ComparisonRow& row : c.rows) {
      t.rows.push_back({c.label, std::to_string(row.level), format_number(row.empirical),
                        format_number(row.predicted), format_number(row.ratio),
                        format_number(row.log_ratio)});
    }
  }
  return t;
}

}  // namespace rulenet::io
