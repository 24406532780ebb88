// Command-line front end: runs ensembles, theory evaluations, Galton-Watson
// comparisons and network analyses, and writes versioned CSV/JSON tables.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error,
// 3 memory budget exceeded, 4 word capacity exceeded, 5 schema mismatch.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "rulenet/config.hpp"
#include "rulenet/io.hpp"

namespace fs = std::filesystem;
using namespace rulenet;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kBudget = 3, kCapacity = 4, kSchema = 5 };

struct Paths {
  std::string out = ".";
  std::string empirical;
  std::string predictions;
};

Kind parse_kind(const std::string& text) {
  if (text == "ana" || text == "anabolic") return Kind::Anabolic;
  if (text == "cata" || text == "catabolic") return Kind::Catabolic;
  throw ConfigError("kind must be ana or cata, got '" + text + "'");
}

std::string out_path(const Paths& paths, const char* file) {
  return (fs::path(paths.out) / file).string();
}

EnsembleConfig ensemble_config(const RunConfig& rc, Kind kind) {
  EnsembleConfig c;
  c.params = rc.model_params();
  c.kind = kind;
  c.sample_size = rc.samples;
  c.n_max = rc.n_max;
  c.master_seed = rc.seed;
  c.threads = rc.resolved_threads();
  c.vertex_budget = rc.budget;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

void run_tree(const RunConfig& rc, Kind kind, const Paths& paths) {
  const StatsReport report = run_ensemble(ensemble_config(rc, kind));
  const std::string hash = rc.hash();
  io::write_table_file(out_path(paths, "levels.csv"), io::levels_table(report, hash));
  io::write_table_file(out_path(paths, "heights.csv"), io::heights_table(report, hash));
  io::write_json_file(out_path(paths, "summary.json"), io::summary_json(report, hash));
}

void run_scan(const RunConfig& rc, Kind kind, const Paths& paths) {
  if (rc.z_grid.empty()) throw ConfigError("scan needs a z grid");
  RunConfig base = rc;
  if (base.model == "I") {
    base.model = "II";
    base.z = 0.5;  // placeholder; every grid point replaces it
  }
  const TransitionScan scan =
      model2_transition_scan(ensemble_config(base, kind), parse_z_grid(rc.z_grid));
  const std::string hash = rc.hash();
  io::write_table_file(out_path(paths, "scan.csv"), io::scan_table(scan, hash));
  nlohmann::json doc = {{"schema_version", io::kSchemaVersion},
                        {"table", "scan_bracket"},
                        {"config_hash", hash}};
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  doc["exploding_below"] = opt(scan.exploding_below);
  doc["finite_above"] = opt(scan.finite_above);
  doc["midpoint"] = opt(scan.midpoint());
  io::write_json_file(out_path(paths, "scan.json"), doc);
}

void run_theory(const RunConfig& rc, Kind kind, const Paths& paths) {
  const ModelParams params = rc.model_params();
  const PhaseSpec spec{kind, params, 1.0};
  const std::string hash = rc.hash();
  const std::vector<double> grid = parse_z_grid(rc.z_grid.empty() ? "0.01:0.99:0.01" : rc.z_grid);
  io::write_table_file(out_path(paths, "phases.csv"), io::phases_table(spec, grid, hash));
  io::write_json_file(out_path(paths, "roots.json"), io::roots_json(spec, hash));
  io::write_table_file(out_path(paths, "predictions.csv"),
                       io::predictions_table(kind, params, rc.n_max, hash));
}

void run_gw(const RunConfig& rc, Kind kind, const Paths& paths) {
  const GwSchedule schedule(kind, rc.model_params(), std::max(rc.n_max, 1) + 1);
  const std::string hash = rc.hash();
  io::write_table_file(out_path(paths, "extinction.csv"),
                       io::extinction_table(schedule, rc.n_max, rc.samples, rc.seed, hash));
  io::write_table_file(out_path(paths, "logsize.csv"),
                       io::logsize_table(schedule, rc.n_max, hash));
}

void run_network(const RunConfig& rc, const Paths& paths) {
  const ModelParams params = rc.model_params(FoodDefault::AllAtoms);
  const std::string hash = rc.hash();
  std::vector<ComponentCounts> runs(rc.samples);
  for (int i = 0; i < rc.samples; ++i) {
    runs[i] = anabolic_component_counts(params, derive_seed(rc.seed, i), rc.n_max);
  }
  io::write_table_file(out_path(paths, "components.csv"), io::components_table(params, runs, hash));

  std::optional<std::vector<double>> isolated;
  if (params.z * params.alphabet.size() < 1.0) {
    std::vector<double> sums(rc.n_max + 1, 0.0);
    for (int i = 0; i < rc.samples; ++i) {
      const HashOracle oracle(params, derive_seed(rc.seed, i));
      const auto counts = isolated_catabolic_counts(params, oracle, rc.n_max);
      for (int n = 0; n <= rc.n_max; ++n) sums[n] += static_cast<double>(counts[n]);
    }
    for (double& s : sums) s /= rc.samples;
    isolated = std::move(sums);
  }
  io::write_json_file(out_path(paths, "catabolic_report.json"),
                      io::catabolic_report_json(params, rc.chain_level, isolated, hash));
}

void run_compare(const Paths& paths) {
  const io::Table empirical = io::read_table_file(paths.empirical);
  const io::Table predictions = io::read_table_file(paths.predictions, "predictions");
  io::write_table_file(out_path(paths, "ratios.csv"), io::ratios_table(empirical, predictions));
  nlohmann::json doc = {{"schema_version", io::kSchemaVersion},
                        {"table", "comparison"},
                        {"config_hash", empirical.config_hash},
                        {"predictions_config_hash", predictions.config_hash}};
  for (const Comparison& c : io::join_comparisons(empirical, predictions)) {
    doc["curves"][c.label] = {{"peak_offset", c.peak_offset},
                              {"best_shift", c.best_shift},
                              {"max_abs_log_ratio", io::json_number(c.max_abs_log_ratio)},
                              {"mean_abs_log_ratio", io::json_number(c.mean_abs_log_ratio)},
                              {"compared_levels", c.compared_levels}};
  }
  io::write_json_file(out_path(paths, "comparison.json"), doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random rule networks of linear polymers: ensembles, theory and networks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a file of key = value lines");

  RunConfig rc;
  Paths paths;
  std::string kind_text = "ana";
  app.add_option("--model", rc.model, "Model variant, I or II")->capture_default_str();
  app.add_option("--A", rc.alphabet, "Alphabet size |A|")->capture_default_str();
  app.add_option("--foods", rc.foods, "levels:0,1 or words:a,ab");
  app.add_option("--p", rc.p, "Anabolic rate")->capture_default_str();
  app.add_option("--q", rc.q, "Catabolic rate")->capture_default_str();
  app.add_option("--z", rc.z, "Fugacity")->capture_default_str();
  app.add_option("--shift", rc.exponent_shift, "Exponent shift of the acceptance law")
      ->capture_default_str();
  app.add_option("--zgrid", rc.z_grid, "Fugacity grid start:stop:step");
  app.add_option("--samples", rc.samples, "Runs per ensemble")->capture_default_str();
  app.add_option("--nmax", rc.n_max, "Highest level")->capture_default_str();
  app.add_option("--seed", rc.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", rc.threads, "Worker threads (RULENET_THREADS when unset)");
  app.add_option("--budget", rc.budget, "Vertex budget per tree")->capture_default_str();
  app.add_option("--chain-level", rc.chain_level, "Start level of the level-shift chain")
      ->capture_default_str();
  app.add_option("--out", paths.out, "Output directory")->capture_default_str();

  CLI::App* tree = app.add_subcommand("tree", "Ensemble of composition or fragmentation trees");
  tree->add_option("kind", kind_text, "ana or cata")->required();
  CLI::App* scan = app.add_subcommand("scan", "Model II transition scan over --zgrid");
  scan->add_option("kind", kind_text, "ana or cata");
  CLI::App* theory = app.add_subcommand("theory", "Phase functions, roots and level predictions");
  theory->add_option("kind", kind_text, "ana or cata");
  CLI::App* gw = app.add_subcommand("gw", "Galton-Watson extinction and log-size tables");
  gw->add_option("kind", kind_text, "ana or cata");
  CLI::App* network = app.add_subcommand("network", "Anabolic components and catabolic report");
  CLI::App* compare = app.add_subcommand("compare", "Ratios of empirical against predicted means");
  compare->add_option("empirical", paths.empirical, "levels.csv or predictions.csv")->required();
  compare->add_option("predictions", paths.predictions, "predictions.csv")->required();
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    fs::create_directories(paths.out);
    const Kind kind = parse_kind(kind_text);
    if (*tree) run_tree(rc, kind, paths);
    if (*scan) run_scan(rc, kind, paths);
    if (*theory) run_theory(rc, kind, paths);
    if (*gw) run_gw(rc, kind, paths);
    if (*network) run_network(rc, paths);
    if (*compare) run_compare(paths);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const io::SchemaError& e) {
    std::cerr << "schema mismatch: " << e.what() << '\n';
    return kSchema;
  } catch (const ShapeMismatchError& e) {
    std::cerr << "schema mismatch: " << e.what() << '\n';
    return kSchema;
  } catch (const EnsembleBudgetError& e) {
    std::cerr << "memory budget: " << e.what() << '\n';
    return kBudget;
  } catch (const MemoryBudgetError& e) {
    std::cerr << "memory budget: " << e.what() << '\n';
    return kBudget;
  } catch (const NetworkBudgetError& e) {
    std::cerr << "memory budget: " << e.what() << '\n';
    return kBudget;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return kCapacity;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
