#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rulenet/gw.hpp"
#include "rulenet/network.hpp"
#include "rulenet/stats.hpp"
#include "rulenet/theory.hpp"

namespace rulenet::io {

// Version of every table and JSON document written here. Readers reject any
// other value.
inline constexpr int kSchemaVersion = 1;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A CSV table. On disk the first line is a metadata comment
//   # schema_version=1 table=<name> config_hash=<hex>
// followed by the column header and one line per row. Floats use 17
// significant digits; absent values are empty cells.
struct Table {
  std::string name;
  std::string config_hash;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  // Index of a column; throws SchemaError when it is missing.
  std::size_t column(const std::string& name) const;
  // The cell as a number; empty cells read as NaN.
  double number(std::size_t row, const std::string& column_name) const;
};

std::string format_number(double v);
std::string format_optional(const std::optional<int>& v);
double parse_number(const std::string& cell);

void write_table(std::ostream& out, const Table& table);
void write_table_file(const std::string& path, const Table& table);
// Throws SchemaError on a missing or unknown version, a table name other than
// `expected_name` (when given) or a row whose width differs from the header.
Table read_table(std::istream& in, const std::string& expected_name = {});
Table read_table_file(const std::string& path, const std::string& expected_name = {});

void write_json_file(const std::string& path, const nlohmann::json& doc);
// Throws SchemaError on an unknown schema_version.
nlohmann::json read_json_file(const std::string& path);
// NaN and infinities become null.
nlohmann::json json_number(double v);

// Ensemble outputs.
Table levels_table(const StatsReport& report, const std::string& hash);
Table heights_table(const StatsReport& report, const std::string& hash);
nlohmann::json summary_json(const StatsReport& report, const std::string& hash);

// One row per fugacity of a transition scan, in ascending z.
Table scan_table(const TransitionScan& scan, const std::string& hash);

// Theory outputs over a fugacity grid and per level.
Table phases_table(const PhaseSpec& spec, const std::vector<double>& z_grid,
                   const std::string& hash);
nlohmann::json roots_json(const PhaseSpec& spec, const std::string& hash);
Table predictions_table(Kind kind, const ModelParams& params, int n_max, const std::string& hash);

// Galton-Watson outputs; Monte-Carlo columns use `runs` trajectories from one root.
Table extinction_table(const GwSchedule& schedule, int n_max, int runs, std::uint64_t seed,
                       const std::string& hash);
Table logsize_table(const GwSchedule& schedule, int n_max, const std::string& hash);

// Mean clean-component counts over the given realizations, with the
// closed-form expectation per level.
Table components_table(const ModelParams& params, const std::vector<ComponentCounts>& runs,
                       const std::string& hash);
nlohmann::json catabolic_report_json(const ModelParams& params, int m,
                                     const std::optional<std::vector<double>>& isolated_means,
                                     const std::string& hash);

// Joins an empirical table (levels or predictions) with a predictions table:
// one row per prediction label and level. Throws SchemaError when the levels
// differ or a table has the wrong kind.
Table ratios_table(const Table& empirical, const Table& predictions);
// Summary statistics of the same join.
std::vector<Comparison> join_comparisons(const Table& empirical, const Table& predictions);

}  // namespace rulenet::io
