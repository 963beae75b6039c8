#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kinex/fit.hpp"
#include "kinex/metrics.hpp"
#include "kinex/simulation.hpp"
#include "kinex/sweep.hpp"

namespace kinex::io {

inline constexpr const char* kToolName = "kinex";
inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest decimal that round-trips, independent of the C locale.
std::string format_number(double v);
std::string format_number(std::uint64_t v);

/// Comma-separated table with a header row. Fields are never quoted, since
/// nothing this tool writes contains a comma.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header, if present.
  std::optional<std::size_t> column(std::string_view name) const;
  std::string to_string() const;
};

/// Throws ParseError on ragged rows or a missing header.
CsvTable parse_csv(std::string_view text);

/// Column names of sweep.csv, in order.
extern const std::vector<std::string> kSweepColumns;
/// Column names of timeseries.csv, in order.
extern const std::vector<std::string> kTimeseriesColumns;

std::string timeseries_csv(const SimRecord& record);
std::string snapshot_csv(const Snapshot& snapshot);
nlohmann::ordered_json model_json(const ModelSpec& model);
nlohmann::ordered_json config_json(const SimConfig& config);
std::string summary_json(const SimRecord& record);
std::string sweep_csv(std::span<const SweepRow> rows);
/// Inverse of sweep_csv. Throws ParseError naming the row and column of any
/// malformed cell.
std::vector<SweepRow> parse_sweep_csv(const CsvTable& table);
/// Strict numeric cell parse; throws ParseError mentioning `where`.
double parse_number(std::string_view cell, const std::string& where);
std::string aggregate_csv(std::span<const PointSummary> summaries);
nlohmann::ordered_json fit_json(const FitResult& fit);
std::string histogram_csv(const Histogram& h);

/// Validated grid from a JSON document. Unknown keys, misplaced parameters and
/// wrongly typed entries throw ParseError whose message starts with the JSON
/// path of the offending element (e.g. "lambda[0]").
SweepGrid parse_grid_config(std::string_view text);
std::string serialize_grid(const SweepGrid& grid);

std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Collects output files and writes them, plus manifest.json, into one
/// directory. Nothing touches the directory before commit().
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(std::string name, std::string content);

  /// Creates the directory, writes every file atomically, then the manifest.
  /// `echo` is embedded verbatim as the manifest's "config".
  void commit(const nlohmann::ordered_json& echo, std::string_view started_at) const;

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

/// UTC wall-clock time, ISO 8601 with seconds.
std::string utc_timestamp();

}  // namespace kinex::io
