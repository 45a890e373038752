#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kacpoly/experiment.hpp"

namespace kacpoly {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Format { Csv, Json };
Format parse_format(std::string_view text);
std::string to_string(Format format);

/// Empty cells stand for absent values.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Index of a column; throws std::out_of_range.
  std::size_t column(std::string_view name) const;
};

/// Everything needed to reproduce a file, stored alongside its rows.
struct Envelope {
  std::string version = std::string(kVersion);
  std::string command;
  std::vector<std::pair<std::string, std::string>> flags;  // in invocation order
  std::optional<std::uint64_t> seed;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

struct Document {
  Envelope envelope;
  Table table;
};

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

std::string to_csv(const Document& doc);
nlohmann::json to_json(const Document& doc);
std::string render(const Document& doc, Format format);

/// Inverses of to_csv / to_json. Throws std::invalid_argument.
Document parse_csv(std::string_view text);
Document parse_json(std::string_view text);
/// Detects the format from the first non-blank character.
Document parse_document(std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// "-" writes to stdout.
void write_file(const std::string& path, std::string_view text);

/// Numeric value of a cell; nullopt for empty or text cells.
std::optional<double> cell_number(const Cell& cell);

Table estimates_table(const std::vector<EstimateRow>& rows);
Table moments_table(const std::vector<MomentRow>& rows);
nlohmann::json report_json(const Envelope& envelope, const ExperimentConfig& config,
                           const ExperimentResult& result, const std::vector<RowCheck>& checks,
                           const std::vector<RegionSummary>& summaries);

/// Writes estimates.csv, moments.csv, report.json and per-region plot data
/// (mean against ln n and against sqrt(ln n)) into `dir`.
void write_experiment(const std::filesystem::path& dir, const Envelope& envelope,
                      const ExperimentConfig& config, const ExperimentResult& result,
                      const std::vector<RowCheck>& checks,
                      const std::vector<RegionSummary>& summaries);

}  // namespace kacpoly
