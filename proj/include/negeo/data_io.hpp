#pragma once

#include "negeo/panel.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Tabular text formats (comma separated, '#' comment lines, explicit header):
//
//   panel       region,year,w,Y[,H]        one row per region and year
//   distances   region_i,region_j,d        each unordered pair once or twice
//   transport   region_i,region_j,year,T   same, per year
//
// Numbers are parsed and printed locale-independently; output uses the
// shortest representation that round-trips.
namespace negeo::io {

/// Reads and validates a panel. Regions are ordered by first appearance in
/// the panel file. Rows with nonpositive values are kept (see flagged_rows).
/// Throws IoError (unreadable), ValidationError (gaps, asymmetry, unknown
/// region) or UsageError (malformed header).
Panel load_panel(const std::filesystem::path& panel_path,
                 const std::filesystem::path& distances_path,
                 const std::optional<std::filesystem::path>& transport_path = std::nullopt);

/// Reads a distance file (and optionally transport file) on its own. Region
/// order is first appearance in the distance file. A region with no pairs can
/// be declared with a zero self-distance row "r,r,0".
Geography load_geography(const std::filesystem::path& distances_path,
                         const std::optional<std::filesystem::path>& transport_path,
                         std::vector<std::string>& region_ids);

/// Rows holding a nonpositive or non-finite value, as "region@year".
std::vector<std::string> flagged_rows(const Panel& panel);

/// Writes the panel (and its geography) at full precision. Each file is
/// written to a temporary and renamed into place.
void write_panel(const Panel& panel, const std::filesystem::path& panel_path,
                 const std::filesystem::path& distances_path,
                 const std::optional<std::filesystem::path>& transport_path = std::nullopt);

/// Write-to-temp then rename. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_double(double v);
/// Locale-independent strict parse; accepts the forms format_double emits.
double parse_double(std::string_view text);

}  // namespace negeo::io
