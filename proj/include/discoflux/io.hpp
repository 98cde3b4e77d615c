#pragma once

// Output files: CSV with # comment headers, minimal SVG line plots, JSON
// reports, all written atomically. Run metadata goes to a .meta.json sidecar
// so data files stay byte-identical between runs.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace discoflux {

/// %.17g
std::string format_double(double v);

/// Writes to a temporary file in the same directory and renames it over path.
/// Creates missing parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

struct CsvTable {
  std::vector<std::string> comments;  ///< emitted as "# ..." lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

struct SvgSeries {
  std::string name;
  std::vector<double> y;
};

/// Self-contained line plot of several series over a shared x axis.
std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::vector<double>& x,
                          const std::vector<SvgSeries>& series, bool log_x = false);

/// Writes path + ".meta.json" with the command line, timestamp and extras.
void write_meta_sidecar(const std::string& path, const std::vector<std::string>& argv,
                        const nlohmann::ordered_json& extra = nlohmann::ordered_json::object());

/// $DISCOFLUX_OUT when set and non-empty, otherwise configured.
std::string output_dir(const std::string& configured);

}  // namespace discoflux
