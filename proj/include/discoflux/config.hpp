#pragma once

// Run configuration: line-based `key = value` with [section] headers and #
// comments. Parsing is strict: unknown sections or keys, duplicates and
// malformed values are errors carrying the line number.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "discoflux/grid.hpp"
#include "discoflux/states.hpp"

namespace discoflux {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line) : std::runtime_error(format(what, line)), line_(line) {}
  int line() const { return line_; }

 private:
  static std::string format(const std::string& what, int line) {
    return line > 0 ? "config line " + std::to_string(line) + ": " + what : "config: " + what;
  }
  int line_;
};

struct RunConfig {
  struct StateSection {
    // truncated_well, wall_removed, kink, phase_jump, samples_file, gaussian, ground_state
    std::string kind = "truncated_well";
    double x0 = 1.0;
    double fraction = 0.75;
    double dphi = 0.0;
    std::string profile = "ground_state";  ///< phase_jump base: ground_state or gaussian
    double k_left = 1.0, k_right = 1.0;
    double value_re = 1.0, value_im = 0.0;
    double momentum = 0.0;
    double center = 0.0, width = 0.1;
    std::string file;
  } state;
  struct GridSection {
    double a = -1.0, b = 1.0, mass = 1.0;
    int n_cells = 16384;
  } grid;
  struct TimeSection {
    double t_min = 1e-5, t_max = 1e-3;
    int n_points = 12;
    bool allow_long_times = false;
  } time;
  struct PotentialSection {
    std::string kind = "zero";
    double kappa = 0.0, height = 0.0, position = 0.0;
    std::string file;
  } potential;
  struct EvolveSection {
    std::string scheme = "spectral";  ///< spectral or crank_nicolson
    double dt = 0.0;
    int n_steps = 0;
    int record_every = 1;
  } evolve;
  struct OutputSection {
    std::string dir = "out";
    std::vector<std::string> formats{"csv", "json"};
  } output;

  std::string base_dir = ".";  ///< relative file paths resolve against this

  bool wants(std::string_view format) const;
};

RunConfig parse_config(std::string_view text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

BoxDomain make_domain(const RunConfig& config);
Grid1D make_grid(const RunConfig& config);
Potential make_potential(const RunConfig& config);
PiecewiseState make_state(const RunConfig& config);

/// t_max < 0.1 t0 of the configured state unless allow_long_times; throws ConfigError.
void check_time_window(const RunConfig& config, const PiecewiseState& state);

/// Reads whitespace- or comma-separated numeric columns, skipping # lines.
std::vector<std::vector<double>> read_columns(const std::string& path, std::size_t n_columns);

}  // namespace discoflux
