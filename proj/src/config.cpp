#include "discoflux/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace discoflux {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& v, int line) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d)) {
    throw ConfigError("not a finite number: '" + v + "'", line);
  }
  return d;
}

int parse_int(const std::string& v, int line) {
  errno = 0;
  char* end = nullptr;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || n < std::numeric_limits<int>::min() ||
      n > std::numeric_limits<int>::max()) {
    throw ConfigError("not an integer: '" + v + "'", line);
  }
  return static_cast<int>(n);
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("not a boolean: '" + v + "'", line);
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

template <typename Section>
Setter real_key(Section RunConfig::*section, double Section::*field) {
  return [=](RunConfig& c, const std::string& v, int line) { (c.*section).*field = parse_double(v, line); };
}
template <typename Section>
Setter int_key(Section RunConfig::*section, int Section::*field) {
  return [=](RunConfig& c, const std::string& v, int line) { (c.*section).*field = parse_int(v, line); };
}
template <typename Section>
Setter text_key(Section RunConfig::*section, std::string Section::*field) {
  return [=](RunConfig& c, const std::string& v, int) { (c.*section).*field = v; };
}
template <typename Section>
Setter bool_key(Section RunConfig::*section, bool Section::*field) {
  return [=](RunConfig& c, const std::string& v, int line) { (c.*section).*field = parse_bool(v, line); };
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  using S = RunConfig::StateSection;
  using G = RunConfig::GridSection;
  using T = RunConfig::TimeSection;
  using P = RunConfig::PotentialSection;
  using E = RunConfig::EvolveSection;
  static const std::map<std::string, std::map<std::string, Setter>> table{
      {"state",
       {{"kind", text_key(&RunConfig::state, &S::kind)},
        {"x0", real_key(&RunConfig::state, &S::x0)},
        {"fraction", real_key(&RunConfig::state, &S::fraction)},
        {"dphi", real_key(&RunConfig::state, &S::dphi)},
        {"profile", text_key(&RunConfig::state, &S::profile)},
        {"k_left", real_key(&RunConfig::state, &S::k_left)},
        {"k_right", real_key(&RunConfig::state, &S::k_right)},
        {"value_re", real_key(&RunConfig::state, &S::value_re)},
        {"value_im", real_key(&RunConfig::state, &S::value_im)},
        {"momentum", real_key(&RunConfig::state, &S::momentum)},
        {"center", real_key(&RunConfig::state, &S::center)},
        {"width", real_key(&RunConfig::state, &S::width)},
        {"file", text_key(&RunConfig::state, &S::file)}}},
      {"grid",
       {{"a", real_key(&RunConfig::grid, &G::a)},
        {"b", real_key(&RunConfig::grid, &G::b)},
        {"mass", real_key(&RunConfig::grid, &G::mass)},
        {"n_cells", int_key(&RunConfig::grid, &G::n_cells)}}},
      {"time",
       {{"t_min", real_key(&RunConfig::time, &T::t_min)},
        {"t_max", real_key(&RunConfig::time, &T::t_max)},
        {"n_points", int_key(&RunConfig::time, &T::n_points)},
        {"allow_long_times", bool_key(&RunConfig::time, &T::allow_long_times)}}},
      {"potential",
       {{"kind", text_key(&RunConfig::potential, &P::kind)},
        {"kappa", real_key(&RunConfig::potential, &P::kappa)},
        {"height", real_key(&RunConfig::potential, &P::height)},
        {"position", real_key(&RunConfig::potential, &P::position)},
        {"file", text_key(&RunConfig::potential, &P::file)}}},
      {"evolve",
       {{"scheme", text_key(&RunConfig::evolve, &E::scheme)},
        {"dt", real_key(&RunConfig::evolve, &E::dt)},
        {"n_steps", int_key(&RunConfig::evolve, &E::n_steps)},
        {"record_every", int_key(&RunConfig::evolve, &E::record_every)}}},
      {"output",
       {{"dir", [](RunConfig& c, const std::string& v, int) { c.output.dir = v; }},
        {"formats",
         [](RunConfig& c, const std::string& v, int line) {
           c.output.formats.clear();
           std::stringstream ss(v);
           std::string item;
           while (std::getline(ss, item, ',')) {
             item = trim(item);
             if (item != "csv" && item != "json" && item != "svg") {
               throw ConfigError("unknown output format '" + item + "'", line);
             }
             c.output.formats.push_back(item);
           }
         }}}},
  };
  return table;
}

// Line of the first occurrence of each key, for post-parse validation messages.
struct KeyLines {
  std::map<std::string, int> lines;
  int of(const std::string& key) const {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  }
};

void validate(const RunConfig& c, const KeyLines& kl) {
  static const std::set<std::string> kinds{"truncated_well", "wall_removed", "kink",        "phase_jump",
                                           "samples_file",   "gaussian",     "ground_state"};
  if (!kinds.count(c.state.kind)) throw ConfigError("unknown state kind '" + c.state.kind + "'", kl.of("state.kind"));
  if (c.state.profile != "ground_state" && c.state.profile != "gaussian") {
    throw ConfigError("unknown phase_jump profile '" + c.state.profile + "'", kl.of("state.profile"));
  }
  if (!(c.state.x0 > 0.0)) throw ConfigError("x0 must be positive", kl.of("state.x0"));
  if (!(c.state.width > 0.0)) throw ConfigError("width must be positive", kl.of("state.width"));
  if (!(c.grid.a < 0.0)) throw ConfigError("grid.a must be negative", kl.of("grid.a"));
  if (!(c.grid.b > 0.0)) throw ConfigError("grid.b must be positive", kl.of("grid.b"));
  if (!(c.grid.mass > 0.0)) throw ConfigError("mass must be positive", kl.of("grid.mass"));
  if (c.grid.n_cells < 64) throw ConfigError("n_cells must be at least 64", kl.of("grid.n_cells"));
  if (!(c.time.t_min > 0.0)) throw ConfigError("t_min must be positive", kl.of("time.t_min"));
  if (!(c.time.t_max >= c.time.t_min)) throw ConfigError("t_max must be at least t_min", kl.of("time.t_max"));
  if (c.time.n_points < 1) throw ConfigError("n_points must be positive", kl.of("time.n_points"));
  if (c.evolve.scheme != "spectral" && c.evolve.scheme != "crank_nicolson") {
    throw ConfigError("unknown scheme '" + c.evolve.scheme + "'", kl.of("evolve.scheme"));
  }
  if (c.evolve.dt < 0.0) throw ConfigError("dt must be positive", kl.of("evolve.dt"));
  if (c.evolve.n_steps < 0) throw ConfigError("n_steps must be positive", kl.of("evolve.n_steps"));
  if (c.evolve.record_every < 1) throw ConfigError("record_every must be positive", kl.of("evolve.record_every"));
  try {
    potential_kind_from_string(c.potential.kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), kl.of("potential.kind"));
  }
}

std::string resolve(const RunConfig& c, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(c.base_dir) / p).string();
}

}  // namespace

bool RunConfig::wants(std::string_view format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

RunConfig parse_config(std::string_view text, const std::string& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  KeyLines kl;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!schema().count(section)) throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    if (section.empty()) throw ConfigError("key outside any section", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto& keys = schema().at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
    const std::string full = section + "." + key;
    if (kl.lines.count(full)) throw ConfigError("duplicate key '" + key + "'", line);
    kl.lines[full] = line;
    it->second(c, value, line);
  }
  validate(c, kl);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(ss.str(), parent.empty() ? "." : parent.string());
}

BoxDomain make_domain(const RunConfig& c) { return BoxDomain(c.grid.a, c.grid.b, c.grid.mass); }

Grid1D make_grid(const RunConfig& c) {
  try {
    return Grid1D(make_domain(c), c.grid.n_cells);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0);
  }
}

Potential make_potential(const RunConfig& c) {
  Potential p;
  p.kind = potential_kind_from_string(c.potential.kind);
  p.kappa = c.potential.kappa;
  p.height = c.potential.height;
  p.position = c.potential.position;
  if (p.kind == Potential::Kind::tabulated) {
    if (c.potential.file.empty()) throw ConfigError("tabulated potential needs potential.file", 0);
    const auto cols = read_columns(resolve(c, c.potential.file), 2);
    p.table_x = cols[0];
    p.table_v = cols[1];
    for (std::size_t i = 1; i < p.table_x.size(); ++i) {
      if (!(p.table_x[i] > p.table_x[i - 1])) throw ConfigError("potential table x must increase", 0);
    }
  }
  return p;
}

PiecewiseState make_state(const RunConfig& c) {
  const BoxDomain domain = make_domain(c);
  const auto& s = c.state;
  try {
    if (s.kind == "truncated_well") return truncated_well(s.x0, s.fraction, domain);
    if (s.kind == "wall_removed") return wall_removed(s.x0, domain);
    if (s.kind == "kink") return kink_state(s.k_left, s.k_right, cplx{s.value_re, s.value_im}, domain, s.momentum);
    if (s.kind == "ground_state") return box_ground_state(domain);
    if (s.kind == "gaussian") return gaussian_state(s.center, s.width, s.momentum, domain);
    if (s.kind == "phase_jump") {
      const PiecewiseState profile = s.profile == "gaussian" ? gaussian_state(s.center, s.width, s.momentum, domain)
                                                             : box_ground_state(domain);
      return phase_jump_state(s.dphi, profile);
    }
    if (s.kind == "samples_file") {
      if (s.file.empty()) throw ConfigError("samples_file state needs state.file", 0);
      const auto cols = read_columns(resolve(c, s.file), 3);
      std::vector<cplx> psi(cols[0].size());
      for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = {cols[1][i], cols[2][i]};
      return sampled_state(cols[0], psi, domain, s.x0);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("state: ") + e.what(), 0);
  }
  throw ConfigError("unknown state kind '" + s.kind + "'", 0);
}

void check_time_window(const RunConfig& c, const PiecewiseState& state) {
  if (c.time.allow_long_times) return;
  if (!(c.time.t_max < 0.1 * state.t0())) {
    throw ConfigError("t_max = " + std::to_string(c.time.t_max) + " is not below 0.1 t0 = " +
                          std::to_string(0.1 * state.t0()) + "; set allow_long_times = true to override",
                      0);
  }
}

std::vector<std::vector<double>> read_columns(const std::string& path, std::size_t n_columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file '" + path + "'", 0);
  std::vector<std::vector<double>> cols(n_columns);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    std::string normalized = s;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream ls(normalized);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(parse_double(tok, line));
    if (row.size() != n_columns) {
      throw ConfigError(path + ": expected " + std::to_string(n_columns) + " columns", line);
    }
    for (std::size_t k = 0; k < n_columns; ++k) cols[k].push_back(row[k]);
  }
  if (cols[0].empty()) throw ConfigError(path + ": no data rows", 0);
  return cols;
}

}  // namespace discoflux
