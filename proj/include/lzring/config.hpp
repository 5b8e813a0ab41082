#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lzring/dynamics.hpp"
#include "lzring/sweep.hpp"

namespace lzring {

/// Grid axis as it appears in config: active once any of its keys is set.
struct AxisConfig {
  std::optional<double> min, max;
  std::optional<int> steps;

  bool active() const { return min || max || steps; }

  AxisSpec resolve(const std::string& name, double pinned) const {
    if (!active()) return AxisSpec{pinned, pinned, 1};
    if (!min) throw config_error("grid axis " + name + ": " + name + "_min is required");
    const int st = steps.value_or(1);
    if (st > 1 && !max)
      throw config_error("grid axis " + name + ": " + name +
                         "_max is required when steps > 1");
    AxisSpec spec{*min, max.value_or(*min), st};
    spec.validate(name);
    return spec;
  }
};

struct RunConfig {
  int n_sites = 4;
  double g = 1.0;
  double j1 = 0.0;
  double j2 = 0.0;
  double r = 1.0;
  double t_start = -30.0;
  double t_end = 30.0;
  double dt = 1e-3;
  int samples = 2001;
  std::string init_mode = "adiabatic";
  int threads = 0;  // 0 = auto
  std::string output;
  AxisConfig j1_axis, j2_axis, r_axis;

  bool any_grid_axis() const {
    return j1_axis.active() || j2_axis.active() || r_axis.active();
  }

  CouplingParams params() const { return CouplingParams{g, j1, j2, r}; }

  InitMode init() const {
    return init_mode == "diabatic" ? InitMode::Diabatic : InitMode::Adiabatic;
  }

  IntegratorConfig integrator() const {
    return IntegratorConfig{dt, 1e-6, samples, init()};
  }

  GridSpec grid() const {
    GridSpec spec{j1_axis.resolve("j1", j1), j2_axis.resolve("j2", j2),
                  r_axis.resolve("r", r)};
    spec.validate();
    return spec;
  }
};

namespace detail {

inline double parse_double(std::string_view key, std::string_view text, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw config_error("line " + std::to_string(line) + ": key " +
                       std::string(key) + ": cannot parse '" +
                       std::string(text) + "' as a number");
  return v;
}

inline int parse_int(std::string_view key, std::string_view text, int line) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw config_error("line " + std::to_string(line) + ": key " +
                       std::string(key) + ": cannot parse '" +
                       std::string(text) + "' as an integer");
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline void apply_key(RunConfig& cfg, std::string_view key,
                      std::string_view value, int line) {
  auto bad = [&](const std::string& what) {
    throw config_error("line " + std::to_string(line) + ": key " +
                       std::string(key) + ": " + what);
  };
  if (key == "n_sites") {
    cfg.n_sites = parse_int(key, value, line);
    if (cfg.n_sites < 1 || cfg.n_sites > kMaxSites)
      bad("must be in [1, " + std::to_string(kMaxSites) + "]");
  } else if (key == "g") {
    cfg.g = parse_double(key, value, line);
    if (!(cfg.g > 0.0)) bad("must be > 0");
  } else if (key == "j1") {
    cfg.j1 = parse_double(key, value, line);
  } else if (key == "j2") {
    cfg.j2 = parse_double(key, value, line);
  } else if (key == "r") {
    cfg.r = parse_double(key, value, line);
    if (!(cfg.r > 0.0)) bad("must be > 0");
  } else if (key == "t_start") {
    cfg.t_start = parse_double(key, value, line);
  } else if (key == "t_end") {
    cfg.t_end = parse_double(key, value, line);
  } else if (key == "dt") {
    cfg.dt = parse_double(key, value, line);
    if (!(cfg.dt > 0.0)) bad("must be > 0");
  } else if (key == "samples") {
    cfg.samples = parse_int(key, value, line);
    if (cfg.samples < 2) bad("must be >= 2");
  } else if (key == "init_mode") {
    cfg.init_mode = std::string(value);
    if (cfg.init_mode != "adiabatic" && cfg.init_mode != "diabatic")
      bad("must be 'adiabatic' or 'diabatic'");
  } else if (key == "threads") {
    cfg.threads = parse_int(key, value, line);
    if (cfg.threads < 0) bad("must be >= 0");
  } else if (key == "output") {
    cfg.output = std::string(value);
  } else if (key == "j1_min") {
    cfg.j1_axis.min = parse_double(key, value, line);
  } else if (key == "j1_max") {
    cfg.j1_axis.max = parse_double(key, value, line);
  } else if (key == "j1_steps") {
    cfg.j1_axis.steps = parse_int(key, value, line);
  } else if (key == "j2_min") {
    cfg.j2_axis.min = parse_double(key, value, line);
  } else if (key == "j2_max") {
    cfg.j2_axis.max = parse_double(key, value, line);
  } else if (key == "j2_steps") {
    cfg.j2_axis.steps = parse_int(key, value, line);
  } else if (key == "r_min") {
    cfg.r_axis.min = parse_double(key, value, line);
  } else if (key == "r_max") {
    cfg.r_axis.max = parse_double(key, value, line);
  } else if (key == "r_steps") {
    cfg.r_axis.steps = parse_int(key, value, line);
  } else {
    throw config_error("line " + std::to_string(line) + ": unknown key '" +
                       std::string(key) + "'");
  }
}

}  // namespace detail

/// Cross-field checks shared by the file and flag paths.
inline void validate_config(const RunConfig& cfg) {
  cfg.params().validate();
  if (!(cfg.t_start < cfg.t_end))
    throw config_error("t_start must be < t_end");
  if ((cfg.t_end - cfg.t_start) / cfg.dt < cfg.samples)
    throw config_error("dt too large: the window must cover at least "
                       "`samples` steps");
  if (cfg.any_grid_axis()) cfg.grid();
}

/// Flat key = value config text; '#' starts a comment. Later `overrides`
/// pairs (from CLI flags) win over file values. Unknown keys are rejected
/// with the offending line number.
inline RunConfig parse_config(
    std::string_view file_text,
    const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  RunConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= file_text.size()) {
    std::size_t eol = file_text.find('\n', pos);
    if (eol == std::string_view::npos) eol = file_text.size();
    std::string_view line = file_text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) {
      if (pos > file_text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw config_error("line " + std::to_string(line_no) +
                         ": expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(line_no) + ": empty key");
    detail::apply_key(cfg, key, value, line_no);
    if (pos > file_text.size()) break;
  }
  for (const auto& [key, value] : overrides)
    detail::apply_key(cfg, key, value, 0);
  validate_config(cfg);
  return cfg;
}

}  // namespace lzring
