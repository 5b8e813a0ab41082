#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "lzring/dynamics.hpp"
#include "lzring/sweep.hpp"

namespace lzring {

/// Scientific notation, 9 significant digits, locale-independent.
/// Enough precision to recompute the trapezoid FTPE from CSV alone to 1e-8.
inline std::string format_float(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

inline std::string timeseries_csv(const Trajectory& traj) {
  std::string out = "t,es_mean,gs_mean,norm";
  for (int k = 0; k < traj.n_sites; ++k)
    out += ",es_site" + std::to_string(k);
  out += "\n";
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    out += format_float(traj.times[s]);
    out += ',';
    out += format_float(traj.es_mean[s]);
    out += ',';
    out += format_float(traj.gs_mean[s]);
    out += ',';
    out += format_float(traj.norm[s]);
    for (double f : traj.site_flip_prob[s]) {
      out += ',';
      out += format_float(f);
    }
    out += '\n';
  }
  return out;
}

inline std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "j1,j2,r,ftpe\n";
  for (const auto& row : rows) {
    out += format_float(row.j1);
    out += ',';
    out += format_float(row.j2);
    out += ',';
    out += format_float(row.r);
    out += ',';
    out += format_float(row.ftpe);
    out += '\n';
  }
  return out;
}

inline std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::size_t pos = 0;
  int line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "j1,j2,r,ftpe")
        throw config_error("sweep CSV line 1: expected header 'j1,j2,r,ftpe'");
      header_seen = true;
      continue;
    }
    double vals[4];
    std::size_t field_start = 0;
    for (int f = 0; f < 4; ++f) {
      std::size_t comma = line.find(',', field_start);
      const bool last = f == 3;
      if (last != (comma == std::string_view::npos))
        throw config_error("sweep CSV line " + std::to_string(line_no) +
                           ": expected 4 comma-separated fields");
      auto field = line.substr(field_start,
                               last ? std::string_view::npos : comma - field_start);
      const char* end = field.data() + field.size();
      auto [ptr, ec] = std::from_chars(field.data(), end, vals[f]);
      if (ec != std::errc{} || ptr != end)
        throw config_error("sweep CSV line " + std::to_string(line_no) +
                           ": cannot parse '" + std::string(field) + "'");
      field_start = comma + 1;
    }
    rows.push_back(SweepRow{vals[0], vals[1], vals[2], vals[3]});
  }
  if (!header_seen) throw config_error("sweep CSV: empty input");
  return rows;
}

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open '" + path + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw io_error("write to '" + path + "' failed");
}

inline void write_file(const std::string& path,
                       std::span<const std::uint8_t> bytes) {
  write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                    bytes.size()));
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open '" + path + "'");
  std::string out((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  if (f.bad()) throw io_error("read from '" + path + "' failed");
  return out;
}

}  // namespace lzring
