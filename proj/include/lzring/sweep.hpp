#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "lzring/observables.hpp"

namespace lzring {

/// One sweep axis: `steps` evenly spaced values from min to max;
/// steps = 1 pins the axis at min.
struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  void validate(const std::string& name) const {
    if (steps < 1)
      throw std::invalid_argument("axis " + name + ": steps must be >= 1");
    if (!(min <= max))
      throw std::invalid_argument("axis " + name + ": min must be <= max");
  }

  std::vector<double> values() const {
    if (steps == 1) return {min};
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i)
      v[i] = min + (max - min) * i / (steps - 1);
    return v;
  }
};

struct GridSpec {
  AxisSpec j1, j2, r;

  void validate() const {
    j1.validate("j1");
    j2.validate("j2");
    r.validate("r");
  }

  std::size_t total_points() const {
    return static_cast<std::size_t>(j1.steps) * j2.steps * r.steps;
  }
};

struct SweepRow {
  double j1 = 0.0, j2 = 0.0, r = 0.0, ftpe = 0.0;
};

/// Everything a grid point evaluation needs besides (j1, j2, r).
struct SweepContext {
  int n_sites = 4;
  double g = 1.0;
  double t_start = -30.0;
  double t_end = 30.0;
  IntegratorConfig integrator;
  int threads = 0;                  // 0 = hardware concurrency
  std::size_t max_points = 100000;  // guard against runaway grids
};

/// Evaluate FTPE over the grid. Row order is deterministic (j1 outermost,
/// then j2, then r, each ascending) regardless of how many workers run;
/// points are independent and written into a pre-sized buffer by index.
/// The first failing point aborts the sweep and is identified in the error.
inline std::vector<SweepRow> run_grid(const GridSpec& grid,
                                      const SweepContext& ctx) {
  grid.validate();
  ctx.integrator.validate();
  const std::size_t total = grid.total_points();
  if (total > ctx.max_points)
    throw config_error("run_grid: " + std::to_string(total) +
                       " grid points exceed the cap of " +
                       std::to_string(ctx.max_points));

  const auto j1v = grid.j1.values();
  const auto j2v = grid.j2.values();
  const auto rv = grid.r.values();
  std::vector<SweepRow> rows(total);
  const RingTopology topo = make_topology(ctx.n_sites);

  auto evaluate = [&](std::size_t idx) {
    const std::size_t i1 = idx / (j2v.size() * rv.size());
    const std::size_t i2 = (idx / rv.size()) % j2v.size();
    const std::size_t ir = idx % rv.size();
    CouplingParams p{ctx.g, j1v[i1], j2v[i2], rv[ir]};
    const LzHamiltonian h = build_hamiltonian(p, topo);
    const Trajectory traj = evolve(h, ctx.integrator, ctx.t_start, ctx.t_end);
    rows[idx] = SweepRow{p.j1, p.j2, p.r, ftpe(traj).ftpe};
  };

  unsigned workers = ctx.threads > 0 ? static_cast<unsigned>(ctx.threads)
                                     : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(total));

  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) evaluate(i);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  std::string first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= total) return;
        try {
          evaluate(idx);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!failed.exchange(true)) {
            first_error = "sweep aborted at point (j1=" +
                          std::to_string(j1v[idx / (j2v.size() * rv.size())]) +
                          ", j2=" + std::to_string(j2v[(idx / rv.size()) % j2v.size()]) +
                          ", r=" + std::to_string(rv[idx % rv.size()]) +
                          "): " + e.what();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) throw numeric_error(first_error);
  return rows;
}

enum class SweepAxis { J1, J2, R };

inline SweepAxis parse_axis(const std::string& name) {
  if (name == "j1") return SweepAxis::J1;
  if (name == "j2") return SweepAxis::J2;
  if (name == "r") return SweepAxis::R;
  throw config_error("unknown axis '" + name + "' (expected j1, j2 or r)");
}

namespace detail {
inline double axis_value(const SweepRow& row, SweepAxis a) {
  switch (a) {
    case SweepAxis::J1: return row.j1;
    case SweepAxis::J2: return row.j2;
    default: return row.r;
  }
}
}  // namespace detail

/// Render a complete (x_axis, y_axis) rectangle of rows as a binary PGM
/// (P5, maxval 255). Pixel = round-half-up of 255 * clamp(ftpe, 0, 1);
/// x ascends left to right, y descends top to bottom (plot orientation).
inline std::vector<std::uint8_t> render_heatmap(std::span<const SweepRow> rows,
                                                SweepAxis x_axis,
                                                SweepAxis y_axis) {
  if (x_axis == y_axis)
    throw config_error("render_heatmap: x and y axes must differ");
  if (rows.empty()) throw config_error("render_heatmap: no rows");

  SweepAxis other = SweepAxis::J1;
  if (x_axis != SweepAxis::J1 && y_axis != SweepAxis::J1) other = SweepAxis::J1;
  else if (x_axis != SweepAxis::J2 && y_axis != SweepAxis::J2) other = SweepAxis::J2;
  else other = SweepAxis::R;

  std::map<double, std::size_t> xs, ys;
  double pinned = detail::axis_value(rows.front(), other);
  for (const auto& row : rows) {
    xs.emplace(detail::axis_value(row, x_axis), 0);
    ys.emplace(detail::axis_value(row, y_axis), 0);
    if (detail::axis_value(row, other) != pinned)
      throw config_error("render_heatmap: more than two free axes");
  }
  std::size_t i = 0;
  for (auto& [k, idx] : xs) idx = i++;
  i = 0;
  for (auto& [k, idx] : ys) idx = i++;
  const std::size_t nx = xs.size(), ny = ys.size();
  if (rows.size() != nx * ny)
    throw config_error("render_heatmap: rows do not form a complete rectangle");

  std::vector<double> cell(nx * ny, -1.0);
  for (const auto& row : rows) {
    const std::size_t ix = xs.at(detail::axis_value(row, x_axis));
    const std::size_t iy = ys.at(detail::axis_value(row, y_axis));
    if (cell[iy * nx + ix] >= 0.0)
      throw config_error("render_heatmap: duplicate grid point");
    cell[iy * nx + ix] = row.ftpe;
  }
  for (double c : cell)
    if (c < 0.0)
      throw config_error("render_heatmap: rows do not form a complete rectangle");

  std::string header = "P5\n" + std::to_string(nx) + " " +
                       std::to_string(ny) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + nx * ny);
  for (std::size_t row_i = 0; row_i < ny; ++row_i) {
    const std::size_t iy = ny - 1 - row_i;  // top row = max y
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double f = std::clamp(cell[iy * nx + ix], 0.0, 1.0);
      out.push_back(static_cast<std::uint8_t>(std::floor(255.0 * f + 0.5)));
    }
  }
  return out;
}

}  // namespace lzring
