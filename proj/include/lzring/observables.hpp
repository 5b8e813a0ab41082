#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "lzring/dynamics.hpp"

namespace lzring {

/// Probability that `site` is flipped relative to the reference diabatic
/// configuration: sum of |amplitude|^2 over basis states whose bit at `site`
/// differs from the reference bit.
inline double site_flip_probability(const StateVector& psi, int site,
                                    std::uint32_t reference_config) {
  const int n = psi.n_sites;
  if (site < 0 || site >= n)
    throw std::invalid_argument("site_flip_probability: site out of range");
  const int ref_bit = site_bit(reference_config, site, n);
  double p = 0.0;
  for (Eigen::Index b = 0; b < psi.amplitudes.size(); ++b)
    if (site_bit(static_cast<std::uint32_t>(b), site, n) != ref_bit)
      p += std::norm(psi.amplitudes(b));
  return p;
}

/// E.S value of one state: mean over sites of site_flip_probability.
inline double mean_flip_probability(const StateVector& psi,
                                    std::uint32_t reference_config) {
  double acc = 0.0;
  for (int k = 0; k < psi.n_sites; ++k)
    acc += site_flip_probability(psi, k, reference_config);
  return acc / psi.n_sites;
}

/// E.S(t) series over sampled states; G.S(t) is its complement.
inline std::vector<double> excited_series(std::span<const StateVector> states,
                                          std::uint32_t reference_config) {
  if (states.empty())
    throw std::invalid_argument("excited_series: no samples");
  std::vector<double> es;
  es.reserve(states.size());
  for (const auto& psi : states)
    es.push_back(mean_flip_probability(psi, reference_config));
  return es;
}

struct FtpeResult {
  double ftpe = 0.0;
  double window_start = 0.0;  // t_start + 0.9 (t_end - t_start)
  int samples_used = 0;       // samples inside the final-10% window
};

/// Final transition probability: trapezoidal average of E.S(t) over the
/// final 10% of the simulated window. If no sample lands on the window start,
/// the boundary value is linearly interpolated from the bracketing samples.
inline FtpeResult ftpe(std::span<const double> times,
                       std::span<const double> series) {
  if (times.size() != series.size() || times.size() < 2)
    throw std::invalid_argument("ftpe: need matching times/series, >= 2 samples");
  const double t0 = times.front();
  const double t1 = times.back();
  const double window = 0.1 * (t1 - t0);
  const double w_start = t0 + 0.9 * (t1 - t0);
  const double tiny = 1e-12 * std::max(1.0, std::abs(t1));

  std::size_t first = 0;
  while (first < times.size() && times[first] < w_start - tiny) ++first;
  const int used = static_cast<int>(times.size() - first);
  if (used < 2)
    throw std::invalid_argument("ftpe: fewer than 2 samples in the final-10% window");

  double integral = 0.0;
  double prev_t = w_start;
  double prev_v;
  if (std::abs(times[first] - w_start) <= tiny) {
    prev_v = series[first];
    ++first;
  } else {
    // interpolate the window-start value from the bracketing samples
    const double ta = times[first - 1], tb = times[first];
    const double f = (w_start - ta) / (tb - ta);
    prev_v = series[first - 1] + f * (series[first] - series[first - 1]);
  }
  for (std::size_t i = first; i < times.size(); ++i) {
    integral += 0.5 * (prev_v + series[i]) * (times[i] - prev_t);
    prev_t = times[i];
    prev_v = series[i];
  }
  return FtpeResult{integral / window, w_start, used};
}

inline FtpeResult ftpe(const Trajectory& traj) {
  return ftpe(traj.times, traj.es_mean);
}

}  // namespace lzring
