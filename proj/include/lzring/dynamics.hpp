#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "lzring/model.hpp"

namespace lzring {

enum class InitMode { Adiabatic, Diabatic };

struct IntegratorConfig {
  double dt = 1e-3;        // fixed RK4 step (dimensionless time)
  double norm_tol = 1e-6;  // allowed total norm drift; exceeding it aborts
  int sample_count = 2001;
  InitMode init_mode = InitMode::Adiabatic;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw std::invalid_argument("integrator: dt must be > 0");
    if (sample_count < 2)
      throw std::invalid_argument("integrator: sample_count must be >= 2");
    if (!(norm_tol > 0.0))
      throw std::invalid_argument("integrator: norm_tol must be > 0");
  }
};

struct StateVector {
  int n_sites = 0;
  Eigen::VectorXcd amplitudes;
};

struct Trajectory {
  int n_sites = 0;
  std::uint32_t reference_config = 0;  // initial diabatic configuration
  std::vector<double> times;
  std::vector<std::vector<double>> site_flip_prob;  // [sample][site]
  std::vector<double> es_mean;
  std::vector<double> gs_mean;  // complement of es_mean by definition
  std::vector<double> norm;

  double max_norm_drift() const {
    double d = 0.0;
    for (double v : norm) d = std::max(d, std::abs(v - 1.0));
    return d;
  }
};

struct InitialState {
  StateVector state;
  std::uint32_t reference_config = 0;
};

/// Standard infinite-window Landau-Zener flip probability 1 - exp(-2 pi g^2 / r).
inline double lz_closed_form(double g, double r) {
  if (!(g > 0.0) || !(r > 0.0))
    throw std::invalid_argument("lz_closed_form: g and r must be > 0");
  return 1.0 - std::exp(-2.0 * std::numbers::pi * g * g / r);
}

inline InitialState initial_state(const LzHamiltonian& h, double t_start,
                                  InitMode mode) {
  if (!std::isfinite(t_start))
    throw std::invalid_argument("initial_state: t_start must be finite");
  const std::uint32_t dim = h.dim();

  if (mode == InitMode::Diabatic) {
    // Basis state minimizing the diagonal of H(t_start); ties resolved by
    // lowest index for reproducibility.
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::uint32_t b = 0; b < dim; ++b) {
      double d = t_start * h.sweep_diag(b) + h.zz_diag(b);
      if (d < best_d) {
        best_d = d;
        best = b;
      }
    }
    StateVector psi{h.n_sites, Eigen::VectorXcd::Zero(dim)};
    psi.amplitudes(best) = 1.0;
    return InitialState{std::move(psi), best};
  }

  // Adiabatic: ground eigenvector of H(t_start). The matrix is real
  // symmetric by construction, so diagonalize the real part.
  Eigen::MatrixXd hmat = hamiltonian_at(h, t_start).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hmat);
  if (solver.info() != Eigen::Success)
    throw numeric_error("initial_state: eigensolver failed to converge");
  if (dim > 1) {
    const double gap = solver.eigenvalues()(1) - solver.eigenvalues()(0);
    if (gap <= 1e-9)
      throw numeric_error("initial_state: degenerate ground level, gap = " +
                          std::to_string(gap));
  }
  Eigen::VectorXd ground = solver.eigenvectors().col(0);
  // Phase convention: largest-magnitude amplitude real positive.
  Eigen::Index ref = 0;
  ground.cwiseAbs().maxCoeff(&ref);
  if (ground(ref) < 0.0) ground = -ground;
  StateVector psi{h.n_sites, ground.cast<Complex>()};
  return InitialState{std::move(psi), static_cast<std::uint32_t>(ref)};
}

namespace detail {

/// RK4 stepper for d psi/dt = -i H(t) psi with H(t) = t*diag(kd) + C,
/// worked on the real/imaginary split u + i v:
///   du/dt = H v,  dv/dt = -H u   (H real symmetric).
/// C is applied through its structure: a zz diagonal plus g times the
/// single-bit-flip sum, which matches the dense static_part entrywise.
/// The stepper is the hot loop of every sweep, so the site count is a
/// template parameter and each stage is one fused pass over the state.
struct Propagator {
  virtual ~Propagator() = default;
  virtual void step(double t, double dt, double* u, double* v) = 0;
  virtual void apply_h(double t, const double* x, double* out) = 0;
};

template <int N>
class PropagatorImpl final : public Propagator {
  static constexpr std::uint32_t kDim = 1u << N;

 public:
  explicit PropagatorImpl(const LzHamiltonian& h)
      : g_(h.params.g), kd_(h.sweep_diag.data()), czz_(h.zz_diag.data()) {}

  void step(double t, double dt, double* u, double* v) override {
    const double h2 = 0.5 * dt;
    // k1 at t; seed the accumulator and the first stage state
    for (std::uint32_t i = 0; i < kDim; ++i) {
      const double a = t * kd_[i] + czz_[i];
      const double hv = a * v[i] + g_ * flip_sum(v, i);
      const double hu = a * u[i] + g_ * flip_sum(u, i);
      au_[i] = hv;
      av_[i] = -hu;
      ua_[i] = u[i] + h2 * hv;
      va_[i] = v[i] - h2 * hu;
    }
    // k2 at t + dt/2
    const double tm = t + h2;
    for (std::uint32_t i = 0; i < kDim; ++i) {
      const double a = tm * kd_[i] + czz_[i];
      const double hv = a * va_[i] + g_ * flip_sum(va_.data(), i);
      const double hu = a * ua_[i] + g_ * flip_sum(ua_.data(), i);
      au_[i] += 2.0 * hv;
      av_[i] -= 2.0 * hu;
      ub_[i] = u[i] + h2 * hv;
      vb_[i] = v[i] - h2 * hu;
    }
    // k3 at t + dt/2
    for (std::uint32_t i = 0; i < kDim; ++i) {
      const double a = tm * kd_[i] + czz_[i];
      const double hv = a * vb_[i] + g_ * flip_sum(vb_.data(), i);
      const double hu = a * ub_[i] + g_ * flip_sum(ub_.data(), i);
      au_[i] += 2.0 * hv;
      av_[i] -= 2.0 * hu;
      ua_[i] = u[i] + dt * hv;
      va_[i] = v[i] - dt * hu;
    }
    // k4 at t + dt, then combine
    const double te = t + dt;
    const double w = dt / 6.0;
    for (std::uint32_t i = 0; i < kDim; ++i) {
      const double a = te * kd_[i] + czz_[i];
      const double hv = a * va_[i] + g_ * flip_sum(va_.data(), i);
      const double hu = a * ua_[i] + g_ * flip_sum(ua_.data(), i);
      u[i] += w * (au_[i] + hv);
      v[i] += w * (av_[i] - hu);
    }
  }

  void apply_h(double t, const double* x, double* out) override {
    for (std::uint32_t i = 0; i < kDim; ++i)
      out[i] = (t * kd_[i] + czz_[i]) * x[i] + g_ * flip_sum(x, i);
  }

 private:
  // sum over sites of x with one bit flipped: the sigma_x part of H
  static double flip_sum(const double* x, std::uint32_t i) {
    double s = 0.0;
    for (int b = 0; b < N; ++b) s += x[i ^ (1u << b)];
    return s;
  }

  double g_;
  const double* kd_;
  const double* czz_;
  std::array<double, kDim> au_{}, av_{}, ua_{}, va_{}, ub_{}, vb_{};
};

inline std::unique_ptr<Propagator> make_propagator(const LzHamiltonian& h) {
  switch (h.n_sites) {
    case 1: return std::make_unique<PropagatorImpl<1>>(h);
    case 2: return std::make_unique<PropagatorImpl<2>>(h);
    case 3: return std::make_unique<PropagatorImpl<3>>(h);
    case 4: return std::make_unique<PropagatorImpl<4>>(h);
    case 5: return std::make_unique<PropagatorImpl<5>>(h);
    case 6: return std::make_unique<PropagatorImpl<6>>(h);
    case 7: return std::make_unique<PropagatorImpl<7>>(h);
    case 8: return std::make_unique<PropagatorImpl<8>>(h);
    case 9: return std::make_unique<PropagatorImpl<9>>(h);
    case 10: return std::make_unique<PropagatorImpl<10>>(h);
    case 11: return std::make_unique<PropagatorImpl<11>>(h);
    case 12: return std::make_unique<PropagatorImpl<12>>(h);
    default:
      throw capacity_error("propagator: site count out of range");
  }
}

}  // namespace detail

inline StateVector rk4_step(const LzHamiltonian& h, const StateVector& psi,
                            double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
  if (psi.amplitudes.size() != static_cast<Eigen::Index>(h.dim()))
    throw std::invalid_argument("rk4_step: state dimension mismatch");
  const std::uint32_t dim = h.dim();
  std::vector<double> u(dim), v(dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    u[i] = psi.amplitudes(i).real();
    v[i] = psi.amplitudes(i).imag();
  }
  auto prop = detail::make_propagator(h);
  prop->step(t, dt, u.data(), v.data());
  StateVector out{h.n_sites, Eigen::VectorXcd(dim)};
  for (std::uint32_t i = 0; i < dim; ++i) out.amplitudes(i) = Complex(u[i], v[i]);
  for (std::uint32_t i = 0; i < dim; ++i)
    if (!std::isfinite(u[i]) || !std::isfinite(v[i]))
      throw numeric_error("rk4_step: non-finite amplitudes (dt too large)");
  return out;
}

/// Integrate from t_start to t_end with fixed dt, landing exactly on each of
/// the sample_count equally spaced sample times (the step into a sample time
/// is shortened when needed, as the final step into t_end always is).
/// Fails if |norm - 1| exceeds norm_tol at any sample; never renormalizes.
inline Trajectory evolve(const LzHamiltonian& h, const IntegratorConfig& cfg,
                         double t_start, double t_end) {
  cfg.validate();
  if (!(t_start < t_end))
    throw std::invalid_argument("evolve: t_start must be < t_end");
  if ((t_end - t_start) / cfg.dt < cfg.sample_count)
    throw std::invalid_argument(
        "evolve: window/dt must cover at least sample_count steps");

  const std::uint32_t dim = h.dim();
  const int n = h.n_sites;
  InitialState init = initial_state(h, t_start, cfg.init_mode);

  std::vector<double> u(dim), v(dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    u[i] = init.state.amplitudes(i).real();
    v[i] = init.state.amplitudes(i).imag();
  }

  Trajectory traj;
  traj.n_sites = n;
  traj.reference_config = init.reference_config;
  traj.times.resize(cfg.sample_count);
  traj.site_flip_prob.resize(cfg.sample_count);
  traj.es_mean.resize(cfg.sample_count);
  traj.gs_mean.resize(cfg.sample_count);
  traj.norm.resize(cfg.sample_count);

  const double span = t_end - t_start;
  for (int s = 0; s < cfg.sample_count; ++s)
    traj.times[s] = t_start + span * s / (cfg.sample_count - 1);
  traj.times.back() = t_end;

  auto prop = detail::make_propagator(h);
  double max_drift = 0.0;

  auto record = [&](int s) {
    double norm2 = 0.0;
    std::vector<double> flips(n, 0.0);
    for (std::uint32_t b = 0; b < dim; ++b) {
      const double p = u[b] * u[b] + v[b] * v[b];
      norm2 += p;
      for (int k = 0; k < n; ++k)
        if (site_bit(b, k, n) != site_bit(traj.reference_config, k, n))
          flips[k] += p;
    }
    if (!std::isfinite(norm2))
      throw numeric_error("evolve: non-finite state at t = " +
                          std::to_string(traj.times[s]) +
                          " (dt too large for the spectral radius)");
    double es = 0.0;
    for (double f : flips) es += f;
    es /= n;
    traj.norm[s] = std::sqrt(norm2);
    traj.site_flip_prob[s] = std::move(flips);
    traj.es_mean[s] = es;
    traj.gs_mean[s] = 1.0 - es;
    max_drift = std::max(max_drift, std::abs(traj.norm[s] - 1.0));
    if (max_drift > cfg.norm_tol)
      throw numeric_error(
          "evolve: norm drift " + std::to_string(max_drift) + " exceeds tol " +
          std::to_string(cfg.norm_tol) + " at t = " +
          std::to_string(traj.times[s]) + "; use a smaller dt");
  };

  record(0);
  for (int s = 1; s < cfg.sample_count; ++s) {
    const double seg_start = traj.times[s - 1];
    const double seg_end = traj.times[s];
    const double seg = seg_end - seg_start;
    const auto full = static_cast<long>(std::floor(seg / cfg.dt + 1e-9));
    for (long k = 0; k < full; ++k)
      prop->step(seg_start + k * cfg.dt, cfg.dt, u.data(), v.data());
    const double done = seg_start + full * cfg.dt;
    const double rest = seg_end - done;
    if (rest > 1e-12 * std::max(1.0, std::abs(seg_end)))
      prop->step(done, rest, u.data(), v.data());
    record(s);
  }
  return traj;
}

/// Upper-bound estimate of the RK4 norm loss over a run. RK4 damps a mode of
/// energy E by |R(-i E dt)| per step with R the degree-4 Taylor polynomial of
/// exp, |R(i theta)|^2 = 1 - theta^6/72 + theta^8/576; the estimate charges
/// the whole state with the largest eigenvalue bound of H(t).
inline double estimate_rk4_norm_loss(const LzHamiltonian& h, double t_start,
                                     double t_end, double dt) {
  const auto& p = h.params;
  const double c_bound = p.g * h.n_sites +
                         std::abs(p.j1) * h.topology.first_pairs.size() +
                         std::abs(p.j2) * h.topology.second_pairs.size();
  auto loss_rate = [&](double t) {
    const double e = 0.5 * p.r * std::abs(t) * h.n_sites + c_bound;
    const double th2 = (e * dt) * (e * dt);
    const double th6 = th2 * th2 * th2;
    const double r2 = 1.0 - th6 / 72.0 + th6 * th2 / 576.0;
    if (r2 <= 0.0) return std::numeric_limits<double>::infinity();
    return (1.0 - std::sqrt(std::min(1.0, r2))) / dt;  // per unit time
  };
  // Trapezoid over a fine fixed grid; the integrand is smooth and cheap.
  const int kPoints = 20001;
  const double step = (t_end - t_start) / (kPoints - 1);
  double acc = 0.5 * (loss_rate(t_start) + loss_rate(t_end));
  for (int i = 1; i < kPoints - 1; ++i) acc += loss_rate(t_start + i * step);
  return acc * step;
}

/// Largest step size whose estimated norm loss stays below norm_tol/safety,
/// capped at dt_max. Used to pick production step sizes for fast sweeps,
/// where dt = 1e-3 dissipates far more than 1e-6 of the norm.
inline double suggest_step_size(const LzHamiltonian& h, double t_start,
                                double t_end, double norm_tol,
                                double dt_max = 1e-3, double safety = 4.0) {
  const double target = norm_tol / safety;
  if (estimate_rk4_norm_loss(h, t_start, t_end, dt_max) <= target)
    return dt_max;
  double lo = 0.0, hi = dt_max;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (estimate_rk4_norm_loss(h, t_start, t_end, mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace lzring
