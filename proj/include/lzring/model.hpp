#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "lzring/operators.hpp"

namespace lzring {

/// First- and second-neighbor pairs of an n-site ring, each unordered pair
/// counted once. For n=4 this is exactly the four J1 terms and two J2 terms
/// of the coupled four-particle Hamiltonian.
struct RingTopology {
  int n_sites = 0;
  std::vector<std::pair<int, int>> first_pairs;
  std::vector<std::pair<int, int>> second_pairs;
};

inline RingTopology ring_topology(int n_sites) {
  if (n_sites < 2 || n_sites > kMaxSites)
    throw std::invalid_argument("ring_topology: n must be in [2, " +
                                std::to_string(kMaxSites) + "], got " +
                                std::to_string(n_sites));
  std::set<std::pair<int, int>> first, second;
  for (int k = 0; k < n_sites; ++k) {
    int a = k, b = (k + 1) % n_sites;
    first.insert(std::minmax(a, b));
  }
  for (int k = 0; k < n_sites; ++k) {
    int a = k, b = (k + 2) % n_sites;
    if (a == b) continue;
    auto p = std::minmax(a, b);
    if (!first.count(p)) second.insert(p);
  }
  return RingTopology{n_sites, {first.begin(), first.end()},
                      {second.begin(), second.end()}};
}

/// Degenerate single-site "ring": no neighbor pairs at all. Kept separate
/// from ring_topology so the n>=2 contract stays strict.
inline RingTopology single_site_topology() { return RingTopology{1, {}, {}}; }

inline RingTopology make_topology(int n_sites) {
  return n_sites == 1 ? single_site_topology() : ring_topology(n_sites);
}

struct CouplingParams {
  double g = 1.0;   // tunneling energy (dimensionless, g-hat = 1)
  double j1 = 0.0;  // first-neighbor zz coupling
  double j2 = 0.0;  // second-neighbor zz coupling
  double r = 1.0;   // sweep rate (> 0)

  void validate() const {
    if (!(g > 0.0) || !std::isfinite(g))
      throw std::invalid_argument("coupling params: g must be > 0");
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("coupling params: r must be > 0");
    if (!std::isfinite(j1) || !std::isfinite(j2))
      throw std::invalid_argument("coupling params: j1, j2 must be finite");
  }
};

/// H(t) = t*K + C with K the diagonal sweep part (r/2 * sum_k sigma_z(k))
/// and C the static part (g * sum_k sigma_x(k) + zz couplings). Immutable
/// after build; safe to share across threads.
///
/// Besides the dense matrices this carries the diagonal/bit-flip structure
/// of H so the propagator can apply H(t) without forming it: the sigma_x sum
/// connects basis states differing in exactly one bit.
struct LzHamiltonian {
  int n_sites = 0;
  CouplingParams params;
  RingTopology topology;
  ComplexMatrix sweep_part;    // K, diagonal
  ComplexMatrix static_part;   // C
  Eigen::VectorXd sweep_diag;  // diag(K), real
  Eigen::VectorXd zz_diag;     // zz part of diag(C), real
  std::vector<std::uint32_t> flip_masks;  // one single-bit mask per site

  std::uint32_t dim() const { return 1u << n_sites; }
};

inline LzHamiltonian build_hamiltonian(const CouplingParams& params,
                                       const RingTopology& topo) {
  params.validate();
  const int n = topo.n_sites;
  if (n < 1 || n > kMaxSites)
    throw capacity_error("build_hamiltonian: site count out of range");
  const std::uint32_t dim = 1u << n;

  LzHamiltonian h;
  h.n_sites = n;
  h.params = params;
  h.topology = topo;
  h.sweep_diag = Eigen::VectorXd::Zero(dim);
  h.zz_diag = Eigen::VectorXd::Zero(dim);
  for (std::uint32_t b = 0; b < dim; ++b) {
    double m = 0.0;
    for (int k = 0; k < n; ++k) m += spin_sign(b, k, n);
    h.sweep_diag(b) = 0.5 * params.r * m;
    double zz = 0.0;
    for (auto [i, j] : topo.first_pairs)
      zz += params.j1 * spin_sign(b, i, n) * spin_sign(b, j, n);
    for (auto [i, j] : topo.second_pairs)
      zz += params.j2 * spin_sign(b, i, n) * spin_sign(b, j, n);
    h.zz_diag(b) = zz;
  }
  for (int k = 0; k < n; ++k) h.flip_masks.push_back(site_mask(k, n));

  h.sweep_part = ComplexMatrix::Zero(dim, dim);
  h.sweep_part.diagonal() = h.sweep_diag.cast<Complex>();
  ComplexMatrix c = ComplexMatrix::Zero(dim, dim);
  c.diagonal() = h.zz_diag.cast<Complex>();
  for (int k = 0; k < n; ++k) c += params.g * embed(pauli(Pauli::X), k, n);
  h.static_part = std::move(c);
  return h;
}

inline ComplexMatrix hamiltonian_at(const LzHamiltonian& h, double t) {
  if (!std::isfinite(t))
    throw std::invalid_argument("hamiltonian_at: t must be finite");
  return t * h.sweep_part + h.static_part;
}

/// Test oracle: entrywise construction over bitstrings, no Kronecker
/// products. diagonal(b) = (r t / 2) sum_k s_k(b) + j1 sum s_i s_j
/// + j2 sum s_i s_j; offdiagonal g where the Hamming distance is 1.
inline ComplexMatrix brute_force_hamiltonian(const CouplingParams& params,
                                             const RingTopology& topo,
                                             double t) {
  params.validate();
  const int n = topo.n_sites;
  if (n < 1 || n > 6)
    throw std::invalid_argument("brute_force_hamiltonian: oracle limited to n <= 6");
  const std::uint32_t dim = 1u << n;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::uint32_t b = 0; b < dim; ++b) {
    double field = 0.0;
    for (int k = 0; k < n; ++k) field += spin_sign(b, k, n);
    double zz = 0.0;
    for (auto [i, j] : topo.first_pairs)
      zz += params.j1 * spin_sign(b, i, n) * spin_sign(b, j, n);
    for (auto [i, j] : topo.second_pairs)
      zz += params.j2 * spin_sign(b, i, n) * spin_sign(b, j, n);
    out(b, b) = 0.5 * params.r * t * field + zz;
    for (std::uint32_t bp = 0; bp < dim; ++bp) {
      std::uint32_t diff = b ^ bp;
      if (diff != 0 && (diff & (diff - 1)) == 0) out(b, bp) = params.g;
    }
  }
  return out;
}

}  // namespace lzring
