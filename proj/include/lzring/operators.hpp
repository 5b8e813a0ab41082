#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "lzring/errors.hpp"

namespace lzring {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Hard cap on the number of two-level sites (Hilbert dimension 2^12 = 4096).
inline constexpr int kMaxSites = 12;

/// Basis-index convention: tensor slot 0 is the leftmost factor and maps to
/// the most significant bit of the basis index. Bit value 0 is spin up
/// (sigma_z eigenvalue +1), bit value 1 is spin down (-1).
inline int site_bit(std::uint32_t basis, int site, int n_sites) {
  return static_cast<int>((basis >> (n_sites - 1 - site)) & 1u);
}

/// sigma_z eigenvalue (+1 up / -1 down) of `site` in basis state `basis`.
inline double spin_sign(std::uint32_t basis, int site, int n_sites) {
  return site_bit(basis, site, n_sites) == 0 ? 1.0 : -1.0;
}

inline std::uint32_t site_mask(int site, int n_sites) {
  return 1u << (n_sites - 1 - site);
}

enum class Pauli { X, Z, Identity };

inline ComplexMatrix pauli(Pauli kind) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (kind) {
    case Pauli::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case Pauli::Identity:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
  }
  return m;
}

/// Kronecker product; entry ((i*b.dim+k),(j*b.dim+l)) = a(i,j)*b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw std::invalid_argument("kron: inputs must be square");
  const Eigen::Index dim = a.rows() * b.rows();
  if (dim > (Eigen::Index{1} << kMaxSites))
    throw capacity_error("kron: result dimension " + std::to_string(dim) +
                         " exceeds 2^" + std::to_string(kMaxSites));
  ComplexMatrix out(dim, dim);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// I x ... x op x ... x I with `op` in tensor slot `site` (slot 0 leftmost).
inline ComplexMatrix embed(const ComplexMatrix& op, int site, int n_sites) {
  if (op.rows() != 2 || op.cols() != 2)
    throw std::invalid_argument("embed: operator must be 2x2");
  if (n_sites < 1 || n_sites > kMaxSites)
    throw capacity_error("embed: site count " + std::to_string(n_sites) +
                         " outside [1, " + std::to_string(kMaxSites) + "]");
  if (site < 0 || site >= n_sites)
    throw std::invalid_argument("embed: site " + std::to_string(site) +
                                " out of range for n=" + std::to_string(n_sites));
  ComplexMatrix out = site == 0 ? op : pauli(Pauli::Identity);
  for (int k = 1; k < n_sites; ++k)
    out = kron(out, k == site ? op : pauli(Pauli::Identity));
  return out;
}

/// sigma_z(i) * sigma_z(j), diagonal with entries s_i(b)*s_j(b).
inline ComplexMatrix two_site_zz(int i, int j, int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw capacity_error("two_site_zz: site count out of range");
  if (i == j) throw std::invalid_argument("two_site_zz: sites must differ");
  if (i < 0 || i >= n_sites || j < 0 || j >= n_sites)
    throw std::invalid_argument("two_site_zz: site index out of range");
  const std::uint32_t dim = 1u << n_sites;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::uint32_t b = 0; b < dim; ++b)
    out(b, b) = spin_sign(b, i, n_sites) * spin_sign(b, j, n_sites);
  return out;
}

}  // namespace lzring
