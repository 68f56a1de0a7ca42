#pragma once

// Closed-form weighted Hilbert–Schmidt model used as an independent oracle.
// Densities are built as ρ = U·diag(p)·U† from chosen eigenvalues and a
// Gram–Schmidt unitary, so every power ρ^z is known without diagonalizing.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "modbench/space.hpp"

namespace oracle {

using modbench::BlockMatrix;
using modbench::CMatrix;
using modbench::Complex;

inline CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(n));
  for (auto& c : cols)
    for (auto& z : c) z = {g(rng), g(rng)};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      Complex dot = 0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(cols[j][i]) * cols[k][i];
      for (std::size_t i = 0; i < n; ++i) cols[k][i] -= dot * cols[j][i];
    }
    double len = 0;
    for (auto z : cols[k]) len += std::norm(z);
    len = std::sqrt(len);
    for (auto& z : cols[k]) z /= len;
  }
  CMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u(i, j) = cols[j][i];
  return u;
}

struct KnownDensity {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<double>> eigenvalues;
  std::vector<CMatrix> unitaries;

  /// ρ^z block by block.
  BlockMatrix power(Complex z) const {
    std::vector<CMatrix> out;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
      const auto n = sizes[b];
      CMatrix d(n, n);
      for (std::size_t i = 0; i < n; ++i) d(i, i) = std::pow(Complex(eigenvalues[b][i]), z);
      out.push_back(unitaries[b] * d * unitaries[b].adjoint());
    }
    return BlockMatrix(std::move(out));
  }

  modbench::WStarSpace space() const {
    auto rho = power(1.0);
    std::vector<CMatrix> blocks(rho.blocks().begin(), rho.blocks().end());
    for (auto& blk : blocks) blk = (blk + blk.adjoint()) * Complex(0.5);
    return modbench::make_space(sizes, std::move(blocks));
  }

  /// Every ratio p_i/p_j inside each block, the spectrum of Δ.
  std::vector<double> delta_spectrum() const {
    std::vector<double> out;
    for (const auto& p : eigenvalues)
      for (double a : p)
        for (double b : p) out.push_back(a / b);
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// Random density with eigenvalues at least floor, normalized to unit trace.
inline KnownDensity random_density(std::vector<std::size_t> sizes, std::uint64_t seed, double floor = 0.02) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  KnownDensity k;
  k.sizes = sizes;
  std::size_t total = 0;
  double raw_sum = 0;
  for (auto n : sizes) {
    total += n;
    std::vector<double> p(n);
    for (auto& x : p) {
      x = unit(rng) + 0.05;
      raw_sum += x;
    }
    k.eigenvalues.push_back(p);
    k.unitaries.push_back(random_unitary(n, rng));
  }
  const double slack = 1.0 - floor * static_cast<double>(total);
  for (auto& p : k.eigenvalues)
    for (auto& x : p) x = floor + slack * x / raw_sum;
  return k;
}

inline KnownDensity qubit() { return {{2}, {{2.0 / 3.0, 1.0 / 3.0}}, {CMatrix::identity(2)}}; }
inline KnownDensity tracial_qubit() { return {{2}, {{0.5, 0.5}}, {CMatrix::identity(2)}}; }

/// Δ^z ξ = ρ^z ξ ρ^{-z}.
inline BlockMatrix delta_power(const KnownDensity& k, Complex z, const BlockMatrix& xi) {
  return k.power(z) * xi * k.power(-z);
}

/// ‖x‖_φ² = tr(ρ x† x).
inline double phi_norm(const KnownDensity& k, const BlockMatrix& x) {
  const auto m = k.power(1.0) * (x.adjoint() * x);
  double s = 0;
  for (const auto& blk : m.blocks()) s += blk.trace().real();
  return std::sqrt(std::max(0.0, s));
}

inline double max_abs_diff(const BlockMatrix& a, const BlockMatrix& b) {
  double m = 0;
  for (std::size_t blk = 0; blk < a.block_count(); ++blk)
    for (std::size_t i = 0; i < a.block(blk).entries().size(); ++i)
      m = std::max(m, std::abs(a.block(blk).entries()[i] - b.block(blk).entries()[i]));
  return m;
}

/// Largest singular value by power iteration on A†A, independent of the
/// library's Jacobi solver.
inline double power_iteration_norm(const CMatrix& a, int iterations = 3000) {
  const CMatrix ata = a.adjoint() * a;
  std::vector<Complex> v(ata.cols());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex(1.0 + 0.1 * static_cast<double>(i), 0.3);
  double lambda = 0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<Complex> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) w[i] += ata(i, j) * v[j];
    double len = 0;
    for (auto z : w) len += std::norm(z);
    len = std::sqrt(len);
    if (len == 0) return 0;
    for (auto& z : w) z /= len;
    lambda = len;
    v = w;
  }
  return std::sqrt(lambda);
}

}  // namespace oracle
