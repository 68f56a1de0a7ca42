#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "modbench/linalg.hpp"

namespace modbench {

/// Block-diagonal complex matrix stored block by block.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  explicit BlockMatrix(std::vector<CMatrix> blocks);

  static BlockMatrix zeros(std::span<const std::size_t> sizes);
  static BlockMatrix identity(std::span<const std::size_t> sizes);

  std::size_t block_count() const { return blocks_.size(); }
  const CMatrix& block(std::size_t b) const { return blocks_[b]; }
  CMatrix& block(std::size_t b) { return blocks_[b]; }
  std::span<const CMatrix> blocks() const { return blocks_; }
  std::vector<std::size_t> sizes() const;

  /// Σ n_b², the length of flatten().
  std::size_t flat_size() const;
  std::vector<Complex> flatten() const;
  static BlockMatrix unflatten(std::span<const std::size_t> sizes, std::span<const Complex> flat);

  BlockMatrix adjoint() const;
  double frobenius_norm() const;
  bool same_shape(const BlockMatrix& o) const;

  BlockMatrix& operator+=(const BlockMatrix& o);
  BlockMatrix& operator-=(const BlockMatrix& o);
  BlockMatrix& operator*=(Complex s);

  friend BlockMatrix operator+(BlockMatrix a, const BlockMatrix& b) { return a += b; }
  friend BlockMatrix operator-(BlockMatrix a, const BlockMatrix& b) { return a -= b; }
  friend BlockMatrix operator*(BlockMatrix a, Complex s) { return a *= s; }
  friend BlockMatrix operator*(Complex s, BlockMatrix a) { return a *= s; }
  /// Blockwise product.
  friend BlockMatrix operator*(const BlockMatrix& a, const BlockMatrix& b);
  friend bool operator==(const BlockMatrix&, const BlockMatrix&) = default;

 private:
  std::vector<CMatrix> blocks_;
};

/// An element of the algebra M.
struct AlgebraElement {
  BlockMatrix blocks;

  AlgebraElement adjoint() const { return {blocks.adjoint()}; }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) { return {a.blocks + b.blocks}; }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return {a.blocks - b.blocks}; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return {a.blocks * b.blocks}; }
  friend AlgebraElement operator*(Complex s, const AlgebraElement& a) { return {s * a.blocks}; }
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;
};

/// A vector of the GNS space in the weighted Hilbert–Schmidt model: the
/// algebra element a is represented by a·ρ^{1/2}.
struct GnsVector {
  BlockMatrix blocks;

  std::vector<Complex> flatten() const { return blocks.flatten(); }
  double norm() const { return blocks.frobenius_norm(); }

  friend GnsVector operator+(const GnsVector& a, const GnsVector& b) { return {a.blocks + b.blocks}; }
  friend GnsVector operator-(const GnsVector& a, const GnsVector& b) { return {a.blocks - b.blocks}; }
  friend GnsVector operator*(Complex s, const GnsVector& a) { return {s * a.blocks}; }
};

/// ⟨a, b⟩ = Σ_b trace(b_b† a_b).
Complex inner(const GnsVector& a, const GnsVector& b);

struct SpaceOptions {
  /// Rescale ρ to unit trace instead of rejecting it.
  bool normalize = false;
  /// Accept a non-unit trace as-is. Only negative controls use this.
  bool bypass_trace_check = false;
};

inline constexpr double kFaithfulnessFloor = 1e-10;
inline constexpr double kTraceTolerance = 1e-8;
inline constexpr double kSortRelTol = 1e-9;

/// A finite direct sum of matrix algebras with a faithful state
/// φ(x) = Σ_b trace(ρ_b x_b). Immutable once built; caches ρ^{±1/2}.
class WStarSpace {
 public:
  std::span<const std::size_t> sizes() const { return sizes_; }
  std::size_t block_count() const { return sizes_.size(); }
  /// Complex dimension of the GNS space (Σ n_b²).
  std::size_t gns_dim() const { return gns_dim_; }

  const CMatrix& rho(std::size_t b) const { return rho_[b]; }
  const CMatrix& rho_sqrt(std::size_t b) const { return rho_sqrt_[b]; }
  const CMatrix& rho_inv_sqrt(std::size_t b) const { return rho_inv_sqrt_[b]; }
  const HermEig& rho_eig(std::size_t b) const { return rho_eig_[b]; }
  double min_eigenvalue() const;
  double total_trace() const;
  /// True when ρ is a multiple of the identity in every block.
  bool is_tracial(double tol = 1e-12) const;

  AlgebraElement identity() const;
  AlgebraElement zero() const;
  /// Matrix unit e_{ij} of block b (zero-based).
  AlgebraElement unit(std::size_t b, std::size_t i, std::size_t j) const;
  bool conforms(const BlockMatrix& m) const;

  Complex state(const AlgebraElement& x) const;
  GnsVector gns_embed(const AlgebraElement& x) const;
  /// The unique algebra element a with gns_embed(a) = ξ.
  AlgebraElement gns_recover(const GnsVector& xi) const;
  GnsVector omega() const { return gns_embed(identity()); }

  /// Commutant elements are right multiplications ξ ↦ ξ·c. The vector of
  /// such an element is ρ^{1/2}·c; these map between c and that vector.
  GnsVector commutant_vector(const BlockMatrix& c) const;
  BlockMatrix commutant_symbol(const GnsVector& xi) const;

  /// Left action π(a)ξ = a·ξ and right action π'(a)ξ = ξ·ρ^{-1/2}·a·ρ^{1/2}.
  GnsVector left_multiply(const AlgebraElement& a, const GnsVector& xi) const;
  GnsVector right_multiply(const AlgebraElement& a, const GnsVector& xi) const;

  /// π(a) and π'(a) as matrices on flattened GNS coordinates.
  CMatrix left_operator(const AlgebraElement& a) const;
  CMatrix right_operator(const AlgebraElement& a) const;

  double phi_norm(const AlgebraElement& x) const;
  double sharp_norm(const AlgebraElement& x) const;
  double right_norm(const AlgebraElement& x) const;
  double op_norm(const AlgebraElement& x) const;
  /// max(‖x‖, ‖x‖_right, ‖x†‖_right).
  double total_bound(const AlgebraElement& x) const;
  bool in_sort(const AlgebraElement& x, double n) const;

  /// Complex-Gaussian blocks, rescaled into S_n when needed.
  AlgebraElement sample_sort(double n, std::mt19937_64& rng) const;
  AlgebraElement sample_sort(double n, std::uint64_t seed) const;
  /// Complex-Gaussian element with no rescaling.
  AlgebraElement sample_gaussian(std::mt19937_64& rng) const;

  friend WStarSpace make_space(std::vector<std::size_t> blocks, std::vector<CMatrix> rho_blocks,
                               SpaceOptions options);

 private:
  WStarSpace() = default;
  void require_conforming(const BlockMatrix& m, const char* where) const;

  std::vector<std::size_t> sizes_;
  std::size_t gns_dim_ = 0;
  std::vector<CMatrix> rho_;
  std::vector<HermEig> rho_eig_;
  std::vector<CMatrix> rho_sqrt_;
  std::vector<CMatrix> rho_inv_sqrt_;
};

/// Validates and builds a space. Throws NotPositive when some ρ block has an
/// eigenvalue below kFaithfulnessFloor, TraceError when the trace is off by
/// more than kTraceTolerance and neither option allows it.
WStarSpace make_space(std::vector<std::size_t> blocks, std::vector<CMatrix> rho_blocks, SpaceOptions options = {});

/// Random faithful state with every ρ eigenvalue ≥ min_eig and unit trace.
/// Requires min_eig·Σ n_b < 1.
WStarSpace random_space(std::vector<std::size_t> blocks, std::uint64_t seed, double min_eig);

/// The sorts S_1, …, S_{n_max} of a space, with their membership tolerance.
struct Dissection {
  const WStarSpace* space = nullptr;
  int n_max = 2;
  double tolerance = kSortRelTol;

  bool contains(const AlgebraElement& x, double n) const {
    return space->total_bound(x) <= n * (1.0 + tolerance);
  }
  /// Metric d_n(x, y) = ‖x − y‖^#.
  double distance(const AlgebraElement& x, const AlgebraElement& y) const { return space->sharp_norm(x - y); }
  /// The sort bound: S_n has #-diameter at most 2n.
  static double diameter_bound(double n) { return 2.0 * n; }
};

}  // namespace modbench
