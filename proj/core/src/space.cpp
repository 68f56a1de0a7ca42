#include "modbench/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace modbench {

// ---------------------------------------------------------------------------
// BlockMatrix

BlockMatrix::BlockMatrix(std::vector<CMatrix> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_)
    if (!b.square()) throw ShapeMismatch("BlockMatrix: blocks must be square");
}

BlockMatrix BlockMatrix::zeros(std::span<const std::size_t> sizes) {
  std::vector<CMatrix> blocks;
  blocks.reserve(sizes.size());
  for (auto n : sizes) blocks.emplace_back(n, n);
  return BlockMatrix(std::move(blocks));
}

BlockMatrix BlockMatrix::identity(std::span<const std::size_t> sizes) {
  std::vector<CMatrix> blocks;
  blocks.reserve(sizes.size());
  for (auto n : sizes) blocks.push_back(CMatrix::identity(n));
  return BlockMatrix(std::move(blocks));
}

std::vector<std::size_t> BlockMatrix::sizes() const {
  std::vector<std::size_t> s;
  s.reserve(blocks_.size());
  for (const auto& b : blocks_) s.push_back(b.rows());
  return s;
}

std::size_t BlockMatrix::flat_size() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.rows() * b.cols();
  return n;
}

std::vector<Complex> BlockMatrix::flatten() const {
  std::vector<Complex> flat;
  flat.reserve(flat_size());
  for (const auto& b : blocks_) flat.insert(flat.end(), b.entries().begin(), b.entries().end());
  return flat;
}

BlockMatrix BlockMatrix::unflatten(std::span<const std::size_t> sizes, std::span<const Complex> flat) {
  std::vector<CMatrix> blocks;
  std::size_t offset = 0;
  for (auto n : sizes) {
    if (offset + n * n > flat.size()) throw ShapeMismatch("unflatten: vector too short");
    blocks.emplace_back(n, n, std::vector<Complex>(flat.begin() + offset, flat.begin() + offset + n * n));
    offset += n * n;
  }
  if (offset != flat.size()) throw ShapeMismatch("unflatten: vector too long");
  return BlockMatrix(std::move(blocks));
}

BlockMatrix BlockMatrix::adjoint() const {
  std::vector<CMatrix> r;
  r.reserve(blocks_.size());
  for (const auto& b : blocks_) r.push_back(b.adjoint());
  return BlockMatrix(std::move(r));
}

double BlockMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) {
    const double f = b.frobenius_norm();
    s += f * f;
  }
  return std::sqrt(s);
}

bool BlockMatrix::same_shape(const BlockMatrix& o) const {
  if (blocks_.size() != o.blocks_.size()) return false;
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    if (blocks_[k].rows() != o.blocks_[k].rows()) return false;
  return true;
}

BlockMatrix& BlockMatrix::operator+=(const BlockMatrix& o) {
  if (!same_shape(o)) throw ShapeMismatch("BlockMatrix +=: shape mismatch");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += o.blocks_[k];
  return *this;
}

BlockMatrix& BlockMatrix::operator-=(const BlockMatrix& o) {
  if (!same_shape(o)) throw ShapeMismatch("BlockMatrix -=: shape mismatch");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= o.blocks_[k];
  return *this;
}

BlockMatrix& BlockMatrix::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

BlockMatrix operator*(const BlockMatrix& a, const BlockMatrix& b) {
  if (!a.same_shape(b)) throw ShapeMismatch("BlockMatrix *: shape mismatch");
  std::vector<CMatrix> r;
  r.reserve(a.blocks_.size());
  for (std::size_t k = 0; k < a.blocks_.size(); ++k) r.push_back(a.blocks_[k] * b.blocks_[k]);
  return BlockMatrix(std::move(r));
}

Complex inner(const GnsVector& a, const GnsVector& b) {
  if (!a.blocks.same_shape(b.blocks)) throw ShapeMismatch("inner: shape mismatch");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.blocks.block_count(); ++k) {
    const auto ea = a.blocks.block(k).entries();
    const auto eb = b.blocks.block(k).entries();
    for (std::size_t i = 0; i < ea.size(); ++i) s += ea[i] * std::conj(eb[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// WStarSpace

WStarSpace make_space(std::vector<std::size_t> blocks, std::vector<CMatrix> rho_blocks, SpaceOptions options) {
  if (blocks.empty()) throw ShapeMismatch("make_space: no blocks");
  if (blocks.size() != rho_blocks.size()) throw ShapeMismatch("make_space: block count differs from rho count");
  Complex trace = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b] == 0) throw ShapeMismatch("make_space: zero-sized block");
    if (rho_blocks[b].rows() != blocks[b] || rho_blocks[b].cols() != blocks[b]) {
      throw ShapeMismatch("make_space: rho block " + std::to_string(b) + " has the wrong shape");
    }
    trace += rho_blocks[b].trace();
  }
  if (std::abs(trace.imag()) > kTraceTolerance) throw TraceError("make_space: rho trace is not real");
  if (std::abs(trace.real() - 1.0) > kTraceTolerance) {
    if (options.normalize) {
      if (trace.real() <= 0.0) throw NotPositive("make_space: rho trace is not positive");
      for (auto& r : rho_blocks) r *= 1.0 / trace.real();
    } else if (!options.bypass_trace_check) {
      throw TraceError("make_space: total trace " + std::to_string(trace.real()) + " deviates from 1");
    }
  }

  WStarSpace s;
  s.sizes_ = std::move(blocks);
  s.gns_dim_ = 0;
  for (auto n : s.sizes_) s.gns_dim_ += n * n;
  for (auto& r : rho_blocks) {
    HermEig eig = herm_eig(r);  // throws NotHermitian
    if (eig.eigenvalues.front() < kFaithfulnessFloor) {
      throw NotPositive("make_space: rho eigenvalue " + std::to_string(eig.eigenvalues.front()) +
                        " below the faithfulness floor");
    }
    s.rho_sqrt_.push_back(apply_function(eig, [](double x) { return Complex(std::sqrt(x)); }));
    s.rho_inv_sqrt_.push_back(apply_function(eig, [](double x) { return Complex(1.0 / std::sqrt(x)); }));
    s.rho_.push_back((r + r.adjoint()) * 0.5);
    s.rho_eig_.push_back(std::move(eig));
  }
  return s;
}

double WStarSpace::min_eigenvalue() const {
  double m = rho_eig_.front().eigenvalues.front();
  for (const auto& e : rho_eig_) m = std::min(m, e.eigenvalues.front());
  return m;
}

double WStarSpace::total_trace() const {
  double t = 0.0;
  for (const auto& r : rho_) t += r.trace().real();
  return t;
}

bool WStarSpace::is_tracial(double tol) const {
  for (const auto& e : rho_eig_)
    if (e.eigenvalues.back() - e.eigenvalues.front() > tol) return false;
  // Across blocks the weight per matrix unit must also agree.
  const double ref = rho_eig_.front().eigenvalues.front();
  for (const auto& e : rho_eig_)
    if (std::abs(e.eigenvalues.front() - ref) > tol) return false;
  return true;
}

AlgebraElement WStarSpace::identity() const { return {BlockMatrix::identity(sizes_)}; }
AlgebraElement WStarSpace::zero() const { return {BlockMatrix::zeros(sizes_)}; }

AlgebraElement WStarSpace::unit(std::size_t b, std::size_t i, std::size_t j) const {
  auto m = BlockMatrix::zeros(sizes_);
  m.block(b)(i, j) = 1.0;
  return {std::move(m)};
}

bool WStarSpace::conforms(const BlockMatrix& m) const {
  if (m.block_count() != sizes_.size()) return false;
  for (std::size_t b = 0; b < sizes_.size(); ++b)
    if (m.block(b).rows() != sizes_[b]) return false;
  return true;
}

void WStarSpace::require_conforming(const BlockMatrix& m, const char* where) const {
  if (!conforms(m)) throw ShapeMismatch(std::string(where) + ": element does not match the space's blocks");
}

Complex WStarSpace::state(const AlgebraElement& x) const {
  require_conforming(x.blocks, "state");
  Complex s = 0.0;
  for (std::size_t b = 0; b < sizes_.size(); ++b) s += (rho_[b] * x.blocks.block(b)).trace();
  return s;
}

GnsVector WStarSpace::gns_embed(const AlgebraElement& x) const {
  require_conforming(x.blocks, "gns_embed");
  std::vector<CMatrix> r;
  for (std::size_t b = 0; b < sizes_.size(); ++b) r.push_back(x.blocks.block(b) * rho_sqrt_[b]);
  return {BlockMatrix(std::move(r))};
}

AlgebraElement WStarSpace::gns_recover(const GnsVector& xi) const {
  require_conforming(xi.blocks, "gns_recover");
  std::vector<CMatrix> r;
  for (std::size_t b = 0; b < sizes_.size(); ++b) r.push_back(xi.blocks.block(b) * rho_inv_sqrt_[b]);
  return {BlockMatrix(std::move(r))};
}

GnsVector WStarSpace::commutant_vector(const BlockMatrix& c) const {
  require_conforming(c, "commutant_vector");
  std::vector<CMatrix> r;
  for (std::size_t b = 0; b < sizes_.size(); ++b) r.push_back(rho_sqrt_[b] * c.block(b));
  return {BlockMatrix(std::move(r))};
}

BlockMatrix WStarSpace::commutant_symbol(const GnsVector& xi) const {
  require_conforming(xi.blocks, "commutant_symbol");
  std::vector<CMatrix> r;
  for (std::size_t b = 0; b < sizes_.size(); ++b) r.push_back(rho_inv_sqrt_[b] * xi.blocks.block(b));
  return BlockMatrix(std::move(r));
}

GnsVector WStarSpace::left_multiply(const AlgebraElement& a, const GnsVector& xi) const {
  return {a.blocks * xi.blocks};
}

GnsVector WStarSpace::right_multiply(const AlgebraElement& a, const GnsVector& xi) const {
  require_conforming(a.blocks, "right_multiply");
  std::vector<CMatrix> r;
  for (std::size_t b = 0; b < sizes_.size(); ++b)
    r.push_back(xi.blocks.block(b) * rho_inv_sqrt_[b] * a.blocks.block(b) * rho_sqrt_[b]);
  return {BlockMatrix(std::move(r))};
}

namespace {

template <class Apply>
CMatrix operator_matrix(std::span<const std::size_t> sizes, std::size_t dim, Apply apply) {
  CMatrix m(dim, dim);
  std::vector<Complex> e(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    std::fill(e.begin(), e.end(), Complex{});
    e[k] = 1.0;
    const GnsVector col = apply(GnsVector{BlockMatrix::unflatten(sizes, e)});
    const auto flat = col.flatten();
    for (std::size_t i = 0; i < dim; ++i) m(i, k) = flat[i];
  }
  return m;
}

}  // namespace

CMatrix WStarSpace::left_operator(const AlgebraElement& a) const {
  return operator_matrix(sizes_, gns_dim_, [&](const GnsVector& xi) { return left_multiply(a, xi); });
}

CMatrix WStarSpace::right_operator(const AlgebraElement& a) const {
  return operator_matrix(sizes_, gns_dim_, [&](const GnsVector& xi) { return right_multiply(a, xi); });
}

double WStarSpace::phi_norm(const AlgebraElement& x) const { return gns_embed(x).norm(); }

double WStarSpace::sharp_norm(const AlgebraElement& x) const {
  const double a = phi_norm(x);
  const double b = phi_norm(x.adjoint());
  return std::sqrt(0.5 * (a * a + b * b));
}

double WStarSpace::right_norm(const AlgebraElement& x) const {
  require_conforming(x.blocks, "right_norm");
  // Right multiplication by C on Hilbert–Schmidt space has norm ‖C‖.
  double r = 0.0;
  for (std::size_t b = 0; b < sizes_.size(); ++b)
    r = std::max(r, modbench::op_norm(rho_inv_sqrt_[b] * x.blocks.block(b) * rho_sqrt_[b]));
  return r;
}

double WStarSpace::op_norm(const AlgebraElement& x) const {
  require_conforming(x.blocks, "op_norm");
  double r = 0.0;
  for (std::size_t b = 0; b < sizes_.size(); ++b) r = std::max(r, modbench::op_norm(x.blocks.block(b)));
  return r;
}

double WStarSpace::total_bound(const AlgebraElement& x) const {
  return std::max({op_norm(x), right_norm(x), right_norm(x.adjoint())});
}

bool WStarSpace::in_sort(const AlgebraElement& x, double n) const {
  return total_bound(x) <= n * (1.0 + kSortRelTol);
}

AlgebraElement WStarSpace::sample_gaussian(std::mt19937_64& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
  std::vector<CMatrix> blocks;
  for (auto n : sizes_) {
    CMatrix m(n, n);
    for (auto& z : m.entries()) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z = {re, im};
    }
    blocks.push_back(std::move(m));
  }
  return {BlockMatrix(std::move(blocks))};
}

AlgebraElement WStarSpace::sample_sort(double n, std::mt19937_64& rng) const {
  AlgebraElement x = sample_gaussian(rng);
  const double bound = total_bound(x);
  if (bound > n) x = Complex(n / bound) * x;
  return x;
}

AlgebraElement WStarSpace::sample_sort(double n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  return sample_sort(n, rng);
}

WStarSpace random_space(std::vector<std::size_t> blocks, std::uint64_t seed, double min_eig) {
  if (blocks.empty()) throw ShapeMismatch("random_space: no blocks");
  const double total_dim = std::accumulate(blocks.begin(), blocks.end(), 0.0,
                                           [](double s, std::size_t n) { return s + static_cast<double>(n); });
  // Small margin so the stored (rounded) spectrum still clears min_eig.
  const double floor = min_eig * (1.0 + 1e-6);
  if (!(min_eig > 0.0) || floor * total_dim >= 1.0) {
    throw DomainError("random_space: eigenvalue floor incompatible with unit trace");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);

  std::vector<CMatrix> bases;
  std::vector<std::vector<double>> weights;
  double weight_sum = 0.0;
  for (auto n : blocks) {
    CMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) = {gauss(rng), gauss(rng)};
    h = (h + h.adjoint()) * 0.5;
    bases.push_back(herm_eig(h).basis);
    std::vector<double> w(n);
    for (auto& x : w) {
      x = expo(rng);
      weight_sum += x;
    }
    weights.push_back(std::move(w));
  }
  const double spread = 1.0 - floor * total_dim;
  std::vector<CMatrix> rho;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::vector<double> lambda(weights[b].size());
    for (std::size_t k = 0; k < lambda.size(); ++k) lambda[k] = floor + spread * weights[b][k] / weight_sum;
    const CMatrix& u = bases[b];
    CMatrix r = u * CMatrix::diagonal(lambda) * u.adjoint();
    rho.push_back((r + r.adjoint()) * 0.5);
  }
  return make_space(std::move(blocks), std::move(rho), SpaceOptions{.normalize = true});
}

}  // namespace modbench
