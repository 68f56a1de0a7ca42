#include "modbench/rvd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace modbench {

namespace {

// Hermitian real basis of M: e_ii, e_ij + e_ji, i(e_ij − e_ji) per block.
std::vector<BlockMatrix> hermitian_basis(std::span<const std::size_t> sizes) {
  std::vector<BlockMatrix> basis;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const std::size_t n = sizes[b];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        if (i == j) {
          auto m = BlockMatrix::zeros(sizes);
          m.block(b)(i, i) = 1.0;
          basis.push_back(std::move(m));
          continue;
        }
        auto re = BlockMatrix::zeros(sizes);
        re.block(b)(i, j) = 1.0;
        re.block(b)(j, i) = 1.0;
        basis.push_back(std::move(re));
        auto im = BlockMatrix::zeros(sizes);
        im.block(b)(i, j) = Complex(0.0, 1.0);
        im.block(b)(j, i) = Complex(0.0, -1.0);
        basis.push_back(std::move(im));
      }
  }
  return basis;
}

// Projection B·Bᵀ onto the real span of the given vectors, with B from
// modified Gram–Schmidt applied twice.
RMatrix span_projection(const std::vector<std::vector<double>>& vectors, std::size_t dim) {
  std::vector<std::vector<double>> ortho;
  for (auto v : vectors) {
    const double original = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : ortho) {
        const double c = std::inner_product(v.begin(), v.end(), u.begin(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) v[i] -= c * u[i];
      }
    const double len = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (len <= 1e-12 * std::max(original, 1e-300)) continue;
    for (auto& x : v) x /= len;
    ortho.push_back(std::move(v));
  }
  RMatrix p(dim, dim);
  for (const auto& u : ortho)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) p(i, j) += u[i] * u[j];
  return p;
}

std::vector<double> realified(const GnsVector& v) { return realify(v.flatten()); }

}  // namespace

GnsVector apply(const RealLinearOperator& op, const GnsVector& xi) {
  const auto sizes = xi.blocks.sizes();
  return {BlockMatrix::unflatten(sizes, op.apply(std::span<const Complex>(xi.flatten())))};
}

RvdData build_rvd(const WStarSpace& space) {
  const std::size_t n = space.gns_dim();
  std::vector<std::vector<double>> vectors;
  for (auto& h : hermitian_basis(space.sizes())) vectors.push_back(realified(space.gns_embed({std::move(h)})));

  RvdData rvd;
  rvd.space_ = &space;
  rvd.p_ = RealLinearOperator(span_projection(vectors, 2 * n));
  const RealLinearOperator i_op(imaginary_unit(n));
  rvd.q_ = RealLinearOperator(-1.0 * (i_op * rvd.p_ * i_op).matrix());
  rvd.r_ = rvd.p_ + rvd.q_;
  rvd.theta_ = rvd.p_ - rvd.q_;
  auto polar = real_polar(rvd.theta_);
  rvd.j_ = std::move(polar.j);
  rvd.t_ = std::move(polar.t);
  CMatrix r = complex_part(rvd.r_.matrix());
  rvd.r_eig_ = herm_eig((r + r.adjoint()) * 0.5);
  return rvd;
}

RealLinearOperator commutant_sa_projection(const WStarSpace& space) {
  std::vector<std::vector<double>> vectors;
  for (const auto& h : hermitian_basis(space.sizes())) vectors.push_back(realified(space.commutant_vector(h)));
  return RealLinearOperator(span_projection(vectors, 2 * space.gns_dim()));
}

AlgebraElement p_element(const RvdData& rvd, const AlgebraElement& x) {
  const auto& s = rvd.space();
  return s.gns_recover(apply(rvd.p(), s.gns_embed(x)));
}

AlgebraElement q_element(const RvdData& rvd, const AlgebraElement& x) {
  const auto& s = rvd.space();
  return s.gns_recover(apply(rvd.q(), s.gns_embed(x)));
}

AlgebraElement r_element(const RvdData& rvd, const AlgebraElement& x) {
  const auto& s = rvd.space();
  return s.gns_recover(apply(rvd.r(), s.gns_embed(x)));
}

namespace {

Complex rvd_phase(double r, double t) {
  return std::exp(Complex(0.0, t) * (std::log(2.0 - r) - std::log(r)));
}

void require_open_interval(const HermEig& eig) {
  if (eig.eigenvalues.front() <= 0.0 || eig.eigenvalues.back() >= 2.0) {
    throw DomainError("rvd: spectrum of R is not inside (0, 2)");
  }
}

}  // namespace

CMatrix delta_it_rvd_matrix(const RvdData& rvd, double t) {
  require_open_interval(rvd.r_eig());
  return apply_function(rvd.r_eig(), [t](double r) { return rvd_phase(r, t); });
}

GnsVector delta_it_rvd(const RvdData& rvd, double t, const GnsVector& xi) {
  if (t == 0.0) return xi;
  const auto sizes = xi.blocks.sizes();
  return {BlockMatrix::unflatten(sizes, mat_vec(delta_it_rvd_matrix(rvd, t), xi.flatten()))};
}

CMatrix delta_rvd_matrix(const RvdData& rvd) {
  require_open_interval(rvd.r_eig());
  return apply_function(rvd.r_eig(), [](double r) { return Complex((2.0 - r) / r); });
}

bool PWitness::holds() const {
  auto within = [](double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-9) + 1e-12; };
  return within(op_b, op_bound()) && within(right_b, right_bound()) && within(total_b, total_bound());
}

PWitness p_witness(const RvdData& rvd, const AlgebraElement& x) {
  const auto& s = rvd.space();
  PWitness w{p_element(rvd, x)};
  w.op_x = s.op_norm(x);
  w.right_x = s.right_norm(x);
  w.total_x = s.total_bound(x);
  w.op_b = s.op_norm(w.b);
  w.right_b = s.right_norm(w.b);
  w.total_b = s.total_bound(w.b);
  return w;
}

double distance_to_sa(const RvdData& rvd, const AlgebraElement& x) {
  const auto& s = rvd.space();
  const GnsVector v = s.gns_embed(x);
  return (v - apply(rvd.p(), v)).norm();
}

double ThetaReport::max_defect() const { return std::max({algebra_defect, commutant_defect, round_trip_defect}); }

ThetaReport theta_identities_check(const RvdData& rvd, int samples, std::uint64_t seed) {
  return theta_identities_check(rvd, rvd.r(), samples, seed);
}

ThetaReport theta_identities_check(const RvdData& rvd, const RealLinearOperator& r, int samples,
                                   std::uint64_t seed) {
  const auto& s = rvd.space();
  const RealLinearOperator two_minus_r(2.0 * RMatrix::identity(2 * s.gns_dim()) - r.matrix());
  ThetaReport report;
  report.samples = samples;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < samples; ++k) {
    const AlgebraElement x = k == 0 ? s.identity() : s.sample_gaussian(rng);
    const double scale = std::max(1.0, s.gns_embed(x).norm());

    // Θxω = (2 − R)x†ω.
    const GnsVector theta_x = apply(rvd.theta(), s.gns_embed(x));
    const GnsVector rhs_x = apply(two_minus_r, s.gns_embed(x.adjoint()));
    report.algebra_defect = std::max(report.algebra_defect, (theta_x - rhs_x).norm() / scale);

    // Θx'ω = R x'†ω with x' the right multiplication by the blocks of x.
    const GnsVector xp = s.commutant_vector(x.blocks);
    const GnsVector xp_adj = s.commutant_vector(x.blocks.adjoint());
    const GnsVector theta_xp = apply(rvd.theta(), xp);
    report.commutant_defect =
        std::max(report.commutant_defect, (theta_xp - apply(r, xp_adj)).norm() / std::max(1.0, xp.norm()));

    // Θx'ω = yω forces Θx'†ω = y†ω; Θzω = z'ω forces Θz†ω = z'†ω.
    const AlgebraElement y = s.gns_recover(theta_xp);
    const double d1 = (apply(rvd.theta(), xp_adj) - s.gns_embed(y.adjoint())).norm();
    const BlockMatrix z_prime = s.commutant_symbol(theta_x);
    const double d2 = (apply(rvd.theta(), s.gns_embed(x.adjoint())) - s.commutant_vector(z_prime.adjoint())).norm();
    report.round_trip_defect = std::max({report.round_trip_defect, d1 / scale, d2 / scale});
  }
  return report;
}

}  // namespace modbench
