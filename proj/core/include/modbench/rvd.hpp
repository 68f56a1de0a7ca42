#pragma once

#include <cstdint>

#include "modbench/linalg.hpp"
#include "modbench/space.hpp"

namespace modbench {

/// Bounded route to modular theory. K is the closed real span of the
/// self-adjoint vectors hω; P and Q project onto K and iK, R = P + Q and
/// Θ = P − Q = J·T. Built by real least squares only.
class RvdData {
 public:
  const WStarSpace& space() const { return *space_; }

  const RealLinearOperator& p() const { return p_; }
  const RealLinearOperator& q() const { return q_; }
  const RealLinearOperator& r() const { return r_; }
  const RealLinearOperator& theta() const { return theta_; }
  const RealLinearOperator& conjugation() const { return j_; }
  const RealLinearOperator& modulus() const { return t_; }
  /// Eigendecomposition of the complex-linear part of R.
  const HermEig& r_eig() const { return r_eig_; }
  std::span<const double> r_spectrum() const { return r_eig_.eigenvalues; }

  friend RvdData build_rvd(const WStarSpace& space);

 private:
  RvdData() = default;

  const WStarSpace* space_ = nullptr;
  RealLinearOperator p_, q_, r_, theta_, j_, t_;
  HermEig r_eig_;
};

/// The space must outlive the returned data.
RvdData build_rvd(const WStarSpace& space);

/// Real-orthogonal projection onto the closed real span of c·ω for
/// self-adjoint commutant elements c (right multiplications).
RealLinearOperator commutant_sa_projection(const WStarSpace& space);

GnsVector apply(const RealLinearOperator& op, const GnsVector& xi);

/// The algebra elements b with bω = P(xω), Q(xω), R(xω).
AlgebraElement p_element(const RvdData& rvd, const AlgebraElement& x);
AlgebraElement q_element(const RvdData& rvd, const AlgebraElement& x);
AlgebraElement r_element(const RvdData& rvd, const AlgebraElement& x);

/// (2 − R)^{it} R^{-it} ξ.
GnsVector delta_it_rvd(const RvdData& rvd, double t, const GnsVector& xi);
CMatrix delta_it_rvd_matrix(const RvdData& rvd, double t);
/// R^{-1}(2 − R) on flattened coordinates.
CMatrix delta_rvd_matrix(const RvdData& rvd);

struct PWitness {
  AlgebraElement b;
  double op_x = 0.0;
  double right_x = 0.0;
  double total_x = 0.0;
  double op_b = 0.0;
  double right_b = 0.0;
  double total_b = 0.0;

  double op_bound() const { return 2.0 * right_x; }
  double right_bound() const { return right_x + 2.0 * op_x; }
  double total_bound() const { return 3.0 * total_x; }
  bool holds() const;
};

/// b with bω = P(xω), with the norms that bound it.
PWitness p_witness(const RvdData& rvd, const AlgebraElement& x);

/// ‖·‖_φ distance from x to the self-adjoint part of M.
double distance_to_sa(const RvdData& rvd, const AlgebraElement& x);

struct ThetaReport {
  int samples = 0;
  /// max ‖Θxω − (2 − R)x†ω‖ over x ∈ M.
  double algebra_defect = 0.0;
  /// max ‖Θx'ω − R x'†ω‖ over x' ∈ M'.
  double commutant_defect = 0.0;
  /// Adjoint compatibility of Θ between M'ω and Mω, both directions.
  double round_trip_defect = 0.0;

  double max_defect() const;
};

/// Checks the Θ identities on Gaussian samples. A substitute for R (used by
/// negative controls) may be passed in.
ThetaReport theta_identities_check(const RvdData& rvd, int samples, std::uint64_t seed);
ThetaReport theta_identities_check(const RvdData& rvd, const RealLinearOperator& r_override, int samples,
                                   std::uint64_t seed);

}  // namespace modbench
