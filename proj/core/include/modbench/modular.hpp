#pragma once

#include <vector>

#include "modbench/linalg.hpp"
#include "modbench/space.hpp"

namespace modbench {

/// Modular data of a space computed by the spectral route: the Tomita map S
/// (from the algebra), its adjoint F (from the commutant), Δ = F·S and the
/// conjugation J = S·Δ^{-1/2}.
class ModularData {
 public:
  const WStarSpace& space() const { return *space_; }

  /// Eigendecomposition of Δ on flattened GNS coordinates.
  const HermEig& delta_eig() const { return delta_eig_; }
  std::span<const double> delta_spectrum() const { return delta_eig_.eigenvalues; }
  CMatrix delta_matrix() const;

  const RealLinearOperator& tomita() const { return tomita_; }
  const RealLinearOperator& adjoint_tomita() const { return adjoint_tomita_; }
  const RealLinearOperator& conjugation() const { return conjugation_; }

  /// f(Δ) applied to ξ, where f is evaluated on each eigenvalue of Δ.
  GnsVector apply(const ScalarFunction& f, const GnsVector& xi) const;
  /// g(log Δ) applied to ξ.
  GnsVector apply_log(const ScalarFunction& g, const GnsVector& xi) const;
  /// f(Δ) as a matrix on flattened coordinates.
  CMatrix function_matrix(const ScalarFunction& f) const;

  GnsVector apply_conjugation(const GnsVector& xi) const;
  GnsVector apply_tomita(const GnsVector& xi) const;

  friend ModularData build_modular(const WStarSpace& space);

 private:
  ModularData() = default;

  const WStarSpace* space_ = nullptr;
  HermEig delta_eig_;
  RealLinearOperator tomita_;
  RealLinearOperator adjoint_tomita_;
  RealLinearOperator conjugation_;
};

/// The space must outlive the returned data.
ModularData build_modular(const WStarSpace& space);

/// Δ^z ξ.
GnsVector delta_power(const ModularData& md, Complex z, const GnsVector& xi);

/// σ_t(x) = Δ^{it} x Δ^{-it}, recovered as an algebra element.
AlgebraElement sigma_t(const ModularData& md, const AlgebraElement& x, double t);
/// Analytic continuation t ↦ z: the element with vector Δ^{iz}·xω.
AlgebraElement sigma_z(const ModularData& md, const AlgebraElement& x, Complex z);

enum class SpectralPiece { minus, center, plus, complement };

/// Spectral projections of Δ for (1/j, 1), {1}, (1, j) and the rest.
struct SpectralSplit {
  double j = 1.0;
  CMatrix minus;
  CMatrix center;
  CMatrix plus;
  CMatrix complement;

  const CMatrix& projector(SpectralPiece piece) const;
  GnsVector project(SpectralPiece piece, const GnsVector& xi) const;
};

/// Throws BoundaryCollision when an eigenvalue off the 1-cluster lies within
/// 1e-9 of 1/j or j, DomainError when j ≤ 1.
SpectralSplit spectral_split(const ModularData& md, double j);

enum class MultiplierKind { h, f, g, k_plus, k_minus };

/// Scalar profiles: h_a(t) = sech(t − a), f_a(t) = e^{-|t−a|},
/// g_a(t) = e^{-|t|} − (e^{-|t−a|} + e^{-|t+a|})/(e^a + e^{-a}),
/// k_±(t) = g_a(2t ∓ a).
double multiplier_value(MultiplierKind kind, double a, double t);

/// kind_a(log Δ) ξ.
GnsVector multiplier(const ModularData& md, MultiplierKind kind, double a, const GnsVector& xi);

/// g_a(log Δ) on the eigenvalue-1 piece, where it acts as tanh(a). Throws
/// NotCentered when ξ has a component off that piece above 1e-9.
GnsVector g_multiplier_on_center(const ModularData& md, double a, const GnsVector& xi);

struct SeriesResult {
  GnsVector value;
  int terms = 0;
};

/// Inverse of g_a(log Δ) on E_+ or E_- of the split at e^a, summed as a
/// geometric series in e^{-2a}Δ^{±2}. Throws WrongSupport when ξ is not
/// supported in the piece and SlowConvergence past 10⁴ terms.
SeriesResult g_inverse_series(const ModularData& md, double a, SpectralPiece piece, const GnsVector& xi);

/// Same inverse computed eigenvalue by eigenvalue.
GnsVector g_inverse_direct(const ModularData& md, double a, SpectralPiece piece, const GnsVector& xi);

/// Norms reported alongside a resolvent. With inverse_delta the input is
/// read as xω for x ∈ M and the output as y'ω for y' ∈ M'; otherwise the
/// roles of M and M' swap. The right norm of the output is controlled by
/// the right norm of the input's adjoint and vice versa.
struct ResolventCertificate {
  double denominator = 0.0;  // √(2|λ| − 2 Re λ)
  double input_norm = 0.0;
  double output_norm = 0.0;
  double input_right_norm = 0.0;
  double input_adjoint_right_norm = 0.0;
  double output_right_norm = 0.0;
  double output_adjoint_right_norm = 0.0;

  double norm_bound() const { return input_norm / denominator; }
  double right_bound() const { return input_adjoint_right_norm / denominator; }
  double adjoint_right_bound() const { return input_right_norm / denominator; }
  bool holds() const;
};

struct ResolventResult {
  GnsVector value;
  ResolventCertificate certificate;
};

/// (Δ^{-1} − λ)^{-1} ξ when inverse_delta, else (Δ − λ)^{-1} ξ. Throws
/// LambdaOnRay unless 2|λ| − 2 Re λ > 1e-12.
ResolventResult resolvent(const ModularData& md, Complex lambda, const GnsVector& xi, bool inverse_delta);

/// ∫ √(r/π) e^{-rt²} Δ^{it} ξ dt, evaluated per eigencomponent as
/// e^{-(log μ)²/(4r)}.
GnsVector gaussian_smooth(const ModularData& md, const GnsVector& xi, double r);

}  // namespace modbench
