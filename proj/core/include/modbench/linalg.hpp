#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "modbench/errors.hpp"

namespace modbench {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Small by design (desk-scale algebras).
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static CMatrix identity(std::size_t n);
  /// Matrix unit e_{ij} (zero-based indices).
  static CMatrix unit(std::size_t n, std::size_t i, std::size_t j);
  static CMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> entries() { return data_; }
  std::span<const Complex> entries() const { return data_; }

  CMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Dense row-major real matrix; used for operators on realified spaces.
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols);

  static RMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> entries() const { return data_; }

  RMatrix transpose() const;
  double frobenius_norm() const;
  std::vector<double> apply(std::span<const double> v) const;

  RMatrix& operator+=(const RMatrix& o);
  RMatrix& operator-=(const RMatrix& o);
  RMatrix& operator*=(double s);

  friend RMatrix operator+(RMatrix a, const RMatrix& b) { return a += b; }
  friend RMatrix operator-(RMatrix a, const RMatrix& b) { return a -= b; }
  friend RMatrix operator*(RMatrix a, double s) { return a *= s; }
  friend RMatrix operator*(double s, RMatrix a) { return a *= s; }
  friend RMatrix operator*(const RMatrix& a, const RMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Eigendecomposition of a Hermitian matrix: eigenvalues ascending, basis
/// columns are the matching orthonormal eigenvectors.
struct HermEig {
  std::vector<double> eigenvalues;
  CMatrix basis;
};

/// Real symmetric counterpart of HermEig.
struct SymEig {
  std::vector<double> eigenvalues;
  RMatrix basis;
};

/// Cyclic Jacobi. Throws NotHermitian when ‖a − a†‖ > 1e-10·‖a‖ and
/// NoConvergence when the sweep budget runs out.
HermEig herm_eig(const CMatrix& a);
SymEig sym_eig(const RMatrix& a);

/// Gauss–Jordan with partial pivoting. Throws DomainError when singular.
RMatrix inverse(const RMatrix& a);

/// Largest singular value.
double op_norm(const CMatrix& a);
double op_norm(const RMatrix& a);

using ScalarFunction = std::function<Complex(double)>;

/// basis · diag(f(λ)) · basis†. Throws DomainError if f is not finite at an
/// eigenvalue.
CMatrix apply_function(const HermEig& eig, const ScalarFunction& f);
CMatrix mat_func(const CMatrix& a, const ScalarFunction& f);

/// Groups indices of ascending eigenvalues whose neighbours differ by at most
/// 1e-9·(1 + |λ|).
std::vector<std::vector<std::size_t>> cluster_eigenvalues(std::span<const double> ascending);

inline constexpr double kClusterRelTol = 1e-9;

// ---------------------------------------------------------------------------
// Realification. A complex vector v ∈ ℂᴺ is stored as (Re v, Im v) ∈ ℝ²ᴺ.

std::vector<double> realify(std::span<const Complex> v);
std::vector<Complex> complexify(std::span<const double> v);
/// [[Re A, −Im A], [Im A, Re A]]
RMatrix realify(const CMatrix& a);
/// Multiplication by i on ℝ²ᴺ.
RMatrix imaginary_unit(std::size_t n);
/// Complex-linear part (M − i M i)/2 of a real-linear map, as a complex matrix.
CMatrix complex_part(const RMatrix& m);

/// Real-linear operator on a complex space of dimension dim, acting on
/// realified coordinates.
class RealLinearOperator {
 public:
  RealLinearOperator() = default;
  explicit RealLinearOperator(RMatrix m);

  static RealLinearOperator identity(std::size_t dim);
  static RealLinearOperator from_complex(const CMatrix& a);

  std::size_t dim() const { return dim_; }
  const RMatrix& matrix() const { return matrix_; }

  std::vector<double> apply(std::span<const double> v) const { return matrix_.apply(v); }
  std::vector<Complex> apply(std::span<const Complex> v) const;

  /// ‖M i − i M‖ (zero for complex-linear maps).
  double linearity_defect() const;
  /// ‖M i + i M‖ (zero for antilinear maps).
  double antilinearity_defect() const;

  friend RealLinearOperator operator*(const RealLinearOperator& a, const RealLinearOperator& b) {
    return RealLinearOperator(a.matrix_ * b.matrix_);
  }
  friend RealLinearOperator operator+(const RealLinearOperator& a, const RealLinearOperator& b) {
    return RealLinearOperator(a.matrix_ + b.matrix_);
  }
  friend RealLinearOperator operator-(const RealLinearOperator& a, const RealLinearOperator& b) {
    return RealLinearOperator(a.matrix_ - b.matrix_);
  }

 private:
  std::size_t dim_ = 0;
  RMatrix matrix_;
};

struct PolarFactors {
  RealLinearOperator j;  // partial isometry, orthogonal when theta is injective
  RealLinearOperator t;  // symmetric positive semidefinite
};

/// theta = j·t.
PolarFactors real_polar(const RealLinearOperator& theta);

// Complex vector helpers used throughout.
double norm(std::span<const Complex> v);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // Σ a_i conj(b_i)
std::vector<Complex> mat_vec(const CMatrix& a, std::span<const Complex> v);

}  // namespace modbench
