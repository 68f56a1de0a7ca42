#include "modbench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace modbench {

// ---------------------------------------------------------------------------
// CMatrix

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ShapeMismatch("CMatrix: entry count " + std::to_string(data_.size()) + " != " +
                        std::to_string(rows) + "x" + std::to_string(cols));
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  CMatrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

Complex CMatrix::trace() const {
  Complex s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("CMatrix +=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("CMatrix -=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw ShapeMismatch("CMatrix *: inner dimensions differ");
  CMatrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

// ---------------------------------------------------------------------------
// RMatrix

RMatrix::RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

RMatrix RMatrix::identity(std::size_t n) {
  RMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RMatrix RMatrix::transpose() const {
  RMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

double RMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

std::vector<double> RMatrix::apply(std::span<const double> v) const {
  if (v.size() != cols_) throw ShapeMismatch("RMatrix::apply: vector length mismatch");
  std::vector<double> r(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

RMatrix& RMatrix::operator+=(const RMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("RMatrix +=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

RMatrix& RMatrix::operator-=(const RMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("RMatrix -=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

RMatrix& RMatrix::operator*=(double s) {
  for (auto& x : data_) x *= s;
  return *this;
}

RMatrix operator*(const RMatrix& a, const RMatrix& b) {
  if (a.cols_ != b.rows_) throw ShapeMismatch("RMatrix *: inner dimensions differ");
  RMatrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

// ---------------------------------------------------------------------------
// Jacobi

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kJacobiRelTol = 1e-13;

inline double conj_of(double x) { return x; }
inline Complex conj_of(Complex z) { return std::conj(z); }
inline double real_of(double x) { return x; }
inline double real_of(Complex z) { return z.real(); }
inline double abs2_of(double x) { return x * x; }
inline double abs2_of(Complex z) { return std::norm(z); }
inline double abs_of(double x) { return std::abs(x); }
inline double abs_of(Complex z) { return std::abs(z); }

template <class Mat>
Mat identity_like(std::size_t n) {
  return Mat::identity(n);
}

// Cyclic Jacobi on a Hermitian (or real symmetric) matrix. Each rotation
// first removes the phase of a_pq, then applies the real Jacobi rotation.
template <class Mat>
std::pair<std::vector<double>, Mat> jacobi(Mat a) {
  using Scalar = std::remove_cvref_t<decltype(a(0, 0))>;
  const std::size_t n = a.rows();
  Mat v = identity_like<Mat>(n);
  const double tol = kJacobiRelTol * a.frobenius_norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += abs2_of(a(i, j));
    return std::sqrt(s);
  };

  bool converged = n <= 1;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (off_norm() <= tol) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        // abs_of rather than sqrt(abs2_of): the square underflows long
        // before the entry itself does, which would skew the phase.
        const double mag = abs_of(apq);
        const double alpha = real_of(a(p, p));
        const double gamma = real_of(a(q, q));
        if (mag == 0.0) continue;
        if (mag < 1e-18 * (std::abs(alpha) + std::abs(gamma))) {
          a(p, q) = Scalar{};
          a(q, p) = Scalar{};
          continue;
        }
        const Scalar phase = apq / mag;
        const double theta = (gamma - alpha) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U restricted to span(e_p, e_q).
        const Scalar upp = c;
        const Scalar upq = s;
        const Scalar uqp = -s * conj_of(phase);
        const Scalar uqq = c * conj_of(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = conj_of(upp) * apk + conj_of(uqp) * aqk;
          a(q, k) = conj_of(upq) * apk + conj_of(uqq) * aqk;
        }
        a(p, q) = Scalar{};
        a(q, p) = Scalar{};
        a(p, p) = real_of(a(p, p));
        a(q, q) = real_of(a(q, q));
        for (std::size_t k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }
  if (!converged && off_norm() > tol) {
    throw NoConvergence("Jacobi eigensolver exceeded " + std::to_string(kMaxSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return real_of(a(i, i)) < real_of(a(j, j)); });
  std::vector<double> eigenvalues(n);
  Mat basis = identity_like<Mat>(n);
  for (std::size_t c = 0; c < n; ++c) {
    eigenvalues[c] = real_of(a(order[c], order[c]));
    for (std::size_t r = 0; r < n; ++r) basis(r, c) = v(r, order[c]);
  }
  return {std::move(eigenvalues), std::move(basis)};
}

}  // namespace

HermEig herm_eig(const CMatrix& a) {
  if (!a.square()) throw ShapeMismatch("herm_eig: matrix not square");
  if (!a.all_finite()) throw DomainError("herm_eig: non-finite entries");
  const double scale = a.frobenius_norm();
  const CMatrix adj = a.adjoint();
  if ((a - adj).frobenius_norm() > 1e-10 * scale) throw NotHermitian("herm_eig: matrix is not Hermitian");
  auto [values, basis] = jacobi((a + adj) * 0.5);
  return HermEig{std::move(values), std::move(basis)};
}

SymEig sym_eig(const RMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("sym_eig: matrix not square");
  const double scale = a.frobenius_norm();
  const RMatrix at = a.transpose();
  if ((a - at).frobenius_norm() > 1e-10 * scale) throw NotHermitian("sym_eig: matrix is not symmetric");
  auto [values, basis] = jacobi((a + at) * 0.5);
  return SymEig{std::move(values), std::move(basis)};
}

RMatrix inverse(const RMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("inverse: matrix not square");
  const std::size_t n = a.rows();
  RMatrix work = a;
  RMatrix inv = RMatrix::identity(n);
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    if (std::abs(work(pivot, col)) <= 1e-14 * scale) throw DomainError("inverse: matrix is singular");
    if (pivot != col)
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(work(pivot, k), work(col, k));
        std::swap(inv(pivot, k), inv(col, k));
      }
    const double d = work(col, col);
    for (std::size_t k = 0; k < n; ++k) {
      work(col, k) /= d;
      inv(col, k) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        work(r, k) -= f * work(col, k);
        inv(r, k) -= f * inv(col, k);
      }
    }
  }
  return inv;
}

double op_norm(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const auto eig = herm_eig(a.adjoint() * a);
  return std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

double op_norm(const RMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const auto eig = sym_eig(a.transpose() * a);
  return std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

CMatrix apply_function(const HermEig& eig, const ScalarFunction& f) {
  const std::size_t n = eig.eigenvalues.size();
  std::vector<Complex> fv(n);
  for (std::size_t k = 0; k < n; ++k) {
    fv[k] = f(eig.eigenvalues[k]);
    if (!std::isfinite(fv[k].real()) || !std::isfinite(fv[k].imag())) {
      throw DomainError("mat_func: function undefined at eigenvalue " + std::to_string(eig.eigenvalues[k]));
    }
  }
  CMatrix r(n, n);
  const CMatrix& u = eig.basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += u(i, k) * fv[k] * std::conj(u(j, k));
      r(i, j) = s;
    }
  return r;
}

CMatrix mat_func(const CMatrix& a, const ScalarFunction& f) { return apply_function(herm_eig(a), f); }

std::vector<std::vector<std::size_t>> cluster_eigenvalues(std::span<const double> ascending) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t k = 0; k < ascending.size(); ++k) {
    if (!clusters.empty()) {
      const double prev = ascending[clusters.back().back()];
      if (std::abs(ascending[k] - prev) <= kClusterRelTol * (1.0 + std::abs(ascending[k]))) {
        clusters.back().push_back(k);
        continue;
      }
    }
    clusters.push_back({k});
  }
  return clusters;
}

// ---------------------------------------------------------------------------
// Realification

std::vector<double> realify(std::span<const Complex> v) {
  const std::size_t n = v.size();
  std::vector<double> r(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    r[k] = v[k].real();
    r[n + k] = v[k].imag();
  }
  return r;
}

std::vector<Complex> complexify(std::span<const double> v) {
  if (v.size() % 2 != 0) throw ShapeMismatch("complexify: odd length");
  const std::size_t n = v.size() / 2;
  std::vector<Complex> r(n);
  for (std::size_t k = 0; k < n; ++k) r[k] = {v[k], v[n + k]};
  return r;
}

RMatrix realify(const CMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  RMatrix r(2 * n, 2 * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Complex z = a(i, j);
      r(i, j) = z.real();
      r(i, m + j) = -z.imag();
      r(n + i, j) = z.imag();
      r(n + i, m + j) = z.real();
    }
  return r;
}

RMatrix imaginary_unit(std::size_t n) {
  RMatrix r(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    r(n + k, k) = 1.0;
    r(k, n + k) = -1.0;
  }
  return r;
}

CMatrix complex_part(const RMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) throw ShapeMismatch("complex_part: expected 2N x 2N");
  const std::size_t n = m.rows() / 2;
  CMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = 0.5 * (m(i, j) + m(n + i, n + j));
      const double im = 0.5 * (m(n + i, j) - m(i, n + j));
      r(i, j) = {re, im};
    }
  return r;
}

RealLinearOperator::RealLinearOperator(RMatrix m) : dim_(m.rows() / 2), matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0) {
    throw ShapeMismatch("RealLinearOperator: expected a 2N x 2N matrix");
  }
}

RealLinearOperator RealLinearOperator::identity(std::size_t dim) {
  return RealLinearOperator(RMatrix::identity(2 * dim));
}

RealLinearOperator RealLinearOperator::from_complex(const CMatrix& a) { return RealLinearOperator(realify(a)); }

std::vector<Complex> RealLinearOperator::apply(std::span<const Complex> v) const {
  const auto r = realify(v);
  return complexify(matrix_.apply(r));
}

double RealLinearOperator::linearity_defect() const {
  const RMatrix i = imaginary_unit(dim_);
  return op_norm(matrix_ * i - i * matrix_);
}

double RealLinearOperator::antilinearity_defect() const {
  const RMatrix i = imaginary_unit(dim_);
  return op_norm(matrix_ * i + i * matrix_);
}

PolarFactors real_polar(const RealLinearOperator& theta) {
  const RMatrix& a = theta.matrix();
  const std::size_t n = a.rows();
  const SymEig eig = sym_eig(a.transpose() * a);
  const double smax = std::sqrt(std::max(0.0, eig.eigenvalues.back()));
  const double cutoff = 1e-12 * std::max(smax, 1e-300);
  RMatrix t(n, n);
  RMatrix inv(n, n);  // pseudo-inverse of t
  const RMatrix& v = eig.basis;
  for (std::size_t k = 0; k < n; ++k) {
    const double sk = std::sqrt(std::max(0.0, eig.eigenvalues[k]));
    const double ik = sk > cutoff ? 1.0 / sk : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double vv = v(i, k) * v(j, k);
        t(i, j) += sk * vv;
        inv(i, j) += ik * vv;
      }
  }
  return PolarFactors{RealLinearOperator(a * inv), RealLinearOperator(std::move(t))};
}

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeMismatch("inner: length mismatch");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::conj(b[k]);
  return s;
}

std::vector<Complex> mat_vec(const CMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw ShapeMismatch("mat_vec: length mismatch");
  std::vector<Complex> r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

}  // namespace modbench
