#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "modbench/linalg.hpp"
#include "oracles.hpp"

using namespace modbench;

namespace {

CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (auto& z : a.entries()) z = {g(rng), g(rng)};
  return (a + a.adjoint()) * Complex(0.5);
}

double max_entry(const CMatrix& a) {
  double m = 0;
  for (auto z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST(HermEig, TwoByTwoMatchesCharacteristicPolynomial) {
  // [[2,1],[1,2]] has λ² − 4λ + 3 = 0.
  CMatrix a(2, 2, {2.0, 1.0, 1.0, 2.0});
  const auto eig = herm_eig(a);
  ASSERT_EQ(eig.eigenvalues.size(), 2u);
  EXPECT_NEAR(eig.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(eig.eigenvalues[1], 3.0, 1e-14);
}

TEST(HermEig, ReconstructsRandomHermitian) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    const CMatrix a = random_hermitian(n, rng);
    const auto eig = herm_eig(a);
    EXPECT_TRUE(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
    const CMatrix back = apply_function(eig, [](double x) { return Complex(x); });
    EXPECT_LT(max_entry(back - a), 1e-10 * (1 + max_entry(a)));
    const CMatrix gram = eig.basis.adjoint() * eig.basis;
    EXPECT_LT(max_entry(gram - CMatrix::identity(n)), 1e-10);
  }
}

TEST(HermEig, KnownSpectrumOfRotatedDiagonal) {
  std::mt19937_64 rng(3);
  const CMatrix u = oracle::random_unitary(4, rng);
  const std::vector<double> d{-1.5, 0.25, 0.25, 4.0};
  const CMatrix a = u * CMatrix::diagonal(d) * u.adjoint();
  const auto eig = herm_eig((a + a.adjoint()) * Complex(0.5));
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(eig.eigenvalues[i], d[i], 1e-12);
}

TEST(HermEig, RejectsNonHermitian) {
  CMatrix a(2, 2, {1.0, 2.0, 0.0, 1.0});
  EXPECT_THROW(herm_eig(a), NotHermitian);
}

TEST(SymEig, RealSymmetric) {
  RMatrix a(2, 2);
  a(0, 0) = 0;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 0;
  const auto eig = sym_eig(a);
  EXPECT_NEAR(eig.eigenvalues[0], -1.0, 1e-14);
  EXPECT_NEAR(eig.eigenvalues[1], 1.0, 1e-14);
}

TEST(MatFunc, SquareRootSquaresBack) {
  CMatrix a(2, 2, {2.0, 1.0, 1.0, 2.0});
  const CMatrix root = mat_func(a, [](double x) { return Complex(std::sqrt(x)); });
  EXPECT_LT(max_entry(root * root - a), 1e-13);
}

TEST(MatFunc, NonFiniteValueIsDomainError) {
  CMatrix a(2, 2, {0.0, 0.0, 0.0, 1.0});
  EXPECT_THROW(mat_func(a, [](double x) { return Complex(1.0 / x); }), DomainError);
}

TEST(OpNorm, AgreesWithPowerIteration) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix a(4, 4);
    for (auto& z : a.entries()) z = {g(rng), g(rng)};
    EXPECT_NEAR(op_norm(a), oracle::power_iteration_norm(a), 1e-9);
  }
  EXPECT_DOUBLE_EQ(op_norm(CMatrix::diagonal(std::vector<double>{3.0, -4.0})), 4.0);
}

TEST(Inverse, RoundTripAndSingular) {
  RMatrix a(2, 2);
  a(0, 0) = 4;
  a(0, 1) = 7;
  a(1, 0) = 2;
  a(1, 1) = 6;
  const RMatrix inv = inverse(a);
  // [[0.6, -0.7], [-0.2, 0.4]]
  EXPECT_NEAR(inv(0, 0), 0.6, 1e-14);
  EXPECT_NEAR(inv(0, 1), -0.7, 1e-14);
  EXPECT_NEAR(inv(1, 0), -0.2, 1e-14);
  EXPECT_NEAR(inv(1, 1), 0.4, 1e-14);
  RMatrix s(2, 2);
  s(0, 0) = 1;
  s(0, 1) = 2;
  s(1, 0) = 2;
  s(1, 1) = 4;
  EXPECT_THROW(inverse(s), DomainError);
}

TEST(ClusterEigenvalues, GroupsNearlyEqualValues) {
  const std::vector<double> v{0.5, 1.0, 1.0 + 1e-12, 2.0};
  const auto groups = cluster_eigenvalues(v);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[1].size(), 2u);
}

TEST(Realify, RoundTripAndComplexPart) {
  std::mt19937_64 rng(9);
  const CMatrix a = random_hermitian(3, rng) + CMatrix::identity(3) * Complex(0, 0.7);
  const std::vector<Complex> v{{1, 2}, {-0.5, 0}, {0, 3}};
  EXPECT_EQ(complexify(realify(v)), v);
  const RMatrix ra = realify(a);
  EXPECT_LT(max_entry(complex_part(ra) - a), 1e-15);
  const auto lhs = complexify(ra.apply(realify(v)));
  const auto rhs = mat_vec(a, v);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_LT(std::abs(lhs[i] - rhs[i]), 1e-14);
  // i² = −1
  const RMatrix i2 = imaginary_unit(3) * imaginary_unit(3);
  EXPECT_LT((i2 + RMatrix::identity(6)).frobenius_norm(), 1e-15);
}

TEST(RealLinearOperator, LinearityDefects) {
  const auto lin = RealLinearOperator::from_complex(CMatrix::diagonal(std::vector<double>{1.0, 2.0}));
  EXPECT_LT(lin.linearity_defect(), 1e-15);
  // complex conjugation on ℂ¹
  RMatrix conj(2, 2);
  conj(0, 0) = 1;
  conj(1, 1) = -1;
  const RealLinearOperator c(conj);
  EXPECT_LT(c.antilinearity_defect(), 1e-15);
  EXPECT_GT(c.linearity_defect(), 1.0);
}

TEST(RealPolar, FactorsMultiplyBack) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  RMatrix m(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = g(rng);
  const RealLinearOperator theta(m);
  const auto polar = real_polar(theta);
  EXPECT_LT((polar.j * polar.t - theta).matrix().frobenius_norm(), 1e-10);
  const RMatrix t = polar.t.matrix();
  EXPECT_LT((t - t.transpose()).frobenius_norm(), 1e-12);
  for (double lambda : sym_eig(t).eigenvalues) EXPECT_GT(lambda, -1e-12);
  const RMatrix jj = polar.j.matrix().transpose() * polar.j.matrix();
  EXPECT_LT((jj - RMatrix::identity(4)).frobenius_norm(), 1e-10);
}
