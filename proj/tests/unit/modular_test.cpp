#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modbench/modular.hpp"
#include "oracles.hpp"

using namespace modbench;

namespace {

const std::vector<std::vector<std::size_t>> kPatterns{{2}, {3}, {2, 2}, {2, 3}};

struct Fixture {
  oracle::KnownDensity known;
  WStarSpace space;
  ModularData md;

  explicit Fixture(oracle::KnownDensity k) : known(std::move(k)), space(known.space()), md(build_modular(space)) {}
};

double diff(const GnsVector& a, const BlockMatrix& b) { return oracle::max_abs_diff(a.blocks, b); }

}  // namespace

TEST(Delta, QubitSpectrum) {
  const Fixture f(oracle::qubit());
  const auto spec = f.md.delta_spectrum();
  const std::vector<double> expected{0.5, 1.0, 1.0, 2.0};
  ASSERT_EQ(spec.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(spec[i], expected[i], 1e-9);
}

TEST(Delta, SpectrumIsRatiosOfDensityEigenvalues) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Fixture f(oracle::random_density(kPatterns[seed % 4], seed));
    const auto expected = f.known.delta_spectrum();
    const auto spec = f.md.delta_spectrum();
    ASSERT_EQ(spec.size(), expected.size());
    for (std::size_t i = 0; i < spec.size(); ++i) EXPECT_NEAR(spec[i], expected[i], 1e-9 * (1 + expected[i]));
  }
}

TEST(Delta, PowersMatchConjugationByDensity) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Fixture f(oracle::random_density(kPatterns[seed % 4], 20 + seed));
    std::mt19937_64 rng(seed);
    const GnsVector xi{f.space.sample_gaussian(rng).blocks};
    for (Complex z : {Complex(1), Complex(0.5), Complex(0, 1.0), Complex(0, -2.0), Complex(0.25, 0.75)}) {
      const auto lhs = delta_power(f.md, z, xi);
      EXPECT_LT(diff(lhs, oracle::delta_power(f.known, z, xi.blocks)), 1e-9) << "z=" << z;
    }
  }
}

TEST(Delta, FixesOmegaAndIsUnitaryAtImaginaryPowers) {
  const Fixture f(oracle::random_density({2, 3}, 3));
  const auto omega = f.space.omega();
  EXPECT_LT(diff(delta_power(f.md, 1.0, omega), omega.blocks), 1e-12);
  std::mt19937_64 rng(3);
  const GnsVector xi{f.space.sample_gaussian(rng).blocks};
  EXPECT_NEAR(delta_power(f.md, Complex(0, 1.7), xi).norm(), xi.norm(), 1e-12);
  EXPECT_LT(diff(delta_power(f.md, 0.0, xi), xi.blocks), 1e-12);
}

TEST(Tomita, MapsXOmegaToAdjointAndFactorsThroughJ) {
  const Fixture f(oracle::random_density({2, 2}, 4));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    const auto x = f.space.sample_gaussian(rng);
    const auto sx = f.md.apply_tomita(f.space.gns_embed(x));
    EXPECT_LT(diff(sx, f.space.gns_embed(x.adjoint()).blocks), 1e-9);
    // J ξ = ξ† in this model
    const GnsVector xi{x.blocks};
    EXPECT_LT(diff(f.md.apply_conjugation(xi), x.blocks.adjoint()), 1e-9);
  }
  const auto omega = f.space.omega();
  EXPECT_LT(diff(f.md.apply_conjugation(omega), omega.blocks), 1e-9);
  EXPECT_LT(f.md.conjugation().antilinearity_defect(), 1e-9);
}

TEST(Sigma, QubitMatrixUnitPicksUpPhase) {
  const Fixture f(oracle::qubit());
  const auto e12 = f.space.unit(0, 0, 1);
  const double t = 1.0;
  const auto s = sigma_t(f.md, e12, t);
  // σ_t(e12) = (ρ₁/ρ₂)^{it} e12 = 2^{it} e12
  const Complex phase = std::exp(Complex(0, t * std::log(2.0)));
  EXPECT_LT(oracle::max_abs_diff(s.blocks, (phase * e12).blocks), 1e-10);
}

TEST(Sigma, TracialIsIdentity) {
  const Fixture f(oracle::tracial_qubit());
  std::mt19937_64 rng(5);
  const auto x = f.space.sample_gaussian(rng);
  EXPECT_LT(oracle::max_abs_diff(sigma_t(f.md, x, 0.7).blocks, x.blocks), 1e-10);
}

TEST(Sigma, AutomorphismGroupPreservingState) {
  const Fixture f(oracle::random_density({2, 3}, 6));
  std::mt19937_64 rng(6);
  const auto x = f.space.sample_gaussian(rng);
  const auto y = f.space.sample_gaussian(rng);
  const double s = 0.3, t = -1.1;
  const auto composed = sigma_t(f.md, sigma_t(f.md, x, t), s);
  EXPECT_LT(oracle::max_abs_diff(composed.blocks, sigma_t(f.md, x, s + t).blocks), 1e-9);
  const auto prod = sigma_t(f.md, x * y, t);
  EXPECT_LT(oracle::max_abs_diff(prod.blocks, (sigma_t(f.md, x, t) * sigma_t(f.md, y, t)).blocks), 1e-9);
  const auto adj = sigma_t(f.md, x.adjoint(), t);
  EXPECT_LT(oracle::max_abs_diff(adj.blocks, sigma_t(f.md, x, t).adjoint().blocks), 1e-9);
  EXPECT_LT(std::abs(f.space.state(sigma_t(f.md, x, t)) - f.space.state(x)), 1e-10);
  const auto expected = f.known.power(Complex(0, t)) * x.blocks * f.known.power(Complex(0, -t));
  EXPECT_LT(oracle::max_abs_diff(sigma_t(f.md, x, t).blocks, expected), 1e-9);
}

TEST(Sigma, KmsCondition) {
  const Fixture f(oracle::random_density({3}, 7));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5; ++i) {
    const auto x = f.space.sample_gaussian(rng);
    const auto y = f.space.sample_gaussian(rng);
    // φ(x σ_{-i}(y)) = φ(y x)
    const Complex lhs = f.space.state(x * sigma_z(f.md, y, Complex(0, -1)));
    const Complex rhs = f.space.state(y * x);
    EXPECT_LT(std::abs(lhs - rhs), 1e-9 * (1 + std::abs(rhs)));
  }
}

TEST(SpectralSplit, QubitPieces) {
  const Fixture f(oracle::qubit());
  const auto split = spectral_split(f.md, 3.0);
  const auto e12 = f.space.gns_embed(f.space.unit(0, 0, 1));
  const auto e21 = f.space.gns_embed(f.space.unit(0, 1, 0));
  EXPECT_LT(diff(split.project(SpectralPiece::plus, e12), e12.blocks), 1e-12);
  EXPECT_LT(split.project(SpectralPiece::minus, e12).norm(), 1e-12);
  EXPECT_LT(diff(split.project(SpectralPiece::minus, e21), e21.blocks), 1e-12);
  const auto omega = f.space.omega();
  EXPECT_LT(diff(split.project(SpectralPiece::center, omega), omega.blocks), 1e-12);
  // the pieces are orthogonal projections summing to the identity
  const CMatrix sum = split.minus + split.center + split.plus + split.complement;
  EXPECT_NEAR((sum - CMatrix::identity(4)).frobenius_norm(), 0.0, 1e-12);
  EXPECT_NEAR((split.plus * split.plus - split.plus).frobenius_norm(), 0.0, 1e-12);
  EXPECT_NEAR((split.plus * split.minus).frobenius_norm(), 0.0, 1e-12);
}

TEST(SpectralSplit, Errors) {
  const Fixture f(oracle::qubit());
  EXPECT_THROW(spectral_split(f.md, 2.0), BoundaryCollision);
  EXPECT_THROW(spectral_split(f.md, 1.0), DomainError);
}

TEST(Multipliers, QubitValues) {
  const Fixture f(oracle::qubit());
  const auto e12 = f.space.gns_embed(f.space.unit(0, 0, 1));
  // log Δ = ln 2 on e12: sech(ln 2) = 0.8, e^{-ln 2} = 0.5
  EXPECT_LT(diff(multiplier(f.md, MultiplierKind::h, 0.0, e12), (Complex(0.8) * e12).blocks), 1e-10);
  EXPECT_LT(diff(multiplier(f.md, MultiplierKind::f, 0.0, e12), (Complex(0.5) * e12).blocks), 1e-10);
  EXPECT_NEAR(multiplier_value(MultiplierKind::h, 0.0, std::log(2.0)), 0.8, 1e-15);
}

TEST(Multipliers, TracialHIsSech) {
  const Fixture f(oracle::tracial_qubit());
  std::mt19937_64 rng(8);
  const GnsVector xi{f.space.sample_gaussian(rng).blocks};
  for (double a : {0.0, 1.0, 2.0}) {
    const auto out = multiplier(f.md, MultiplierKind::h, a, xi);
    EXPECT_LT(diff(out, (Complex(1.0 / std::cosh(a)) * xi).blocks), 1e-10);
  }
}

TEST(Multipliers, GOnCenterIsTanh) {
  const Fixture f(oracle::qubit());
  const auto omega = f.space.omega();
  for (double a : {0.0, std::log(2.0), 1.0, 3.0}) {
    const auto out = g_multiplier_on_center(f.md, a, omega);
    EXPECT_LT(diff(out, (Complex(std::tanh(a)) * omega).blocks), 1e-10);
  }
  EXPECT_LT(diff(g_multiplier_on_center(f.md, std::log(2.0), omega), (Complex(0.6) * omega).blocks), 1e-10);
  const auto e12 = f.space.gns_embed(f.space.unit(0, 0, 1));
  EXPECT_THROW(g_multiplier_on_center(f.md, 1.0, e12), NotCentered);
}

TEST(GInverse, QubitClosedForm) {
  const Fixture f(oracle::qubit());
  const double a = std::log(3.0);
  const auto e12 = f.space.gns_embed(f.space.unit(0, 0, 1));
  // g_{ln 3}(ln 2) = 1/2 − (2/3 + 1/6)/(10/3) = 1/4
  EXPECT_NEAR(multiplier_value(MultiplierKind::g, a, std::log(2.0)), 0.25, 1e-14);
  const auto series = g_inverse_series(f.md, a, SpectralPiece::plus, e12);
  EXPECT_LT(diff(series.value, (Complex(4.0) * e12).blocks), 1e-8);
  const auto direct = g_inverse_direct(f.md, a, SpectralPiece::plus, e12);
  EXPECT_LT(diff(direct, (Complex(4.0) * e12).blocks), 1e-12);
  const auto zero = g_inverse_series(f.md, a, SpectralPiece::plus, GnsVector{BlockMatrix::zeros(f.space.sizes())});
  EXPECT_LT(zero.value.norm(), 1e-15);
  EXPECT_THROW(g_inverse_series(f.md, a, SpectralPiece::plus, f.space.omega()), WrongSupport);
}

TEST(GInverse, SeriesMatchesEigenvaluewiseAndRoundTrips) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Fixture f(oracle::random_density(kPatterns[seed % 4], 40 + seed));
    std::mt19937_64 rng(seed);
    const double a = 2.0;
    SpectralSplit split;
    try {
      split = spectral_split(f.md, std::exp(a));
    } catch (const BoundaryCollision&) {
      continue;
    }
    for (auto piece : {SpectralPiece::plus, SpectralPiece::minus}) {
      const auto xi = split.project(piece, GnsVector{f.space.sample_gaussian(rng).blocks});
      const auto series = g_inverse_series(f.md, a, piece, xi);
      const auto direct = g_inverse_direct(f.md, a, piece, xi);
      EXPECT_LT(diff(series.value, direct.blocks), 1e-8 * (1 + direct.norm()));
      const auto back = multiplier(f.md, MultiplierKind::g, a, series.value);
      EXPECT_LT(diff(back, xi.blocks), 1e-8 * (1 + xi.norm()));
    }
  }
}

TEST(Resolvent, QubitInverseDeltaAtMinusOne) {
  const Fixture f(oracle::qubit());
  const auto e12 = f.space.gns_embed(f.space.unit(0, 0, 1));
  const auto res = resolvent(f.md, -1.0, e12, true);
  // (Δ^{-1} + 1)^{-1} at Δ = 2 is 2/3
  EXPECT_LT(diff(res.value, (Complex(2.0 / 3.0) * e12).blocks), 1e-12);
  EXPECT_NEAR(res.certificate.denominator, 2.0, 1e-15);
  // y' = right multiplication whose vector is (2/3)e12ρ^{1/2}; its right norm is that of (2/3)e12
  EXPECT_NEAR(res.certificate.output_right_norm, 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(res.certificate.right_bound(), std::sqrt(2.0) / 2.0, 1e-10);
  EXPECT_TRUE(res.certificate.holds());
}

TEST(Resolvent, OmegaAtImaginaryUnit) {
  const Fixture f(oracle::qubit());
  const auto omega = f.space.omega();
  const Complex lambda(0, 1);
  const auto res = resolvent(f.md, lambda, omega, false);
  EXPECT_LT(diff(res.value, (1.0 / (1.0 - lambda) * omega).blocks), 1e-12);
  EXPECT_THROW(resolvent(f.md, 1.0, omega, false), LambdaOnRay);
}

TEST(Resolvent, InvertsDeltaMinusLambda) {
  const Fixture f(oracle::random_density({2, 3}, 9));
  std::mt19937_64 rng(9);
  const GnsVector xi{f.space.sample_gaussian(rng).blocks};
  const Complex lambda(-2, 3);
  const auto y = resolvent(f.md, lambda, xi, false).value;
  const auto back = delta_power(f.md, 1.0, y) - lambda * y;
  EXPECT_LT(diff(back, xi.blocks), 1e-10);
}

TEST(Gaussian, QubitFactorAndLimits) {
  const Fixture f(oracle::qubit());
  const auto e12 = f.space.gns_embed(f.space.unit(0, 0, 1));
  const double factor = std::exp(-std::pow(std::log(2.0), 2) / 4.0);
  EXPECT_LT(diff(gaussian_smooth(f.md, e12, 1.0), (Complex(factor) * e12).blocks), 1e-10);
  // larger r smooths less: the distance to ξ shrinks as r grows
  double previous = 2.0;
  for (double r : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double d = (gaussian_smooth(f.md, e12, r) - e12).norm();
    EXPECT_LT(d, previous);
    previous = d;
  }
  EXPECT_LT((gaussian_smooth(f.md, e12, 1e8) - e12).norm(), 1e-8);
}

TEST(Gaussian, TracialIsIdentity) {
  const Fixture f(oracle::tracial_qubit());
  std::mt19937_64 rng(10);
  const GnsVector xi{f.space.sample_gaussian(rng).blocks};
  EXPECT_LT(diff(gaussian_smooth(f.md, xi, 0.3), xi.blocks), 1e-12);
}

TEST(Gaussian, MatchesQuadratureOfUnitaryGroup) {
  // ∫ √(r/π) e^{-rt²} Δ^{it} ξ dt by trapezoid on [−12, 12] against the
  // closed-form oracle for Δ^{it}.
  const Fixture f(oracle::random_density({2, 2}, 11));
  std::mt19937_64 rng(11);
  const GnsVector xi{f.space.sample_gaussian(rng).blocks};
  const double r = 0.5;
  const int steps = 6000;
  const double lo = -12.0, h = 24.0 / steps;
  BlockMatrix acc = BlockMatrix::zeros(f.space.sizes());
  for (int k = 0; k <= steps; ++k) {
    const double t = lo + k * h;
    const double w = (k == 0 || k == steps ? 0.5 : 1.0) * h * std::sqrt(r / std::numbers::pi) * std::exp(-r * t * t);
    acc += Complex(w) * oracle::delta_power(f.known, Complex(0, t), xi.blocks);
  }
  EXPECT_LT(diff(gaussian_smooth(f.md, xi, r), acc), 1e-8);
}
