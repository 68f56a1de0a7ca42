#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "modbench/approx.hpp"
#include "modbench/instance.hpp"
#include "oracles.hpp"

using namespace modbench;

namespace {

// p(x) evaluated in exact rational arithmetic at a rational point.
Complex exact_eval(const PolyApprox& p, const BigRational& x) {
  const BigRational u = (x - p.center.exact()) / p.half_width.exact();
  BigRational re = 0, im = 0;
  for (std::size_t k = p.coeffs.size(); k-- > 0;) {
    re = re * u + p.coeffs[k].re.exact();
    im = im * u + p.coeffs[k].im.exact();
  }
  return {re.convert_to<double>(), im.convert_to<double>()};
}

Complex power_it(double x, double t) { return std::exp(Complex(0, t * std::log(x))); }

// binom(1/2, k) as an exact rational.
BigRational half_choose(int k) {
  BigRational c = 1;
  for (int j = 0; j < k; ++j) c *= (BigRational(1, 2) - j) / BigRational(j + 1);
  return c;
}

}  // namespace

TEST(Rationalize, Convergents) {
  EXPECT_EQ(rationalize(0.5), (Rational{1, 2}));
  EXPECT_EQ(rationalize(-0.75), (Rational{-3, 4}));
  EXPECT_EQ(rationalize(3.141592653589793, 1000), (Rational{355, 113}));
  const auto r = rationalize(0.123456789);
  EXPECT_LE(r.den, kMaxDenominator);
  // a convergent p/q with the next denominator past the cap is within 1/(q·cap)
  EXPECT_LT(std::abs(r.value() - 0.123456789), 1.0 / (static_cast<double>(r.den) * kMaxDenominator));
  EXPECT_THROW(rationalize(1e30), InvalidApproximation);
}

TEST(FitPowerIt, ZeroTimeIsConstantOne) {
  const auto p = fit_power_it(0.0, 4, {0.5, 1.5});
  for (double x : {0.5, 0.8, 1.0, 1.5}) EXPECT_LT(std::abs(p.evaluate(x) - Complex(1.0)), 1e-12);
  EXPECT_LT(p.sup_error, 1e-9);
}

TEST(FitPowerIt, CertifiedErrorHoldsOnIndependentPoints) {
  for (double t : {0.5, 1.0, -1.0}) {
    const Interval iv{2.0 / 3.0, 4.0 / 3.0};
    const auto p = fit_power_it_target(t, 0.1, iv);
    EXPECT_LE(p.sup_error, 0.1);
    for (const auto& c : p.coeffs) {
      EXPECT_LE(c.re.den, kMaxDenominator);
      EXPECT_LE(c.im.den, kMaxDenominator);
    }
    // exact evaluation at 1000 rational points including the endpoints
    double worst = 0;
    const BigRational lo(2, 3), hi(4, 3);
    for (int k = 0; k <= 1000; ++k) {
      const BigRational x = lo + (hi - lo) * BigRational(k, 1000);
      worst = std::max(worst, std::abs(exact_eval(p, x) - power_it(x.convert_to<double>(), t)));
    }
    EXPECT_LE(worst, p.sup_error) << "t=" << t;
  }
}

TEST(FitPowerIt, ErrorShrinksWithDegree) {
  const Interval iv{0.2, 1.8};
  const auto low = fit_power_it(1.0, 6, iv);
  const auto high = fit_power_it(1.0, 24, iv);
  EXPECT_LT(high.sup_error, low.sup_error);
}

TEST(FitPowerIt, IntervalTouchingZeroIsExhausted) {
  EXPECT_THROW(fit_power_it(1.0, 10, {0.0, 1.0}), DegreeExhausted);
  EXPECT_THROW(fit_power_it_target(1.0, 1e-3, {1e-5, 1.0}), DegreeExhausted);
  EXPECT_THROW(fit_power_it(1.0, 10, {1.0, 0.5}), DomainError);
}

TEST(SpectralInterval, PadsOutward) {
  const std::vector<double> v{0.7, 1.0, 1.3};
  const auto iv = spectral_interval(v);
  EXPECT_LT(iv.lo, 0.7);
  EXPECT_GT(iv.hi, 1.3);
  EXPECT_NEAR(iv.lo, 0.7 - kIntervalPad, 1e-12);
}

TEST(SortBound, DegreeOneMonomialRule) {
  // 1 + (x − 1)/(1/2)/4 = 1/2 + x/2, so q ≤ ⌈1/2 + 6·1/2⌉ = 4
  PolyApprox p;
  p.degree = 1;
  p.center = {1, 1};
  p.half_width = {1, 2};
  p.coeffs = {{{1, 1}, {0, 1}}, {{1, 4}, {0, 1}}};
  EXPECT_EQ(q_index(p), BigInt(4));
  EXPECT_EQ(polynomial_sort_bound(p, 6, 3), BigInt(11));  // ⌈3·3.5⌉
  // constant c: ⌈|c|⌉
  PolyApprox c;
  c.coeffs = {{{3, 2}, {2, 1}}};
  EXPECT_EQ(q_index(c), BigInt(3));  // |3/2 + 2i| = 5/2
}

TEST(SortBound, ActualGrowthStaysBelowIndex) {
  const Instance inst(oracle::qubit().space());
  const auto approx = approximate_delta_it(inst.rvd(), 1.0, 10, 10);
  const double q = approx.q.convert_to<double>();
  std::mt19937_64 rng(4);
  const auto pn = approx.p_n.evaluate(complex_part(inst.rvd().r().matrix()));
  for (int i = 0; i < 50; ++i) {
    const auto x = inst.space().sample_sort(1.0, rng);
    const auto v = mat_vec(pn, inst.space().gns_embed(x).flatten());
    const auto y = inst.space().gns_recover(GnsVector{BlockMatrix::unflatten(inst.space().sizes(), v)});
    EXPECT_LE(inst.space().total_bound(y), q);
  }
}

TEST(ModularApprox, QubitDeltaAndSoundness) {
  const Instance inst(oracle::qubit().space());
  const auto a10 = approximate_delta_it(inst.rvd(), 1.0, 10, 10);
  EXPECT_LE(a10.delta, 0.21);
  // δ = 1/m + sup|p_m|/n
  EXPECT_NEAR(a10.delta, 0.1 + a10.p_m.sup_abs / 10, 1e-15);
  EXPECT_LE(operator_defect(inst.modular(), inst.rvd(), a10), a10.delta);
  const auto a100 = approximate_delta_it(inst.rvd(), 1.0, 100, 100);
  EXPECT_LT(a100.delta, a10.delta / 5);
  EXPECT_LE(operator_defect(inst.modular(), inst.rvd(), a100), a100.delta);
}

TEST(ModularApprox, SoundOnRandomInstances) {
  const std::vector<std::vector<std::size_t>> patterns{{2}, {3}, {2, 2}, {2, 3}};
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Instance inst(oracle::random_density(patterns[seed - 1], 200 + seed).space());
    for (double t : {0.5, 1.0}) {
      const auto a = approximate_delta_it(inst.rvd(), t, 50, 10);
      EXPECT_LE(operator_defect(inst.modular(), inst.rvd(), a), a.delta);
    }
  }
}

TEST(ModularApprox, RejectsNonPositiveIndices) {
  const Instance inst(oracle::qubit().space());
  EXPECT_THROW(approximate_delta_it(inst.rvd(), 1.0, 0, 10), DomainError);
}

TEST(SechSeries, FirstCoefficientsExact) {
  const auto s = sech_series(4);
  ASSERT_EQ(s.coefficients.size(), 4u);
  EXPECT_EQ(s.coefficients[0], BigRational(1, 2));
  EXPECT_EQ(s.coefficients[1], BigRational(1, 8));
  EXPECT_EQ(s.coefficients[2], BigRational(1, 16));
  EXPECT_EQ(s.coefficients[3], BigRational(5, 128));
  EXPECT_EQ(s.coefficient_sum(), BigRational(93, 128));
  EXPECT_NEAR(s.partial_sum(0.0), 93.0 / 128.0, 1e-15);
}

TEST(SechSeries, MatchesBinomialExpansion) {
  // e^{-|t|} = (1 − √(1 − s²))/s with s = sech t, and √(1 − w) = Σ binom(1/2, k)(−w)^k.
  const auto s = sech_series(30);
  for (int n = 1; n <= 30; ++n) {
    const BigRational expected = (n % 2 == 0 ? 1 : -1) * half_choose(n) * -1;
    EXPECT_EQ(s.coefficients[n - 1], expected) << "n=" << n;
  }
}

TEST(SechSeries, TruncationBound) {
  const auto s = sech_series(50);
  EXPECT_NEAR(s.partial_sum(0.0), 1.0, 0.08);
  EXPECT_NEAR(s.truncation_bound(), 1.0 - s.coefficient_sum().convert_to<double>(), 1e-15);
  for (double t : {0.0, 0.3, 1.0, 2.5}) {
    EXPECT_LE(std::exp(-std::abs(t)) - s.partial_sum(t), s.truncation_bound() + 1e-15);
    EXPECT_GE(std::exp(-std::abs(t)) - s.partial_sum(t), -1e-15);
  }
  EXPECT_NEAR(sech_series(400).partial_sum(1.0), std::exp(-1.0), 1e-12);
}
