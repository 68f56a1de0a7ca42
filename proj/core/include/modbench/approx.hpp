#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "modbench/linalg.hpp"
#include "modbench/modular.hpp"
#include "modbench/rvd.hpp"

namespace modbench {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  BigRational exact() const { return BigRational(num, den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Best continued-fraction convergent with denominator ≤ max_den. Throws
/// InvalidApproximation when the numerator would not fit in 64 bits.
Rational rationalize(double x, std::int64_t max_den = 1'000'000);

struct GaussianRational {
  Rational re;
  Rational im;

  Complex value() const { return {re.value(), im.value()}; }
  friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kIntervalFloor = 1e-3;
inline constexpr double kIntervalPad = 1e-6;
inline constexpr int kMaxDegree = 200;
inline constexpr std::int64_t kMaxDenominator = 1'000'000;

/// Polynomial with Gaussian-rational coefficients in the shifted variable
/// u = (x − center)/half_width, fitted to x ↦ x^{it} on an interval that
/// [center − half_width, center + half_width] contains.
struct PolyApprox {
  double t = 0.0;
  int degree = 0;
  Rational center{1, 1};
  Rational half_width{1, 1};
  std::vector<GaussianRational> coeffs;  // coeffs[k] multiplies u^k
  Interval interval;
  /// Certified bound on sup |x^{it} − p(x)| over the interval.
  double sup_error = 0.0;
  /// Certified bound on sup |p(x)| over the interval.
  double sup_abs = 1.0;
  /// Number of certification sample points actually used.
  std::int64_t samples = 0;

  /// Compensated Horner in u.
  Complex evaluate(double x) const;
  /// p(a) for a square matrix a, by matrix Horner in (a − center)/half_width.
  CMatrix evaluate(const CMatrix& a) const;
};

/// Chebyshev interpolant of x^{it} of the given degree, rationalized and
/// certified. Throws DegreeExhausted when the interval reaches below the
/// 1e-3 floor with t ≠ 0, DomainError for other malformed intervals.
PolyApprox fit_power_it(double t, int degree, Interval interval);

/// Lowest degree ≤ 200 whose certified error is below target. Throws
/// DegreeExhausted otherwise.
PolyApprox fit_power_it_target(double t, double target, Interval interval);

/// Hull of the values padded outward by 1e-6 and clipped to [1e-3, 2 − 1e-3].
Interval spectral_interval(std::span<const double> values);

/// δ_{t,m,n} = 1/m + sup|p_m|/n.
double delta_bound(int m, int n, const PolyApprox& p_m, const PolyApprox& p_n);

/// Sort bound for p(A)x with x ∈ S_K, where A raises total bounds by at most
/// the factor operator_growth g: ⌈K·Σ |c_k| g^k⌉ over the exact monomial
/// coefficients c_k of p in x (moduli bounded above by rationals), capped by
/// the shifted-basis form Σ |b_k| ((g + |center|)/half_width)^k; at least 1.
BigInt polynomial_sort_bound(const PolyApprox& p, int operator_growth, const BigInt& input_sort);

/// Sort index for p_n(R) on S_1. R = P + Q and each of P, Q at most triples
/// the total bound, so R grows it by at most 6.
BigInt q_index(const PolyApprox& p_n);

/// The pair (p_m, p_n) used for Δ^{it} on a space: p_m ≈ x^{it} on the
/// hull of spec(2 − R) to 1/m, p_n ≈ x^{-it} on the hull of spec(R) to 1/n.
struct ModularApprox {
  double t = 0.0;
  int m = 1;
  int n = 1;
  PolyApprox p_m;
  PolyApprox p_n;
  double delta = 0.0;
  BigInt q;
};

ModularApprox approximate_delta_it(const RvdData& rvd, double t, int m, int n);

/// ‖Δ^{it} − p_m(2 − R) p_n(R)‖ with the spectral-route Δ^{it}.
double operator_defect(const ModularData& md, const RvdData& rvd, const ModularApprox& approx);

/// p_m(2 − R) p_n(R) as a matrix on flattened coordinates.
CMatrix polynomial_delta_it(const RvdData& rvd, const ModularApprox& approx);

/// Coefficients a_n = Catalan(n − 1)/2^{2n−1}, n = 1..N, of
/// e^{-|t|} = Σ a_n sech(t)^{2n−1}.
struct SechSeries {
  std::vector<BigRational> coefficients;

  BigRational coefficient_sum() const;
  double partial_sum(double t) const;
  /// 1 − Σ a_n, the tail bound for |sech| ≤ 1.
  double truncation_bound() const;
};

SechSeries sech_series(int terms);

}  // namespace modbench
