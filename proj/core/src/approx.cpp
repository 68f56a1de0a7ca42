#include "modbench/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace modbench {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::int64_t kMinSamples = 10'000;
constexpr std::int64_t kMaxSamples = 1'000'000;
constexpr int kEstimatePoints = 400;

using LComplex = std::complex<long double>;

Rational reduced(std::int64_t num, std::int64_t den) {
  const std::int64_t g = std::gcd(num, den);
  return g > 1 ? Rational{num / g, den / g} : Rational{num, den};
}

Complex target_value(double t, double x) {
  if (t == 0.0) return 1.0;
  const double phase = t * std::log(x);
  return {std::cos(phase), std::sin(phase)};
}

// Error-free transforms.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double z = s - a;
  e = (a - (s - z)) + (b - z);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

double compensated_horner(std::span<const double> a, double u) {
  if (a.empty()) return 0.0;
  double s = a.back();
  double c = 0.0;
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    double p, pi, sigma;
    two_prod(s, u, p, pi);
    two_sum(p, a[k], s, sigma);
    c = c * u + (pi + sigma);
  }
  return s + c;
}

struct DoubleCoeffs {
  std::vector<double> re;
  std::vector<double> im;
};

DoubleCoeffs to_double(const std::vector<GaussianRational>& coeffs) {
  DoubleCoeffs d;
  for (const auto& c : coeffs) {
    d.re.push_back(c.re.value());
    d.im.push_back(c.im.value());
  }
  return d;
}

double shifted(const PolyApprox& p, double x) { return (x - p.center.value()) / p.half_width.value(); }

// Chebyshev coefficients of g sampled at the degree+1 first-kind nodes on
// [-1, 1].
template <class Fn>
std::vector<LComplex> chebyshev_coefficients(int degree, Fn g) {
  const int n = degree + 1;
  std::vector<LComplex> values(n);
  for (int j = 0; j < n; ++j) values[j] = g(std::cos(std::numbers::pi_v<long double> * (j + 0.5L) / n));
  std::vector<LComplex> c(n);
  for (int k = 0; k < n; ++k) {
    LComplex s = 0.0L;
    for (int j = 0; j < n; ++j) s += values[j] * std::cos(std::numbers::pi_v<long double> * k * (j + 0.5L) / n);
    c[k] = s * (2.0L / n);
  }
  c[0] *= 0.5L;
  return c;
}

std::vector<LComplex> chebyshev_to_monomial(const std::vector<LComplex>& c) {
  const std::size_t n = c.size();
  std::vector<LComplex> out(n);
  std::vector<long double> prev(n), cur(n), next(n);
  prev[0] = 1.0L;  // T_0
  out[0] += c[0];
  if (n == 1) return out;
  cur[1] = 1.0L;  // T_1
  out[1] += c[1];
  for (std::size_t k = 2; k < n; ++k) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] += 2.0L * cur[i];
    for (std::size_t i = 0; i < n; ++i) next[i] -= prev[i];
    for (std::size_t i = 0; i < n; ++i) out[i] += c[k] * next[i];
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return out;
}

void trim(std::vector<GaussianRational>& coeffs) {
  while (coeffs.size() > 1 && coeffs.back().re.num == 0 && coeffs.back().im.num == 0) coeffs.pop_back();
}

// Domain [c − h, c + h] ⊇ [lo, hi] with c and h on a 10⁻⁶ grid.
void choose_domain(PolyApprox& p) {
  constexpr std::int64_t grid = 1'000'000;
  const double mid = 0.5 * (p.interval.lo + p.interval.hi);
  const auto c_num = static_cast<std::int64_t>(std::llround(mid * grid));
  p.center = reduced(c_num, grid);
  const double c = p.center.value();
  const double need = std::max(p.interval.hi - c, c - p.interval.lo);
  auto h_num = static_cast<std::int64_t>(std::ceil(need * grid * (1.0 + 1e-12))) + 1;
  h_num = std::max<std::int64_t>(h_num, 1);
  p.half_width = reduced(h_num, grid);
}

// The candidate polynomial of a given degree, coefficients rationalized.
PolyApprox interpolate(double t, int degree, const Interval& interval) {
  PolyApprox p;
  p.t = t;
  p.interval = interval;
  choose_domain(p);
  const long double c = p.center.value();
  const long double h = p.half_width.value();
  const auto cheb = chebyshev_coefficients(degree, [&](long double u) {
    const long double x = c + h * u;
    if (t == 0.0) return LComplex(1.0L);
    const long double phase = static_cast<long double>(t) * std::log(x);
    return LComplex(std::cos(phase), std::sin(phase));
  });
  const auto mono = chebyshev_to_monomial(cheb);
  for (const auto& z : mono) {
    p.coeffs.push_back({rationalize(static_cast<double>(z.real()), kMaxDenominator),
                        rationalize(static_cast<double>(z.imag()), kMaxDenominator)});
  }
  trim(p.coeffs);
  p.degree = static_cast<int>(p.coeffs.size()) - 1;
  return p;
}

// Upper bounds on |p'(u)| and |p''(u)| over [-1, 1], from Markov's
// inequalities on a Chebyshev re-expansion, capped by the monomial bounds.
struct DerivativeBounds {
  double first = 0.0;
  double second = 0.0;
};

DerivativeBounds derivative_bounds(const PolyApprox& p, const DoubleCoeffs& d) {
  DerivativeBounds b;
  if (p.degree == 0) return b;
  double mono1 = 0.0, mono2 = 0.0;
  for (int k = 1; k <= p.degree; ++k) {
    const double mag = std::abs(d.re[k]) + std::abs(d.im[k]);
    mono1 += k * mag;
    mono2 += static_cast<double>(k) * (k - 1) * mag;
  }
  const auto cheb = chebyshev_coefficients(p.degree, [&](long double u) {
    const double ud = static_cast<double>(u);
    return LComplex(compensated_horner(d.re, ud), compensated_horner(d.im, ud));
  });
  double markov1 = 0.0, markov2 = 0.0;
  for (int k = 1; k <= p.degree; ++k) {
    const double mag = static_cast<double>(std::abs(cheb[k]));
    const double k2 = static_cast<double>(k) * k;
    markov1 += k2 * mag;
    markov2 += k2 * (k2 - 1.0) / 3.0 * mag;
  }
  // Slack for the re-expansion's own rounding.
  const double slack = 1e-9 * (1.0 + mono1);
  b.first = std::min(mono1, markov1 * (1.0 + 1e-6) + slack);
  b.second = std::min(mono2, markov2 * (1.0 + 1e-6) + slack * p.degree);
  return b;
}

// Rounding budget for evaluating p in double: coefficient conversion is
// measured exactly, Horner and the shift are bounded a priori.
double evaluation_error(const PolyApprox& p, const DoubleCoeffs& d, double du) {
  BigRational conversion = 0;
  double abs_sum = 0.0;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    const BigRational dr = BigRational(d.re[k]) - p.coeffs[k].re.exact();
    const BigRational di = BigRational(d.im[k]) - p.coeffs[k].im.exact();
    conversion += boost::multiprecision::abs(dr) + boost::multiprecision::abs(di);
    abs_sum += std::abs(d.re[k]) + std::abs(d.im[k]);
  }
  double err = conversion.convert_to<double>() * (1.0 + 1e-12);
  if (p.degree > 0) {
    const double gamma = 4.0 * (p.degree + 1) * kEps;
    err += 2.0 * kEps * abs_sum + gamma * gamma * abs_sum + 8.0 * kEps * du;
  }
  return err;
}

}  // namespace

// ---------------------------------------------------------------------------

Rational rationalize(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw InvalidApproximation("rationalize: non-finite value");
  if (max_den < 1) throw DomainError("rationalize: max_den must be positive");
  constexpr long double limit = 9.0e18L;
  const bool negative = x < 0.0;
  long double r = std::abs(static_cast<long double>(x));
  if (r >= limit) throw InvalidApproximation("rationalize: value too large for 64-bit numerator");

  long double h2 = 0, h1 = 1, k2 = 1, k1 = 0;  // convergents h/k
  long double best_h = std::floor(r), best_k = 1;
  for (int iter = 0; iter < 64; ++iter) {
    const long double a = std::floor(r);
    const long double h = a * h1 + h2;
    const long double k = a * k1 + k2;
    if (k > max_den) {
      // Semiconvergent with the largest admissible denominator.
      const long double n = std::floor((max_den - k2) / k1);
      const long double sh = n * h1 + h2;
      const long double sk = n * k1 + k2;
      const long double target = std::abs(static_cast<long double>(x));
      if (sk >= 1 && std::abs(sh / sk - target) < std::abs(best_h / best_k - target)) {
        best_h = sh;
        best_k = sk;
      }
      break;
    }
    if (h >= limit) throw InvalidApproximation("rationalize: numerator overflow");
    best_h = h;
    best_k = k;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const long double frac = r - a;
    if (frac <= 1e-30L) break;
    r = 1.0L / frac;
  }
  const auto num = static_cast<std::int64_t>(best_h);
  const auto den = static_cast<std::int64_t>(best_k);
  return reduced(negative ? -num : num, den);
}

Complex PolyApprox::evaluate(double x) const {
  const DoubleCoeffs d = to_double(coeffs);
  const double u = shifted(*this, x);
  return {compensated_horner(d.re, u), compensated_horner(d.im, u)};
}

CMatrix PolyApprox::evaluate(const CMatrix& a) const {
  if (!a.square()) throw ShapeMismatch("PolyApprox::evaluate: matrix not square");
  const std::size_t n = a.rows();
  const CMatrix id = CMatrix::identity(n);
  const CMatrix u = (a - id * Complex(center.value())) * Complex(1.0 / half_width.value());
  CMatrix acc = id * coeffs.back().value();
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * u + id * coeffs[k].value();
  return acc;
}

namespace {

struct Certificate {
  double sup_error = 0.0;
  double sup_abs = 0.0;
  std::int64_t samples = 0;
};

Certificate certify(const PolyApprox& p) {
  const DoubleCoeffs d = to_double(p.coeffs);
  const double h = p.half_width.value();
  const DerivativeBounds du = derivative_bounds(p, d);
  const double dx1 = du.first / h;
  const double dx2 = du.second / (h * h);
  const double fp = evaluation_error(p, d, du.first);
  const double t = std::abs(p.t);
  const double lo = p.interval.lo;
  const double hi = p.interval.hi;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  Certificate cert;
  for (std::int64_t count = kMinSamples;; count = std::min(kMaxSamples, count * 4)) {
    double sampled = 0.0, fill = 0.0, err_bound = 0.0, abs_bound = 0.0;
    double prev_x = 0.0, prev_e = 0.0, prev_a = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
      // Second-kind Chebyshev points, ascending, endpoints included.
      const double x = i == 0 ? lo
                       : i == count - 1
                           ? hi
                           : mid - half * std::cos(std::numbers::pi * static_cast<double>(i) / (count - 1));
      const double u = shifted(p, x);
      const Complex pv(compensated_horner(d.re, u), compensated_horner(d.im, u));
      const Complex fv = target_value(p.t, x);
      const double f_err = p.t == 0.0 ? 0.0 : 8.0 * kEps * (1.0 + t * std::abs(std::log(x)));
      const double e = std::abs(fv - pv) + f_err;
      const double av = std::abs(pv);
      sampled = std::max(sampled, e);
      if (i > 0) {
        const double gap = x - prev_x;
        // |e'| ≤ |t|/x + |p'| (Lipschitz) or, to second order,
        // |e''| ≤ (|t| + t²)/x² + |p''| (real and imaginary parts separately).
        const double first_order = (t / prev_x + dx1) * gap / 2.0;
        const double second_order =
            std::numbers::sqrt2 * ((t + t * t) / (prev_x * prev_x) + dx2) * gap * gap / 8.0;
        const double grow = std::min(first_order, second_order);
        fill = std::max(fill, grow);
        err_bound = std::max(err_bound, std::max(e, prev_e) + grow);
        const double grow_abs =
            std::min(dx1 * gap / 2.0, std::numbers::sqrt2 * dx2 * gap * gap / 8.0);
        abs_bound = std::max(abs_bound, std::max(av, prev_a) + grow_abs);
      } else {
        err_bound = e;
        abs_bound = av;
      }
      prev_x = x;
      prev_e = e;
      prev_a = av;
    }
    cert.samples = count;
    cert.sup_error = err_bound + fp;
    cert.sup_abs = std::min(abs_bound + fp, 1.0 + cert.sup_error);
    if (fill <= 0.25 * std::max(sampled, 1e-14) || count >= kMaxSamples) break;
  }
  return cert;
}

void validate_interval(double t, const Interval& interval) {
  if (!(interval.hi >= interval.lo) || !std::isfinite(interval.lo) || !std::isfinite(interval.hi)) {
    throw DomainError("fit_power_it: malformed interval");
  }
  if (interval.hi > 2.0 - kIntervalFloor + 1e-12) throw DomainError("fit_power_it: interval exceeds 2 - 1e-3");
  if (interval.lo < kIntervalFloor - 1e-12) {
    if (t != 0.0) {
      throw DegreeExhausted("fit_power_it: x^{it} oscillates without bound near 0; interval reaches below 1e-3");
    }
    if (interval.lo <= 0.0) throw DomainError("fit_power_it: interval must be positive");
  }
}

double estimate_error(const PolyApprox& p) {
  const DoubleCoeffs d = to_double(p.coeffs);
  const double mid = 0.5 * (p.interval.lo + p.interval.hi);
  const double half = 0.5 * (p.interval.hi - p.interval.lo);
  double e = 0.0;
  for (int i = 0; i < kEstimatePoints; ++i) {
    const double x = mid - half * std::cos(std::numbers::pi * i / (kEstimatePoints - 1));
    const double u = shifted(p, x);
    e = std::max(e, std::abs(target_value(p.t, x) - Complex(compensated_horner(d.re, u), compensated_horner(d.im, u))));
  }
  return e;
}

}  // namespace

PolyApprox fit_power_it(double t, int degree, Interval interval) {
  if (degree < 0 || degree > kMaxDegree) throw DomainError("fit_power_it: degree must lie in [0, 200]");
  validate_interval(t, interval);
  PolyApprox p = interpolate(t, degree, interval);
  const Certificate cert = certify(p);
  p.sup_error = cert.sup_error;
  p.sup_abs = cert.sup_abs;
  p.samples = cert.samples;
  return p;
}

PolyApprox fit_power_it_target(double t, double target, Interval interval) {
  if (!(target > 0.0)) throw DomainError("fit_power_it_target: target must be positive");
  validate_interval(t, interval);
  for (int degree = 0; degree <= kMaxDegree; ++degree) {
    PolyApprox p;
    try {
      p = interpolate(t, degree, interval);
    } catch (const InvalidApproximation&) {
      continue;  // coefficients outgrew 64-bit rationals; higher degrees only grow
    }
    if (estimate_error(p) >= 0.5 * target) continue;
    const Certificate cert = certify(p);
    if (cert.sup_error < target) {
      p.sup_error = cert.sup_error;
      p.sup_abs = cert.sup_abs;
      p.samples = cert.samples;
      return p;
    }
  }
  throw DegreeExhausted("fit_power_it_target: no degree <= 200 certifies error " + std::to_string(target));
}

Interval spectral_interval(std::span<const double> values) {
  if (values.empty()) throw DomainError("spectral_interval: no values");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  Interval iv{*mn - kIntervalPad, *mx + kIntervalPad};
  if (iv.lo < kIntervalFloor && *mn >= kIntervalFloor) iv.lo = kIntervalFloor;
  if (iv.hi > 2.0 - kIntervalFloor && *mx <= 2.0 - kIntervalFloor) iv.hi = 2.0 - kIntervalFloor;
  return iv;
}

double delta_bound(int m, int n, const PolyApprox& p_m, const PolyApprox& p_n) {
  if (m < 1 || n < 1) throw DomainError("delta_bound: m and n must be positive");
  if (!(p_m.sup_error < 1.0 / m) || !(p_n.sup_error < 1.0 / n)) {
    throw InvalidApproximation("delta_bound: approximations do not meet the 1/m, 1/n targets");
  }
  // ‖f_{-t}‖_∞ = 1 on the positive reals.
  return 1.0 / m + p_m.sup_abs / n;
}

namespace {

// Rational upper bound on |re + i·im|, exact when either part vanishes.
BigRational modulus_upper(const GaussianRational& z) {
  const BigRational re = boost::multiprecision::abs(z.re.exact());
  const BigRational im = boost::multiprecision::abs(z.im.exact());
  if (im == 0) return re;
  if (re == 0) return im;
  const BigRational square = re * re + im * im;
  double root = std::sqrt(square.convert_to<double>());
  while (BigRational(root) * BigRational(root) < square) root = std::nextafter(root, 2.0 * root + 1.0);
  return BigRational(root);
}

}  // namespace

namespace {

BigInt ceil_positive(const BigRational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt q = (num + den - 1) / den;
  return q < 1 ? BigInt(1) : q;
}

// Σ|b_k| G^k with G = (growth + |c|)/h, straight from the shifted basis.
BigRational shifted_bound(const PolyApprox& p, int operator_growth) {
  const BigRational c = boost::multiprecision::abs(p.center.exact());
  const BigRational growth = (BigRational(operator_growth) + c) / p.half_width.exact();
  BigRational sum = 0;
  BigRational power = 1;
  for (const auto& coeff : p.coeffs) {
    sum += modulus_upper(coeff) * power;
    power *= growth;
  }
  return sum;
}

// Σ|c_k| growth^k over the exact monomial coefficients in x. Never larger
// than the shifted bound (triangle inequality), often much smaller.
BigRational monomial_bound(const PolyApprox& p, int operator_growth) {
  const std::size_t len = p.coeffs.size();
  const BigRational c = p.center.exact();
  const BigRational inv_h = 1 / p.half_width.exact();
  // Horner in (x - c)/h with exact Gaussian-rational arithmetic.
  std::vector<BigRational> re(len, 0), im(len, 0);
  std::size_t used = 0;
  for (std::size_t k = len; k-- > 0;) {
    // multiply current polynomial by (x - c)/h
    if (used > 0) {
      std::vector<BigRational> nre(used + 1, 0), nim(used + 1, 0);
      for (std::size_t j = 0; j < used; ++j) {
        nre[j + 1] += re[j] * inv_h;
        nim[j + 1] += im[j] * inv_h;
        nre[j] -= re[j] * c * inv_h;
        nim[j] -= im[j] * c * inv_h;
      }
      std::copy(nre.begin(), nre.end(), re.begin());
      std::copy(nim.begin(), nim.end(), im.begin());
    }
    re[0] += p.coeffs[k].re.exact();
    im[0] += p.coeffs[k].im.exact();
    used = std::min(used + 1, len);
  }
  BigRational sum = 0;
  BigRational power = 1;
  for (std::size_t k = 0; k < len; ++k) {
    const BigRational a = boost::multiprecision::abs(re[k]);
    const BigRational b = boost::multiprecision::abs(im[k]);
    BigRational modulus = a + b;
    if (a != 0 && b != 0) {
      const BigRational square = a * a + b * b;
      double root = std::sqrt(square.convert_to<double>());
      while (BigRational(root) * BigRational(root) < square) root = std::nextafter(root, 2.0 * root + 1.0);
      modulus = std::min(modulus, BigRational(root));
    }
    sum += modulus * power;
    power *= operator_growth;
  }
  return sum;
}

}  // namespace

BigInt polynomial_sort_bound(const PolyApprox& p, int operator_growth, const BigInt& input_sort) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, int>, BigRational> cache;
  std::string key;
  key += std::to_string(p.center.num) + "/" + std::to_string(p.center.den) + ";";
  key += std::to_string(p.half_width.num) + "/" + std::to_string(p.half_width.den) + ";";
  for (const auto& g : p.coeffs)
    key += std::to_string(g.re.num) + "/" + std::to_string(g.re.den) + "," + std::to_string(g.im.num) + "/" +
           std::to_string(g.im.den) + ";";
  BigRational bound;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({key, operator_growth});
    if (it != cache.end()) {
      bound = it->second;
    } else {
      bound = std::min(shifted_bound(p, operator_growth), monomial_bound(p, operator_growth));
      cache.emplace(std::pair{key, operator_growth}, bound);
    }
  }
  return ceil_positive(bound * BigRational(input_sort));
}

BigInt q_index(const PolyApprox& p_n) { return polynomial_sort_bound(p_n, 6, 1); }

namespace {

CMatrix r_matrix(const RvdData& rvd) {
  const CMatrix r = complex_part(rvd.r().matrix());
  return (r + r.adjoint()) * 0.5;
}

}  // namespace

ModularApprox approximate_delta_it(const RvdData& rvd, double t, int m, int n) {
  if (m < 1 || n < 1) throw DomainError("approximate_delta_it: m and n must be positive");
  const auto spec = rvd.r_spectrum();
  std::vector<double> reflected(spec.size());
  std::transform(spec.begin(), spec.end(), reflected.begin(), [](double r) { return 2.0 - r; });
  ModularApprox a;
  a.t = t;
  a.m = m;
  a.n = n;
  a.p_m = fit_power_it_target(t, 1.0 / m, spectral_interval(reflected));
  a.p_n = fit_power_it_target(-t, 1.0 / n, spectral_interval(spec));
  a.delta = delta_bound(m, n, a.p_m, a.p_n);
  a.q = q_index(a.p_n);
  return a;
}

CMatrix polynomial_delta_it(const RvdData& rvd, const ModularApprox& approx) {
  const CMatrix r = r_matrix(rvd);
  const CMatrix two_minus_r = CMatrix::identity(r.rows()) * Complex(2.0) - r;
  return approx.p_m.evaluate(two_minus_r) * approx.p_n.evaluate(r);
}

double operator_defect(const ModularData& md, const RvdData& rvd, const ModularApprox& approx) {
  const double t = approx.t;
  const CMatrix exact = md.function_matrix([t](double mu) { return std::exp(Complex(0.0, t) * std::log(mu)); });
  return op_norm(exact - polynomial_delta_it(rvd, approx));
}

// ---------------------------------------------------------------------------

BigRational SechSeries::coefficient_sum() const {
  BigRational s = 0;
  for (const auto& a : coefficients) s += a;
  return s;
}

double SechSeries::partial_sum(double t) const {
  const double sech = 1.0 / std::cosh(t);
  double power = sech;
  double s = 0.0;
  for (const auto& a : coefficients) {
    s += a.convert_to<double>() * power;
    power *= sech * sech;
  }
  return s;
}

double SechSeries::truncation_bound() const { return (BigRational(1) - coefficient_sum()).convert_to<double>(); }

SechSeries sech_series(int terms) {
  if (terms < 1) throw DomainError("sech_series: need at least one term");
  SechSeries s;
  BigInt catalan = 1;  // Catalan(0)
  BigInt power = 2;    // 2^{2n−1} at n = 1
  for (int n = 1; n <= terms; ++n) {
    s.coefficients.emplace_back(catalan, power);
    // Catalan(k+1) = Catalan(k)·2(2k+1)/(k+2) with k = n − 1.
    const int k = n - 1;
    catalan = catalan * (2 * (2 * k + 1)) / (k + 2);
    power *= 4;
  }
  return s;
}

}  // namespace modbench
