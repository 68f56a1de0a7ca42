#include "modbench/modular.hpp"

#include <cmath>
#include <string>

namespace modbench {

namespace {

constexpr double kSupportTol = 1e-9;
constexpr double kSeriesRelTol = 1e-12;
constexpr int kSeriesMaxTerms = 10000;
constexpr double kRayTol = 1e-12;

std::vector<Complex> unit_vector(std::size_t n, std::size_t k, Complex value) {
  std::vector<Complex> e(n);
  e[k] = value;
  return e;
}

// Real matrix whose columns are the realified images of the real basis
// (e_k, i·e_k) of ℂᴺ under f.
template <class Map>
RMatrix column_matrix(std::size_t n, Map f) {
  RMatrix m(2 * n, 2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const auto e = unit_vector(n, k % n, k < n ? Complex(1.0) : Complex(0.0, 1.0));
    const auto col = realify(f(e));
    for (std::size_t i = 0; i < 2 * n; ++i) m(i, k) = col[i];
  }
  return m;
}

GnsVector from_flat(const WStarSpace& space, std::span<const Complex> v) {
  return {BlockMatrix::unflatten(space.sizes(), v)};
}

bool in_center(double mu) { return std::abs(mu - 1.0) <= 2.0 * kClusterRelTol; }

}  // namespace

ModularData build_modular(const WStarSpace& space) {
  const std::size_t n = space.gns_dim();
  const auto sizes = space.sizes();

  // S₀ on the algebra: a·ω ↦ a†·ω, read off on a real basis of M.
  const RMatrix algebra_in = column_matrix(n, [&](const std::vector<Complex>& e) {
    return space.gns_embed({BlockMatrix::unflatten(sizes, e)}).flatten();
  });
  const RMatrix algebra_out = column_matrix(n, [&](const std::vector<Complex>& e) {
    return space.gns_embed(AlgebraElement{BlockMatrix::unflatten(sizes, e)}.adjoint()).flatten();
  });
  // F₀ on the commutant: c'·ω ↦ c'†·ω for right multiplications c'.
  const RMatrix commutant_in = column_matrix(n, [&](const std::vector<Complex>& e) {
    return space.commutant_vector(BlockMatrix::unflatten(sizes, e)).flatten();
  });
  const RMatrix commutant_out = column_matrix(n, [&](const std::vector<Complex>& e) {
    return space.commutant_vector(BlockMatrix::unflatten(sizes, e).adjoint()).flatten();
  });

  ModularData md;
  md.space_ = &space;
  md.tomita_ = RealLinearOperator(algebra_out * inverse(algebra_in));
  md.adjoint_tomita_ = RealLinearOperator(commutant_out * inverse(commutant_in));

  const RealLinearOperator delta = md.adjoint_tomita_ * md.tomita_;
  CMatrix d = complex_part(delta.matrix());
  d = (d + d.adjoint()) * 0.5;
  md.delta_eig_ = herm_eig(d);
  if (md.delta_eig_.eigenvalues.front() <= 0.0) throw NotPositive("build_modular: Δ is not positive definite");

  const CMatrix inv_sqrt = apply_function(md.delta_eig_, [](double mu) { return Complex(1.0 / std::sqrt(mu)); });
  md.conjugation_ = md.tomita_ * RealLinearOperator::from_complex(inv_sqrt);
  return md;
}

CMatrix ModularData::delta_matrix() const {
  return apply_function(delta_eig_, [](double mu) { return Complex(mu); });
}

CMatrix ModularData::function_matrix(const ScalarFunction& f) const { return apply_function(delta_eig_, f); }

GnsVector ModularData::apply(const ScalarFunction& f, const GnsVector& xi) const {
  const auto v = xi.flatten();
  if (v.size() != space_->gns_dim()) throw ShapeMismatch("ModularData::apply: vector dimension mismatch");
  const CMatrix& u = delta_eig_.basis;
  const std::size_t n = v.size();
  std::vector<Complex> coeff(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::conj(u(i, k)) * v[i];
    const Complex fk = f(delta_eig_.eigenvalues[k]);
    if (!std::isfinite(fk.real()) || !std::isfinite(fk.imag())) {
      throw DomainError("ModularData::apply: function not finite at eigenvalue " +
                        std::to_string(delta_eig_.eigenvalues[k]));
    }
    coeff[k] = fk * s;
  }
  return from_flat(*space_, mat_vec(u, coeff));
}

GnsVector ModularData::apply_log(const ScalarFunction& g, const GnsVector& xi) const {
  return apply([&](double mu) { return g(std::log(mu)); }, xi);
}

GnsVector ModularData::apply_conjugation(const GnsVector& xi) const {
  return from_flat(*space_, conjugation_.apply(std::span<const Complex>(xi.flatten())));
}

GnsVector ModularData::apply_tomita(const GnsVector& xi) const {
  return from_flat(*space_, tomita_.apply(std::span<const Complex>(xi.flatten())));
}

GnsVector delta_power(const ModularData& md, Complex z, const GnsVector& xi) {
  if (z == Complex{}) return xi;
  return md.apply([z](double mu) { return std::exp(z * std::log(mu)); }, xi);
}

AlgebraElement sigma_z(const ModularData& md, const AlgebraElement& x, Complex z) {
  const auto& space = md.space();
  return space.gns_recover(delta_power(md, Complex(0.0, 1.0) * z, space.gns_embed(x)));
}

AlgebraElement sigma_t(const ModularData& md, const AlgebraElement& x, double t) { return sigma_z(md, x, t); }

// ---------------------------------------------------------------------------
// Spectral pieces

const CMatrix& SpectralSplit::projector(SpectralPiece piece) const {
  switch (piece) {
    case SpectralPiece::minus: return minus;
    case SpectralPiece::center: return center;
    case SpectralPiece::plus: return plus;
    case SpectralPiece::complement: break;
  }
  return complement;
}

GnsVector SpectralSplit::project(SpectralPiece piece, const GnsVector& xi) const {
  const auto sizes = xi.blocks.sizes();
  return {BlockMatrix::unflatten(sizes, mat_vec(projector(piece), xi.flatten()))};
}

SpectralSplit spectral_split(const ModularData& md, double j) {
  if (!(j > 1.0) || !std::isfinite(j)) throw DomainError("spectral_split: j must exceed 1");
  const auto& eig = md.delta_eig();
  const std::size_t n = eig.eigenvalues.size();
  SpectralSplit split;
  split.j = j;
  split.minus = CMatrix(n, n);
  split.center = CMatrix(n, n);
  split.plus = CMatrix(n, n);
  split.complement = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double mu = eig.eigenvalues[k];
    CMatrix* target = &split.complement;
    if (in_center(mu)) {
      target = &split.center;
    } else if (std::abs(mu - 1.0 / j) <= kSupportTol || std::abs(mu - j) <= kSupportTol) {
      throw BoundaryCollision("spectral_split: eigenvalue " + std::to_string(mu) + " sits on the boundary of (1/" +
                              std::to_string(j) + ", " + std::to_string(j) + ")");
    } else if (mu > 1.0 / j && mu < 1.0) {
      target = &split.minus;
    } else if (mu > 1.0 && mu < j) {
      target = &split.plus;
    }
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) (*target)(r, c) += eig.basis(r, k) * std::conj(eig.basis(c, k));
  }
  return split;
}

// ---------------------------------------------------------------------------
// Multipliers

double multiplier_value(MultiplierKind kind, double a, double t) {
  auto g = [a](double s) {
    return std::exp(-std::abs(s)) - (std::exp(-std::abs(s - a)) + std::exp(-std::abs(s + a))) / (2.0 * std::cosh(a));
  };
  switch (kind) {
    case MultiplierKind::h: return 1.0 / std::cosh(t - a);
    case MultiplierKind::f: return std::exp(-std::abs(t - a));
    case MultiplierKind::g: return g(t);
    case MultiplierKind::k_plus: return g(2.0 * t - a);
    case MultiplierKind::k_minus: return g(2.0 * t + a);
  }
  return 0.0;
}

GnsVector multiplier(const ModularData& md, MultiplierKind kind, double a, const GnsVector& xi) {
  return md.apply_log([=](double t) { return Complex(multiplier_value(kind, a, t)); }, xi);
}

GnsVector g_multiplier_on_center(const ModularData& md, double a, const GnsVector& xi) {
  const auto& eig = md.delta_eig();
  const std::size_t n = eig.eigenvalues.size();
  CMatrix center(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!in_center(eig.eigenvalues[k])) continue;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) center(r, c) += eig.basis(r, k) * std::conj(eig.basis(c, k));
  }
  const auto v = xi.flatten();
  const auto on = mat_vec(center, v);
  double leak = 0.0;
  for (std::size_t i = 0; i < n; ++i) leak += std::norm(v[i] - on[i]);
  if (std::sqrt(leak) > kSupportTol * std::max(1.0, norm(v))) {
    throw NotCentered("g_multiplier_on_center: vector has a component off the eigenvalue-1 piece");
  }
  return Complex(std::tanh(a)) * xi;
}

namespace {

GnsVector checked_projection(const SpectralSplit& split, SpectralPiece piece, const GnsVector& xi) {
  if (piece != SpectralPiece::plus && piece != SpectralPiece::minus) {
    throw DomainError("g inverse: piece must be E_+ or E_-");
  }
  GnsVector on = split.project(piece, xi);
  if ((xi - on).norm() > kSupportTol * std::max(1.0, xi.norm())) {
    throw WrongSupport("g inverse: vector leaks outside the requested spectral piece");
  }
  return on;
}

}  // namespace

SeriesResult g_inverse_series(const ModularData& md, double a, SpectralPiece piece, const GnsVector& xi) {
  if (!(a > 0.0)) throw DomainError("g_inverse_series: a must be positive");
  const SpectralSplit split = spectral_split(md, std::exp(a));
  const GnsVector start = checked_projection(split, piece, xi);
  const double scale = xi.norm();
  if (scale == 0.0) return {start, 0};

  // On E_+: g_a(log Δ)^{-1} = (e^a + e^{-a}) e^{-a} Δ Σ_k (e^{-2a} Δ²)^k,
  // on E_-: the same with Δ replaced by Δ^{-1}.
  const double sign = piece == SpectralPiece::plus ? 1.0 : -1.0;
  const double shrink = std::exp(-2.0 * a);
  const CMatrix delta = md.function_matrix([sign](double mu) { return Complex(std::pow(mu, sign)); });
  const CMatrix& proj = split.projector(piece);
  const CMatrix step = proj * (delta * delta) * Complex(shrink);

  auto term = start.flatten();
  std::vector<Complex> sum(term.size());
  int terms = 0;
  while (true) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
    ++terms;
    term = mat_vec(step, term);
    if (norm(term) < kSeriesRelTol * scale) break;
    if (terms >= kSeriesMaxTerms) throw SlowConvergence("g_inverse_series: more than 10^4 terms needed");
  }
  const double prefactor = 2.0 * std::cosh(a) * std::exp(-a);
  auto out = mat_vec(proj * delta, sum);
  for (auto& z : out) z *= prefactor;
  return {GnsVector{BlockMatrix::unflatten(xi.blocks.sizes(), out)}, terms};
}

GnsVector g_inverse_direct(const ModularData& md, double a, SpectralPiece piece, const GnsVector& xi) {
  const SpectralSplit split = spectral_split(md, std::exp(a));
  const GnsVector on = checked_projection(split, piece, xi);
  const GnsVector inv = md.apply_log(
      [a](double t) {
        const double g = multiplier_value(MultiplierKind::g, a, t);
        return Complex(g == 0.0 ? 0.0 : 1.0 / g);
      },
      on);
  return split.project(piece, inv);
}

// ---------------------------------------------------------------------------
// Resolvent

bool ResolventCertificate::holds() const {
  auto within = [](double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-9) + 1e-12; };
  return within(output_norm, norm_bound()) && within(output_right_norm, right_bound()) &&
         within(output_adjoint_right_norm, adjoint_right_bound());
}

ResolventResult resolvent(const ModularData& md, Complex lambda, const GnsVector& xi, bool inverse_delta) {
  const double gap = 2.0 * std::abs(lambda) - 2.0 * lambda.real();
  if (!(gap > kRayTol)) throw LambdaOnRay("resolvent: lambda lies on the non-negative real ray");
  const double power = inverse_delta ? -1.0 : 1.0;
  ResolventResult result{md.apply([=](double mu) { return 1.0 / (std::pow(mu, power) - lambda); }, xi), {}};

  const auto& space = md.space();
  auto commutant_op_norm = [&](const GnsVector& v) {
    const BlockMatrix c = space.commutant_symbol(v);
    double r = 0.0;
    for (const auto& blk : c.blocks()) r = std::max(r, op_norm(blk));
    return r;
  };
  // Right norm of the commutant element with vector v: the norm of the
  // algebra element with the same vector.
  auto commutant_right_norm = [&](const GnsVector& v) { return space.op_norm(space.gns_recover(v)); };
  auto commutant_adjoint_vector = [&](const GnsVector& v) {
    return space.commutant_vector(space.commutant_symbol(v).adjoint());
  };

  auto& cert = result.certificate;
  cert.denominator = std::sqrt(gap);
  if (inverse_delta) {
    const AlgebraElement x = space.gns_recover(xi);
    cert.input_norm = space.op_norm(x);
    cert.input_right_norm = space.right_norm(x);
    cert.input_adjoint_right_norm = space.right_norm(x.adjoint());
    cert.output_norm = commutant_op_norm(result.value);
    cert.output_right_norm = commutant_right_norm(result.value);
    cert.output_adjoint_right_norm = commutant_right_norm(commutant_adjoint_vector(result.value));
  } else {
    const AlgebraElement y = space.gns_recover(result.value);
    cert.input_norm = commutant_op_norm(xi);
    cert.input_right_norm = commutant_right_norm(xi);
    cert.input_adjoint_right_norm = commutant_right_norm(commutant_adjoint_vector(xi));
    cert.output_norm = space.op_norm(y);
    cert.output_right_norm = space.right_norm(y);
    cert.output_adjoint_right_norm = space.right_norm(y.adjoint());
  }
  return result;
}

GnsVector gaussian_smooth(const ModularData& md, const GnsVector& xi, double r) {
  if (!(r > 0.0)) throw DomainError("gaussian_smooth: r must be positive");
  return md.apply_log([r](double t) { return Complex(std::exp(-t * t / (4.0 * r))); }, xi);
}

}  // namespace modbench
