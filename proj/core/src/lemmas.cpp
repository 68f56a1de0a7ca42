#include "modbench/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "modbench/approx.hpp"

namespace modbench {

std::string_view check_kind_name(CheckKind kind) {
  switch (kind) {
    case CheckKind::bound: return "bound";
    case CheckKind::identity: return "identity";
    case CheckKind::margin: return "margin";
    case CheckKind::diagnostic: return "diagnostic";
  }
  return "identity";
}

bool LemmaReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const LemmaCheck& c) { return c.pass || c.kind == CheckKind::diagnostic; });
}

const LemmaCheck* LemmaReport::find(std::string_view id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::vector<const LemmaCheck*> LemmaReport::failures() const {
  std::vector<const LemmaCheck*> out;
  for (const auto& c : checks)
    if (!c.pass && c.kind != CheckKind::diagnostic) out.push_back(&c);
  return out;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double vec_distance(const GnsVector& a, const GnsVector& b) { return (a - b).norm(); }

double matrix_gap(const CMatrix& a, const CMatrix& b) { return op_norm(a - b); }

/// Split points for E(1/j, j) that stay clear of the spectrum of Δ: the
/// geometric midpoints between consecutive distinct eigenvalues above 1,
/// and one point beyond the top.
std::vector<double> safe_split_points(const ModularData& md) {
  std::vector<double> above;
  for (double mu : md.delta_spectrum()) {
    const double s = std::max(mu, 1.0 / mu);
    if (s > 1.0 + 1e-6) above.push_back(s);
  }
  std::sort(above.begin(), above.end());
  std::vector<double> distinct;
  for (double s : above)
    if (distinct.empty() || s > distinct.back() * (1.0 + 1e-6)) distinct.push_back(s);

  std::vector<double> js;
  double prev = 1.0;
  for (double s : distinct) {
    js.push_back(std::sqrt(prev * s));
    prev = s;
  }
  js.push_back(prev * 1.5);
  if (js.size() > 4) js.erase(js.begin() + 1, js.end() - 3);
  return js;
}

class Suite {
 public:
  Suite(const Instance& instance, const LemmaConfig& config)
      : space_(instance.space()), md_(instance.modular()), rvd_(instance.rvd()), config_(config) {}

  LemmaReport run() {
    report_.seed = config_.seed;
    report_.trials = config_.trials;
    report_.identity_tolerance = config_.identity_tolerance;

    state_continuity();
    norm_equivalence();
    rvd_facts();
    p_bounds();
    tomita_takesaki();
    bridging();
    h_multiplier();
    f_multiplier();
    spectral_pieces();
    g_multiplier_bounds();
    gaussian_smoothing();
    sech_truncation();
    modular_expansion();
    route_agreement();
    return std::move(report_);
  }

 private:
  // ---- bookkeeping

  LemmaCheck& open(std::string id, std::string statement, CheckKind kind, double tolerance = 0.0) {
    LemmaCheck c;
    c.id = std::move(id);
    c.statement = std::move(statement);
    c.kind = kind;
    c.tolerance = tolerance;
    report_.checks.push_back(std::move(c));
    return report_.checks.back();
  }

  /// A bound check; returns its index so trials can be recorded later.
  std::size_t bound(std::string id, std::string statement, bool diagnostic = false) {
    open(std::move(id), std::move(statement), diagnostic ? CheckKind::diagnostic : CheckKind::bound,
         config_.bound_rel);
    return report_.checks.size() - 1;
  }

  std::size_t identity(std::string id, std::string statement, double tolerance) {
    open(std::move(id), std::move(statement), CheckKind::identity, tolerance);
    return report_.checks.size() - 1;
  }

  void record_bound(std::size_t index, double lhs, double rhs) {
    auto& c = report_.checks[index];
    ++c.trials;
    c.defect = std::max(c.defect, lhs - rhs);
    if (rhs > 0.0) c.worst_ratio = std::max(c.worst_ratio, lhs / rhs);
    else if (lhs > 0.0) c.worst_ratio = std::max(c.worst_ratio, std::numeric_limits<double>::infinity());
    if (!(lhs <= rhs * (1.0 + config_.bound_rel) + config_.bound_abs)) {
      ++c.violations;
      if (c.kind != CheckKind::diagnostic) c.pass = false;
    }
  }

  void record_residual(std::size_t index, double residual) {
    auto& c = report_.checks[index];
    ++c.trials;
    c.defect = std::max(c.defect, residual);
    if (!(residual <= c.tolerance)) {
      ++c.violations;
      c.pass = false;
    }
  }

  void record_margin(std::string id, std::string statement, double margin) {
    auto& c = open(std::move(id), std::move(statement), CheckKind::margin);
    c.trials = 1;
    c.defect = margin;
    c.pass = margin > 0.0;
    c.violations = c.pass ? 0 : 1;
  }

  std::mt19937_64 stream(std::string_view family) const { return std::mt19937_64(config_.seed ^ fnv1a(family)); }

  AlgebraElement gaussian(std::mt19937_64& rng) const { return space_.sample_gaussian(rng); }

  BlockMatrix gaussian_commutant(std::mt19937_64& rng) const { return space_.sample_gaussian(rng).blocks; }

  static double scale_of(double v) { return std::max(1.0, v); }

  double itol() const { return config_.identity_tolerance; }

  // ---- state and norms

  void state_continuity() {
    const auto id = bound("state_continuity", "|phi(a)| <= sqrt(2)*||a||#");
    auto rng = stream("state_continuity");
    for (int k = 0; k < config_.trials; ++k) {
      const auto x = gaussian(rng);
      record_bound(id, std::abs(space_.state(x)), std::sqrt(2.0) * space_.sharp_norm(x));
    }
  }

  void norm_equivalence() {
    const auto lower = bound("sharp_norm.lower", "||a||_phi/sqrt(2) <= ||a||#");
    const auto upper = bound("sharp_norm.upper", "||a||# <= sqrt((||a*|| ||a||_phi + ||a*||_right ||a||_phi)/2) <= sqrt(K ||a||_phi)");
    const auto literal = bound("sharp_norm.sqrt_k", "||a||# <= sqrt(K)*||a||_phi on S_K (literal constant)", true);
    auto rng = stream("sharp_norm");
    std::uniform_real_distribution<double> scale(-2.0, 2.0);
    for (int k = 0; k < config_.trials; ++k) {
      const auto x = Complex(std::pow(10.0, scale(rng))) * gaussian(rng);
      const double phi = space_.phi_norm(x);
      const double sharp = space_.sharp_norm(x);
      const double op = space_.op_norm(x);
      const double adj_right = space_.right_norm(x.adjoint());
      const double total = std::max({op, space_.right_norm(x), adj_right});
      record_bound(lower, phi / std::sqrt(2.0), sharp);
      const double middle = std::sqrt((op * phi + adj_right * phi) / 2.0);
      record_bound(upper, sharp, middle);
      record_bound(upper, middle, std::sqrt(total * phi));
      record_bound(literal, sharp, std::sqrt(total) * phi);
    }
  }

  // ---- P, Q, R, Θ

  void rvd_facts() {
    const double tol = itol();
    const std::size_t dim = space_.gns_dim();

    record_residual(identity("rvd.complex_linear", "R and T are complex-linear", tol),
                    std::max(rvd_.r().linearity_defect(), rvd_.modulus().linearity_defect()));

    {
      const auto id = identity("rvd.conjugation", "J antilinear, J^2 = 1, J omega = omega, J agrees with the spectral J", tol);
      const auto& j = rvd_.conjugation();
      record_residual(id, j.antilinearity_defect());
      record_residual(id, op_norm(j.matrix() * j.matrix() - RMatrix::identity(2 * dim)));
      const auto omega = space_.omega();
      record_residual(id, vec_distance(apply(j, omega), omega));
      record_residual(id, op_norm(j.matrix() - md_.conjugation().matrix()));
    }

    {
      double margin = std::numeric_limits<double>::infinity();
      for (double r : rvd_.r_spectrum()) margin = std::min({margin, r, 2.0 - r});
      record_margin("rvd.spectrum_margin", "spec(R) inside (eps, 2 - eps) for some eps > 0", margin);
    }

    {
      const auto id = identity("rvd.q_from_p", "i P(v) = Q(i v)", tol);
      auto rng = stream("rvd.q_from_p");
      const Complex i(0.0, 1.0);
      for (int k = 0; k < config_.identity_samples; ++k) {
        const auto v = space_.gns_embed(gaussian(rng));
        const auto lhs = i * apply(rvd_.p(), v);
        const auto rhs = apply(rvd_.q(), i * v);
        record_residual(id, vec_distance(lhs, rhs) / scale_of(v.norm()));
      }
    }

    {
      const auto id = identity("rvd.commutant_complement", "closure of M'_sa omega equals (iK)^perp", tol);
      const auto projection = commutant_sa_projection(space_);
      const RMatrix complement = RMatrix::identity(2 * dim) - rvd_.q().matrix();
      record_residual(id, op_norm(projection.matrix() - complement));
    }

    const auto theta = theta_identities_check(rvd_, config_.identity_samples, config_.seed ^ fnv1a("theta.algebra"));
    record_residual(identity("theta.algebra", "Theta x omega = (2 - R) x* omega", tol), theta.algebra_defect);
    record_residual(identity("theta.commutant", "Theta x' omega = R x'* omega", tol), theta.commutant_defect);
    record_residual(identity("theta.round_trip", "Theta carries M' omega to M omega compatibly with adjoints", tol),
                    theta.round_trip_defect);
  }

  void p_bounds() {
    const auto commutant = bound("p.commutant_norm", "x' in M': ||pi(P x' omega)||, ||pi(Q x' omega)|| <= 2||x'||");
    const auto left = bound("p.norm", "||b|| <= 2||a||_right where b omega = P a omega (also for Q)");
    const auto right = bound("p.right_norm", "||b||_right <= ||a||_right + 2||a||");
    const auto total = bound("p.total", "b in S_{3K} when a in S_K");
    const auto self_adjoint = identity("p.self_adjoint", "P a omega = b omega with b self-adjoint", itol());
    auto rng = stream("p.commutant_norm");
    for (int k = 0; k < config_.trials; ++k) {
      const BlockMatrix c = gaussian_commutant(rng);
      double c_norm = 0.0;
      for (const auto& blk : c.blocks()) c_norm = std::max(c_norm, op_norm(blk));
      const auto cv = space_.commutant_vector(c);
      record_bound(commutant, space_.op_norm(space_.gns_recover(apply(rvd_.p(), cv))), 2.0 * c_norm);
      record_bound(commutant, space_.op_norm(space_.gns_recover(apply(rvd_.q(), cv))), 2.0 * c_norm);

      const auto x = gaussian(rng);
      const auto w = p_witness(rvd_, x);
      record_bound(left, w.op_b, w.op_bound());
      record_bound(left, space_.op_norm(q_element(rvd_, x)), w.op_bound());
      record_bound(right, w.right_b, w.right_bound());
      record_bound(total, w.total_b, w.total_bound());
      if (k < config_.identity_samples) {
        record_residual(self_adjoint, space_.op_norm(w.b - w.b.adjoint()) / scale_of(w.op_b));
      }
    }
  }

  // ---- Tomita–Takesaki shadows

  CMatrix delta_it_matrix(double t) const {
    return md_.function_matrix([t](double mu) { return std::exp(Complex(0.0, t * std::log(mu))); });
  }

  void tomita_takesaki() {
    const double tol = itol();
    const RMatrix& j = md_.conjugation().matrix();

    {
      const auto id = identity("tt.commutant", "J pi(a) J commutes with pi(b); Delta^{it} pi(a) Delta^{-it} lies in pi(M)", tol);
      auto rng = stream("tt.commutant");
      std::uniform_real_distribution<double> tdist(-3.0, 3.0);
      for (int k = 0; k < config_.identity_samples; ++k) {
        const auto a = gaussian(rng);
        const auto b = gaussian(rng);
        const RMatrix jaj = j * realify(space_.left_operator(a)) * j;
        const RMatrix lb = realify(space_.left_operator(b));
        const double scale = scale_of(op_norm(jaj) * op_norm(lb));
        record_residual(id, op_norm(jaj * lb - lb * jaj) / scale);

        // The conjugated operator commutes with every right multiplication.
        const double t = tdist(rng);
        const CMatrix u = delta_it_matrix(t);
        const CMatrix conj = u * space_.left_operator(a) * u.adjoint();
        const CMatrix rb = space_.right_operator(b);
        record_residual(id, op_norm(conj * rb - rb * conj) / scale_of(op_norm(conj) * op_norm(rb)));
      }
    }

    {
      const auto id = identity("tt.delta_it_conjugation", "Delta^{it} a omega = b omega with pi(b) = Delta^{it} pi(a) Delta^{-it}, ||b|| = ||a||", tol);
      auto rng = stream("tt.delta_it_conjugation");
      std::uniform_real_distribution<double> tdist(-3.0, 3.0);
      for (int k = 0; k < config_.identity_samples; ++k) {
        const auto a = gaussian(rng);
        const double t = tdist(rng);
        const auto b = space_.gns_recover(delta_power(md_, Complex(0.0, t), space_.gns_embed(a)));
        const CMatrix u = delta_it_matrix(t);
        const CMatrix conj = u * space_.left_operator(a) * u.adjoint();
        const double scale = scale_of(space_.op_norm(a));
        record_residual(id, matrix_gap(space_.left_operator(b), conj) / scale);
        record_residual(id, std::abs(space_.op_norm(b) - space_.op_norm(a)) / scale);
      }
    }

    {
      const auto id = identity("tt.twisted_product", "Delta^{it} J pi(a) J Delta^{-it} b omega = pi(b) Delta^{it} J a omega", tol);
      auto rng = stream("tt.twisted_product");
      std::uniform_real_distribution<double> tdist(-3.0, 3.0);
      for (int k = 0; k < config_.identity_samples; ++k) {
        const auto a = gaussian(rng);
        const auto b = gaussian(rng);
        const double t = tdist(rng);
        const Complex it(0.0, t);
        GnsVector v = delta_power(md_, -it, space_.gns_embed(b));
        v = md_.apply_conjugation(v);
        v = space_.left_multiply(a, v);
        v = md_.apply_conjugation(v);
        const GnsVector lhs = delta_power(md_, it, v);
        const GnsVector rhs =
            space_.left_multiply(b, delta_power(md_, it, md_.apply_conjugation(space_.gns_embed(a))));
        record_residual(id, vec_distance(lhs, rhs) / scale_of(space_.op_norm(a) * space_.phi_norm(b)));
      }
    }

    {
      const auto id = identity("kms", "phi(a b) = phi(b sigma_{-i}(a))", tol);
      auto rng = stream("kms");
      for (int k = 0; k < config_.identity_samples; ++k) {
        const auto a = gaussian(rng);
        const auto b = gaussian(rng);
        const auto shifted = sigma_z(md_, a, Complex(0.0, -1.0));
        const double scale = scale_of(space_.op_norm(a) * space_.op_norm(b));
        record_residual(id, std::abs(space_.state(a * b) - space_.state(b * shifted)) / scale);
      }
    }
  }

  // ---- bridging lemma

  void bridging() {
    const auto norm = bound("resolvent.norm", "||y|| <= ||x|| / sqrt(2|lambda| - 2 Re lambda), both directions");
    const auto right = bound("resolvent.right_norm", "||y||_right <= ||x*||_right / sqrt(.), ||y*||_right <= ||x||_right / sqrt(.)");
    const auto literal = bound("resolvent.right_norm_same_side", "||y||_right, ||y*||_right <= ||x||_right / sqrt(.) (literal pairing)", true);
    auto rng = stream("resolvent.norm");
    const std::size_t count = std::min(config_.lambdas_re.size(), config_.lambdas_im.size());
    for (int k = 0; k < config_.trials; ++k) {
      const auto x = gaussian(rng);
      const auto c = gaussian_commutant(rng);
      for (std::size_t l = 0; l < count; ++l) {
        const Complex lambda(config_.lambdas_re[l], config_.lambdas_im[l]);
        for (bool inverse_delta : {true, false}) {
          const GnsVector input = inverse_delta ? space_.gns_embed(x) : space_.commutant_vector(c);
          const auto cert = resolvent(md_, lambda, input, inverse_delta).certificate;
          record_bound(norm, cert.output_norm, cert.norm_bound());
          record_bound(right, cert.output_right_norm, cert.right_bound());
          record_bound(right, cert.output_adjoint_right_norm, cert.adjoint_right_bound());
          const double literal_bound = cert.input_right_norm / cert.denominator;
          record_bound(literal, cert.output_right_norm, literal_bound);
          record_bound(literal, cert.output_adjoint_right_norm, literal_bound);
        }
      }
    }
  }

  // ---- spectral multipliers

  static constexpr double kAList[] = {0.0, 1.0, 2.0};

  void h_multiplier() {
    const auto norm = bound("h.contraction", "h_a(log Delta) x omega = y omega with ||y|| <= ||x||, ||y||_right <= ||x||_right");
    const auto bridge = identity("h.bridge", "2R(2-R) x omega = (e^{-a}(2-R)^2 + e^{a} R^2) y omega", itol());
    const auto closed = identity("h.closed_form", "h_a(log Delta) = 2(e^{-a} Delta + e^{a} Delta^{-1})^{-1}", 1e-9);
    auto rng = stream("h.contraction");
    const auto& r = rvd_.r();
    const RealLinearOperator two_minus_r = RealLinearOperator(2.0 * RMatrix::identity(2 * space_.gns_dim())) - r;
    for (int k = 0; k < config_.trials; ++k) {
      const auto x = gaussian(rng);
      const auto xv = space_.gns_embed(x);
      const double op_x = space_.op_norm(x);
      const double right_x = space_.right_norm(x);
      for (double a : kAList) {
        const auto yv = multiplier(md_, MultiplierKind::h, a, xv);
        const auto y = space_.gns_recover(yv);
        record_bound(norm, space_.op_norm(y), op_x);
        record_bound(norm, space_.right_norm(y), right_x);
        record_bound(norm, space_.right_norm(y.adjoint()), space_.right_norm(x.adjoint()));
        if (k < config_.identity_samples) {
          const GnsVector lhs = 2.0 * apply(r, apply(two_minus_r, xv));
          const GnsVector rhs = std::exp(-a) * apply(two_minus_r, apply(two_minus_r, yv)) +
                                std::exp(a) * apply(r, apply(r, yv));
          record_residual(bridge, vec_distance(lhs, rhs) / scale_of(xv.norm()));
          const auto direct = md_.apply([a](double mu) { return Complex(2.0 / (std::exp(-a) * mu + std::exp(a) / mu)); },
                                        xv);
          record_residual(closed, vec_distance(direct, yv) / scale_of(xv.norm()));
        }
      }
    }
  }

  void f_multiplier() {
    const auto id = bound("f.contraction", "f_a(log Delta) x omega = y omega with ||y|| <= ||x||");
    auto rng = stream("f.contraction");
    std::uniform_real_distribution<double> adist(-3.0, 3.0);
    for (int k = 0; k < config_.trials; ++k) {
      const auto x = gaussian(rng);
      const double a = adist(rng);
      const auto y = space_.gns_recover(multiplier(md_, MultiplierKind::f, a, space_.gns_embed(x)));
      record_bound(id, space_.op_norm(y), space_.op_norm(x));
    }
  }

  void spectral_pieces() {
    const auto splits = [&] {
      std::vector<SpectralSplit> out;
      for (double j : safe_split_points(md_)) out.push_back(spectral_split(md_, j));
      return out;
    }();

    const auto powers = bound("spectral.powers", "x omega in E_j: Delta^n x omega = x_n omega with ||x_n|| <= j^|n| ||x||");
    const auto right = bound("spectral.right_norm", "x omega in E_j: ||x||_right <= j^{1/2} ||x||");
    const auto total = bound("spectral.total", "x omega in E_j: x totally j^{3/2}||x||-bounded");
    auto rng = stream("spectral.right_norm");
    for (int k = 0; k < config_.trials; ++k) {
      const auto& split = splits[static_cast<std::size_t>(k) % splits.size()];
      const double j = split.j;
      const auto raw = space_.gns_embed(gaussian(rng));
      const GnsVector v = split.project(SpectralPiece::minus, raw) + split.project(SpectralPiece::center, raw) +
                          split.project(SpectralPiece::plus, raw);
      const auto x = space_.gns_recover(v);
      const double op_x = space_.op_norm(x);
      for (int n : {-2, -1, 1, 2}) {
        const auto xn = space_.gns_recover(delta_power(md_, Complex(n), v));
        record_bound(powers, space_.op_norm(xn), std::pow(j, std::abs(n)) * op_x);
      }
      record_bound(right, space_.right_norm(x), std::sqrt(j) * op_x);
      record_bound(total, space_.total_bound(x), std::pow(j, 1.5) * op_x);
    }

    const double tol = itol();
    const auto support = identity("spectral.k_support", "k_+(log Delta) lands in E_+, k_-(log Delta) in E_-", 1e-9);
    const auto center = identity("g.center", "g_a(log Delta) = tanh(a) on E_c", 1e-10);
    const auto series = identity("g.inverse_series", "geometric-series inverse of g_a on E_+- matches the eigenvalue-wise inverse", tol);
    const auto round_trip = identity("g.inverse_round_trip", "g_a(log Delta) undoes the series inverse on E_+-", tol);
    auto srng = stream("g.center");
    for (const auto& split : splits) {
      const double a = std::log(split.j);
      for (int k = 0; k < config_.identity_samples; ++k) {
        const auto raw = space_.gns_embed(gaussian(srng));
        const double scale = scale_of(raw.norm());

        const auto kp = multiplier(md_, MultiplierKind::k_plus, a, raw);
        record_residual(support, vec_distance(kp, split.project(SpectralPiece::plus, kp)) / scale);
        const auto km = multiplier(md_, MultiplierKind::k_minus, a, raw);
        record_residual(support, vec_distance(km, split.project(SpectralPiece::minus, km)) / scale);

        const auto vc = split.project(SpectralPiece::center, raw);
        for (double b : {0.5, 1.0, std::numbers::ln2, a}) {
          const auto g = g_multiplier_on_center(md_, b, vc);
          record_residual(center, vec_distance(g, std::tanh(b) * vc) / scale);
          record_residual(center, vec_distance(g, multiplier(md_, MultiplierKind::g, b, vc)) / scale);
        }

        for (auto piece : {SpectralPiece::minus, SpectralPiece::plus}) {
          const auto v = split.project(piece, raw);
          const auto by_series = g_inverse_series(md_, a, piece, v);
          const auto direct = g_inverse_direct(md_, a, piece, v);
          const double inv_scale = scale_of(direct.norm());
          record_residual(series, vec_distance(by_series.value, direct) / inv_scale);
          record_residual(round_trip,
                          vec_distance(multiplier(md_, MultiplierKind::g, a, by_series.value), v) / scale);
        }
      }
    }
  }

  void g_multiplier_bounds() {
    const auto right = bound("g.right_norm", "||g_a(log Delta) x||_right <= 3 e^{3a/2} ||x||");
    const auto norm = bound("g.norm", "||g_a(log Delta) x|| <= 3 ||x||");
    auto rng = stream("g.right_norm");
    for (int k = 0; k < config_.trials; ++k) {
      const auto x = gaussian(rng);
      const double op_x = space_.op_norm(x);
      for (double a : {1.0, 2.0, 3.0}) {
        const auto y = space_.gns_recover(multiplier(md_, MultiplierKind::g, a, space_.gns_embed(x)));
        record_bound(right, space_.right_norm(y), 3.0 * std::exp(1.5 * a) * op_x);
        record_bound(right, space_.right_norm(y.adjoint()), 3.0 * std::exp(1.5 * a) * op_x);
        record_bound(norm, space_.op_norm(y), 3.0 * op_x);
      }
    }
  }

  void gaussian_smoothing() {
    const auto norm = bound("gaussian.contraction", "x_r omega = v_r with ||x_r|| <= ||x||");
    const auto limit = identity("gaussian.limit", "||x_r - x||# decreases to 0 as the Gaussian concentrates (r growing)", 1e-6);
    auto rng = stream("gaussian.contraction");
    const double rs[] = {0.01, 0.1, 1.0, 10.0, 100.0, 1e8};
    for (int k = 0; k < config_.trials; ++k) {
      const auto x = gaussian(rng);
      const auto v = space_.gns_embed(x);
      const double op_x = space_.op_norm(x);
      double previous = std::numeric_limits<double>::infinity();
      double increase = 0.0;
      double last = 0.0;
      for (double r : rs) {
        const auto xr = space_.gns_recover(gaussian_smooth(md_, v, r));
        record_bound(norm, space_.op_norm(xr), op_x);
        const double d = space_.sharp_norm(xr - x);
        increase = std::max(increase, d - previous);
        previous = d;
        last = d;
      }
      if (k < config_.identity_samples)
        record_residual(limit, std::max(increase, 0.0) + last / scale_of(space_.sharp_norm(x)));
    }
  }

  void sech_truncation() {
    const auto series = sech_series(config_.sech_terms);
    const double tail = series.truncation_bound();
    const auto id = bound("sech.truncation",
                          "|f_a - sum_{n<=N} a_n h_a^{2n-1}| <= 1 - sum_{n<=N} a_n on each eigencomponent of log Delta");
    const auto chain = bound("sech.total", "partial sums keep S_K: total bound of the partial-sum image <= K");
    auto rng = stream("sech");
    for (double a : kAList) {
      for (double mu : md_.delta_spectrum()) {
        const double t = std::log(mu);
        const double exact = std::exp(-std::abs(t - a));
        const double partial = series.partial_sum(t - a);
        record_bound(id, std::abs(exact - partial), tail);
      }
      for (int k = 0; k < config_.identity_samples; ++k) {
        const auto x = gaussian(rng);
        const auto v = space_.gns_embed(x);
        const auto partial = md_.apply_log([&](double t) { return Complex(series.partial_sum(t - a)); }, v);
        const auto full = multiplier(md_, MultiplierKind::f, a, v);
        record_bound(id, vec_distance(full, partial), tail * v.norm());
        record_bound(chain, space_.total_bound(space_.gns_recover(partial)), space_.total_bound(x));
      }
    }
  }

  // ---- modular expansion

  void modular_expansion() {
    const auto jbound = bound("modular.conjugated_right", "||J pi'(a) J|| <= ||a||_right");
    const auto in_m = identity("modular.conjugated_in_m", "J pi'(a) J commutes with every right multiplication", itol());
    const auto preserved = identity("modular.right_norm_invariant", "||sigma_t(a)||_right = ||a||_right", itol());
    const auto sorts = bound("modular.sigma_sorts", "sigma_t maps S_n into S_n");
    const RMatrix& j = md_.conjugation().matrix();
    auto rng = stream("modular.conjugated_right");
    std::uniform_real_distribution<double> tdist(-3.0, 3.0);
    for (int k = 0; k < config_.trials; ++k) {
      const auto a = gaussian(rng);
      const double right_a = space_.right_norm(a);
      const RMatrix conj = j * realify(space_.right_operator(a)) * j;
      record_bound(jbound, op_norm(conj), right_a);
      const double t = tdist(rng);
      const auto s = sigma_t(md_, a, t);
      record_bound(sorts, space_.total_bound(s), space_.total_bound(a));
      if (k < config_.identity_samples) {
        const auto b = gaussian(rng);
        const RMatrix rb = realify(space_.right_operator(b));
        record_residual(in_m, op_norm(conj * rb - rb * conj) / scale_of(op_norm(conj) * op_norm(rb)));
        record_residual(preserved, std::abs(space_.right_norm(s) - right_a) / scale_of(right_a));
      }
    }

    const auto defect = bound("modular.poly_defect", "||Delta^{it} - f_{t,m}(2-R) f_{-t,n}(R)|| <= delta_{t,m,n}");
    for (double t : config_.t_list)
      for (int m : config_.mn_list)
        for (int n : config_.mn_list) {
          const auto approx = approximate_delta_it(rvd_, t, m, n);
          record_bound(defect, operator_defect(md_, rvd_, approx), approx.delta);
        }
  }

  void route_agreement() {
    const auto it = identity("route.delta_it", "(2-R)^{it} R^{-it} equals the spectral Delta^{it}", 1e-7);
    for (double t : {0.5, 1.0, 2.0}) record_residual(it, matrix_gap(delta_it_rvd_matrix(rvd_, t), delta_it_matrix(t)));
    const auto delta = identity("route.delta", "R^{-1}(2-R) equals the spectral Delta (relative)", itol());
    const CMatrix spectral = md_.delta_matrix();
    record_residual(delta, matrix_gap(delta_rvd_matrix(rvd_), spectral) / scale_of(op_norm(spectral)));
  }

  const WStarSpace& space_;
  const ModularData& md_;
  const RvdData& rvd_;
  const LemmaConfig& config_;
  LemmaReport report_;
};

}  // namespace

LemmaReport run_lemma_suite(const Instance& instance, const LemmaConfig& config) {
  return Suite(instance, config).run();
}

}  // namespace modbench
