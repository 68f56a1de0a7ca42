#include "modbench/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace modbench {

Theory parse_theory(std::string_view name) {
  if (name == "wstar") return Theory::wstar;
  if (name == "wstar_mod") return Theory::wstar_mod;
  throw UnknownTheory("unknown theory '" + std::string(name) + "' (expected wstar or wstar_mod)");
}

std::string_view theory_name(Theory theory) { return theory == Theory::wstar ? "wstar" : "wstar_mod"; }

// ---------------------------------------------------------------------------
// Signature

const SymbolInfo& symbol_info(Op op) {
  static const std::map<Op, SymbolInfo> table{
      {Op::variable, {"x", 0, "S_n", "-"}},
      {Op::zero, {"0_n", 0, "S_n", "-"}},
      {Op::one, {"1_n", 0, "S_n", "-"}},
      {Op::add, {"+_n", 2, "S_{2n}", "eps"}},
      {Op::sub, {"-_n", 2, "S_{2n}", "eps"}},
      {Op::mul, {"._n", 2, "S_{n^2}", "eps/n"}},
      {Op::adjoint, {"*_n", 1, "S_n", "eps"}},
      {Op::scale, {"lambda_n", 1, "S_{ceil|lambda| n}", "eps/|lambda|"}},
      {Op::include, {"iota_{m,n}", 1, "S_n", "eps"}},
      {Op::p, {"P_n", 1, "S_{3n}", "eps/sqrt2"}},
      {Op::q, {"Q_n", 1, "S_{3n}", "eps/sqrt2"}},
      {Op::r, {"R_n", 1, "S_{6n}", "eps/(2 sqrt2)"}},
      {Op::poly_r, {"f(R_n)", 1, "S_{ceil(n sum|b_k|((6+|c|)/h)^k)}", "-", false, true}},
      {Op::poly_two_minus_r, {"f(2-R_n)", 1, "S_{ceil(n sum|b_k|((8+|c|)/h)^k)}", "-", false, true}},
      {Op::delta_it, {"Delta^{it}", 1, "S_1", "eps", true}},
      {Op::sigma, {"sigma_t", 1, "S_1", "eps", true}},
  };
  return table.at(op);
}

const SymbolInfo& symbol_info(Pred pred) {
  static const std::map<Pred, SymbolInfo> table{
      {Pred::constant, {"c", 0, "R", "-"}},
      {Pred::metric, {"d_n", 2, "[0,2n]", "eps"}},
      {Pred::phi_re, {"Re phi_n", 1, "[-n,n]", "eps/sqrt2"}},
      {Pred::phi_im, {"Im phi_n", 1, "[-n,n]", "eps/sqrt2"}},
      {Pred::op_norm, {"||.||", 1, "[0,n]", "-", false, true}},
      {Pred::right_norm, {"||.||_right", 1, "[0,n]", "-", false, true}},
      {Pred::abs, {"|.|", 1, "R", "eps"}},
      {Pred::tsub, {"-.", 2, "R", "eps"}},
      {Pred::max, {"max", -1, "R", "eps"}},
      {Pred::add, {"+", 2, "R", "eps/2"}},
      {Pred::sub, {"-", 2, "R", "eps/2"}},
      {Pred::scale, {"c.", 1, "R", "eps/|c|"}},
      {Pred::sqrt, {"sqrt", 1, "R", "eps^2"}},
  };
  return table.at(pred);
}

double continuity_modulus(Op op, double n, double eps, Complex lambda) {
  switch (op) {
    case Op::add:
    case Op::sub:
    case Op::adjoint:
    case Op::include:
    case Op::delta_it:
    case Op::sigma:
      return eps;
    case Op::mul:
      return eps / n;
    case Op::scale:
      return std::abs(lambda) == 0.0 ? std::numeric_limits<double>::infinity() : eps / std::abs(lambda);
    case Op::p:
    case Op::q:
      return eps / std::numbers::sqrt2;
    case Op::r:
      return eps / (2.0 * std::numbers::sqrt2);
    default:
      throw SignatureError("continuity_modulus: no modulus declared for " + symbol_info(op).name);
  }
}

// ---------------------------------------------------------------------------
// Terms

Term make_term(TermNode node) { return Term(std::make_shared<const TermNode>(std::move(node))); }

Op Term::op() const { return node_->op; }
const SortIndex& Term::sort() const { return node_->sort; }

std::size_t Term::size() const {
  std::size_t total = 1;
  for (const auto& a : node_->args) total += a.size();
  return total;
}

Term Term::variable(std::string name, int sort) {
  if (sort < 1) throw SignatureError("sorts are indexed from 1");
  TermNode n;
  n.op = Op::variable;
  n.sort = sort;
  n.name = std::move(name);
  return make_term(std::move(n));
}

Term Term::zero(int sort) {
  TermNode n;
  n.op = Op::zero;
  n.sort = sort;
  return make_term(std::move(n));
}

Term Term::one(int sort) {
  TermNode n;
  n.op = Op::one;
  n.sort = sort;
  return make_term(std::move(n));
}

namespace {

SortIndex ceil_abs(Complex lambda) {
  const double mag = std::abs(lambda);
  return std::max<SortIndex>(1, SortIndex(static_cast<long long>(std::ceil(mag - 1e-12))));
}

SortIndex range_of(const TermNode& n) {
  const auto arg = [&](std::size_t i) -> const SortIndex& { return n.args.at(i).sort(); };
  switch (n.op) {
    case Op::variable:
    case Op::zero:
    case Op::one:
    case Op::include:
      return n.sort;
    case Op::add:
    case Op::sub:
      return 2 * arg(0);
    case Op::mul:
      return arg(0) * arg(0);
    case Op::adjoint:
      return arg(0);
    case Op::scale:
      return ceil_abs(n.scalar) * arg(0);
    case Op::p:
    case Op::q:
      return 3 * arg(0);
    case Op::r:
      return 6 * arg(0);
    case Op::poly_r:
      return polynomial_sort_bound(*n.poly, 6, arg(0));
    case Op::poly_two_minus_r:
      return polynomial_sort_bound(*n.poly, 8, arg(0));
    case Op::delta_it:
    case Op::sigma:
      return 1;
  }
  return n.sort;
}

Term lift(const Term& x, const SortIndex& target) { return x.sort() < target ? include(x, target) : x; }

Term unary(Op op, const Term& a) {
  TermNode n;
  n.op = op;
  n.args = {a};
  n.sort = range_of(n);
  return make_term(std::move(n));
}

Term binary(Op op, const Term& a, const Term& b) {
  const SortIndex common = std::max(a.sort(), b.sort());
  TermNode n;
  n.op = op;
  n.args = {lift(a, common), lift(b, common)};
  n.sort = range_of(n);
  return make_term(std::move(n));
}

}  // namespace

Term include(const Term& x, const SortIndex& target) {
  if (target == x.sort()) return x;
  if (target < x.sort()) throw SignatureError("iota_{m,n} needs m < n");
  TermNode n;
  n.op = Op::include;
  n.sort = target;
  n.args = {x};
  return make_term(std::move(n));
}

Term operator+(const Term& a, const Term& b) { return binary(Op::add, a, b); }
Term operator-(const Term& a, const Term& b) { return binary(Op::sub, a, b); }
Term operator*(const Term& a, const Term& b) { return binary(Op::mul, a, b); }

Term operator*(Complex lambda, const Term& a) {
  TermNode n;
  n.op = Op::scale;
  n.scalar = lambda;
  n.args = {a};
  n.sort = range_of(n);
  return make_term(std::move(n));
}

Term adjoint(const Term& a) { return unary(Op::adjoint, a); }
Term apply_p(const Term& a) { return unary(Op::p, a); }
Term apply_q(const Term& a) { return unary(Op::q, a); }
Term apply_r(const Term& a) { return unary(Op::r, a); }
Term apply_two_minus_r(const Term& a) { return Complex(2.0) * a - apply_r(a); }

Term apply_poly_r(std::shared_ptr<const PolyApprox> p, const Term& a) {
  TermNode n;
  n.op = Op::poly_r;
  n.poly = std::move(p);
  n.args = {a};
  n.sort = range_of(n);
  return make_term(std::move(n));
}

Term apply_poly_two_minus_r(std::shared_ptr<const PolyApprox> p, const Term& a) {
  TermNode n;
  n.op = Op::poly_two_minus_r;
  n.poly = std::move(p);
  n.args = {a};
  n.sort = range_of(n);
  return make_term(std::move(n));
}

namespace {

Term modular_symbol(Op op, double t, const Term& a) {
  if (a.sort() != 1) throw SignatureError(symbol_info(op).name + " is declared on S_1 only");
  TermNode n;
  n.op = op;
  n.t = t;
  n.args = {a};
  n.sort = 1;
  return make_term(std::move(n));
}

}  // namespace

Term delta_it(double t, const Term& a) { return modular_symbol(Op::delta_it, t, a); }
Term sigma(double t, const Term& a) { return modular_symbol(Op::sigma, t, a); }

// ---------------------------------------------------------------------------
// Formulas

Formula make_formula(FormulaNode node) { return Formula(std::make_shared<const FormulaNode>(std::move(node))); }

Pred Formula::pred() const { return node_->pred; }

Formula Formula::constant(double value) {
  FormulaNode n;
  n.pred = Pred::constant;
  n.value = value;
  return make_formula(std::move(n));
}

Formula Formula::metric(const Term& a, const Term& b) {
  const SortIndex common = std::max(a.sort(), b.sort());
  FormulaNode n;
  n.pred = Pred::metric;
  n.terms = {lift(a, common), lift(b, common)};
  return make_formula(std::move(n));
}

namespace {

Formula term_predicate(Pred pred, const Term& a) {
  FormulaNode n;
  n.pred = pred;
  n.terms = {a};
  return make_formula(std::move(n));
}

Formula combine(Pred pred, std::vector<Formula> args, double value = 0.0) {
  FormulaNode n;
  n.pred = pred;
  n.args = std::move(args);
  n.value = value;
  return make_formula(std::move(n));
}

}  // namespace

Formula Formula::phi_re(const Term& a) { return term_predicate(Pred::phi_re, a); }
Formula Formula::phi_im(const Term& a) { return term_predicate(Pred::phi_im, a); }
Formula Formula::op_norm(const Term& a) { return term_predicate(Pred::op_norm, a); }
Formula Formula::right_norm(const Term& a) { return term_predicate(Pred::right_norm, a); }
Formula Formula::sharp_norm(const Term& a) { return metric(a, Term::zero(1)); }
Formula Formula::phi_norm(const Term& a) { return sqrt(phi_re(adjoint(a) * a)); }

Formula abs(const Formula& f) { return combine(Pred::abs, {f}); }
Formula tsub(const Formula& f, const Formula& g) { return combine(Pred::tsub, {f, g}); }
Formula max(std::vector<Formula> fs) { return combine(Pred::max, std::move(fs)); }
Formula operator+(const Formula& f, const Formula& g) { return combine(Pred::add, {f, g}); }
Formula operator-(const Formula& f, const Formula& g) { return combine(Pred::sub, {f, g}); }
Formula operator*(double c, const Formula& f) { return combine(Pred::scale, {f}, c); }
Formula sqrt(const Formula& f) { return combine(Pred::sqrt, {f}); }

// ---------------------------------------------------------------------------
// Interpretation

std::string_view corruption_name(Corruption c) {
  switch (c) {
    case Corruption::none: return "none";
    case Corruption::p_identity: return "p-identity";
    case Corruption::q_zero: return "q-zero";
    case Corruption::r_identity: return "r-identity";
    case Corruption::phi_unnormalized: return "phi-unnormalized";
    case Corruption::sigma_identity: return "sigma-identity";
  }
  return "none";
}

std::optional<Corruption> parse_corruption(std::string_view name) {
  for (auto c : {Corruption::none, Corruption::p_identity, Corruption::q_zero, Corruption::r_identity,
                 Corruption::phi_unnormalized, Corruption::sigma_identity}) {
    if (corruption_name(c) == name) return c;
  }
  return std::nullopt;
}

Instance corrupted_instance(const WStarSpace& space, Corruption c) {
  if (c != Corruption::phi_unnormalized) return Instance(space);
  std::vector<std::size_t> sizes(space.sizes().begin(), space.sizes().end());
  std::vector<CMatrix> rho;
  for (std::size_t b = 0; b < space.block_count(); ++b) rho.push_back(space.rho(b) * Complex(1.25));
  return Instance(make_space(std::move(sizes), std::move(rho), {.bypass_trace_check = true}));
}

AlgebraElement Interpretation::p(const AlgebraElement& x) const {
  if (corruption_ == Corruption::p_identity) return x;
  return p_element(instance_->rvd(), x);
}

AlgebraElement Interpretation::q(const AlgebraElement& x) const {
  if (corruption_ == Corruption::q_zero) return space().zero();
  return q_element(instance_->rvd(), x);
}

AlgebraElement Interpretation::r(const AlgebraElement& x) const {
  if (corruption_ == Corruption::r_identity) return x;
  return r_element(instance_->rvd(), x);
}

AlgebraElement Interpretation::delta_it(double t, const AlgebraElement& x) const {
  const auto& s = space();
  return s.gns_recover(delta_power(instance_->modular(), Complex(0.0, t), s.gns_embed(x)));
}

AlgebraElement Interpretation::sigma(double t, const AlgebraElement& x) const {
  if (corruption_ == Corruption::sigma_identity) return x;
  return sigma_t(instance_->modular(), x, t);
}

Complex Interpretation::phi(const AlgebraElement& x) const { return space().state(x); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <class Apply>
AlgebraElement horner(const PolyApprox& p, const AlgebraElement& v, Apply apply_operator) {
  const Complex c = p.center.value();
  const Complex inv_h = 1.0 / p.half_width.value();
  AlgebraElement acc = p.coeffs.back().value() * v;
  for (std::size_t k = p.coeffs.size() - 1; k-- > 0;) {
    acc = inv_h * (apply_operator(acc) - c * acc) + p.coeffs[k].value() * v;
  }
  return acc;
}

}  // namespace

AlgebraElement evaluate(const Term& term, const Interpretation& interp, const Environment& env) {
  const TermNode& n = term.node();
  const auto arg = [&](std::size_t i) { return evaluate(n.args[i], interp, env); };
  switch (n.op) {
    case Op::variable: {
      const auto it = env.find(n.name);
      if (it == env.end()) throw MissingInterpretation("unbound variable " + n.name);
      return it->second;
    }
    case Op::zero: return interp.space().zero();
    case Op::one: return interp.space().identity();
    case Op::add: return arg(0) + arg(1);
    case Op::sub: return arg(0) - arg(1);
    case Op::mul: return arg(0) * arg(1);
    case Op::adjoint: return arg(0).adjoint();
    case Op::scale: return n.scalar * arg(0);
    case Op::include: return arg(0);
    case Op::p: return interp.p(arg(0));
    case Op::q: return interp.q(arg(0));
    case Op::r: return interp.r(arg(0));
    case Op::poly_r:
      return horner(*n.poly, arg(0), [&](const AlgebraElement& w) { return interp.r(w); });
    case Op::poly_two_minus_r:
      return horner(*n.poly, arg(0), [&](const AlgebraElement& w) { return Complex(2.0) * w - interp.r(w); });
    case Op::delta_it: return interp.delta_it(n.t, arg(0));
    case Op::sigma: return interp.sigma(n.t, arg(0));
  }
  throw MissingInterpretation("no interpretation for term");
}

double evaluate(const Formula& formula, const Interpretation& interp, const Environment& env) {
  const FormulaNode& n = formula.node();
  const auto term = [&](std::size_t i) { return evaluate(n.terms[i], interp, env); };
  const auto arg = [&](std::size_t i) { return evaluate(n.args[i], interp, env); };
  switch (n.pred) {
    case Pred::constant: return n.value;
    case Pred::metric: return interp.space().sharp_norm(term(0) - term(1));
    case Pred::phi_re: return interp.phi(term(0)).real();
    case Pred::phi_im: return interp.phi(term(0)).imag();
    case Pred::op_norm: return interp.space().op_norm(term(0));
    case Pred::right_norm: return interp.space().right_norm(term(0));
    case Pred::abs: return std::abs(arg(0));
    case Pred::tsub: return std::max(0.0, arg(0) - arg(1));
    case Pred::max: {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n.args.size(); ++i) m = std::max(m, arg(i));
      return m;
    }
    case Pred::add: return arg(0) + arg(1);
    case Pred::sub: return arg(0) - arg(1);
    case Pred::scale: return n.value * arg(0);
    case Pred::sqrt: return std::sqrt(std::max(0.0, arg(0)));
  }
  throw MissingInterpretation("no interpretation for formula");
}

double sort_excess(const Term& term, const Interpretation& interp, const Environment& env) {
  double worst = 0.0;
  for (const auto& a : term.node().args) worst = std::max(worst, sort_excess(a, interp, env));
  const double bound = term.sort().convert_to<double>();
  if (std::isfinite(bound)) {
    const double tb = interp.space().total_bound(evaluate(term, interp, env));
    worst = std::max(worst, tb / bound - 1.0);
  }
  return worst;
}

double sort_excess(const Formula& formula, const Interpretation& interp, const Environment& env) {
  double worst = 0.0;
  for (const auto& t : formula.node().terms) worst = std::max(worst, sort_excess(t, interp, env));
  for (const auto& f : formula.node().args) worst = std::max(worst, sort_excess(f, interp, env));
  return worst;
}

// ---------------------------------------------------------------------------
// Schema generation

namespace {

std::string format_id(const std::string& name, const std::vector<std::pair<std::string, double>>& params) {
  std::string id = name;
  if (params.empty()) return id;
  id += '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s=%g", i ? "," : "", params[i].first.c_str(), params[i].second);
    id += buf;
  }
  return id + ')';
}

class SchemaBuilder {
 public:
  SchemaBuilder(Theory theory, std::vector<AxiomSchema>& out) : theory_(theory), out_(out) {}

  void add(int axiom, const std::string& name, std::vector<std::pair<std::string, double>> params,
           std::vector<BoundVariable> prefix, Formula body, WitnessOracle witness = {},
           std::string witness_description = {}) {
    AxiomSchema s;
    s.id = format_id(name, params);
    s.theory = theory_;
    s.axiom = axiom;
    s.params = std::move(params);
    s.prefix = std::move(prefix);
    s.body = std::move(body);
    s.witness = std::move(witness);
    s.witness_description = std::move(witness_description);
    out_.push_back(std::move(s));
  }

 private:
  Theory theory_;
  std::vector<AxiomSchema>& out_;
};

BoundVariable sup(std::string name, int sort) { return {Quantifier::sup, std::move(name), sort}; }
BoundVariable inf(std::string name, int sort) { return {Quantifier::inf, std::move(name), sort}; }

constexpr Complex kScalar{0.5, 0.75};

void star_algebra_axioms(SchemaBuilder& b, int n) {
  const Term x = Term::variable("x", n), y = Term::variable("y", n), z = Term::variable("z", n);
  const Term zero = Term::zero(n), one = Term::one(n);
  const std::vector<std::pair<std::string, double>> p{{"n", n}};
  const auto xyz = std::vector{sup("x", n), sup("y", n), sup("z", n)};
  const auto xy = std::vector{sup("x", n), sup("y", n)};
  const auto only_x = std::vector{sup("x", n)};
  using F = Formula;
  b.add(1, "ax1.add_assoc", p, xyz, F::metric((x + y) + z, x + (y + z)));
  b.add(1, "ax1.add_comm", p, xy, F::metric(x + y, y + x));
  b.add(1, "ax1.add_zero", p, only_x, F::metric(x + zero, x));
  b.add(1, "ax1.sub", p, xy, F::metric(x - y, x + Complex(-1.0) * y));
  b.add(1, "ax1.mul_assoc", p, xyz, F::metric((x * y) * z, x * (y * z)));
  b.add(1, "ax1.distrib_left", p, xyz, F::metric(x * (y + z), x * y + x * z));
  b.add(1, "ax1.distrib_right", p, xyz, F::metric((x + y) * z, x * z + y * z));
  b.add(1, "ax1.unit_left", p, only_x, F::metric(one * x, x));
  b.add(1, "ax1.unit_right", p, only_x, F::metric(x * one, x));
  b.add(1, "ax1.scalar_mul", p, xy, F::metric(kScalar * (x * y), (kScalar * x) * y));
  b.add(1, "ax1.scalar_add", p, xy, F::metric(kScalar * (x + y), kScalar * x + kScalar * y));
  b.add(1, "ax1.adj_involution", p, only_x, F::metric(adjoint(adjoint(x)), x));
  b.add(1, "ax1.adj_add", p, xy, F::metric(adjoint(x + y), adjoint(x) + adjoint(y)));
  b.add(1, "ax1.adj_mul", p, xy, F::metric(adjoint(x * y), adjoint(y) * adjoint(x)));
  b.add(1, "ax1.adj_scalar", p, only_x, F::metric(adjoint(kScalar * x), std::conj(kScalar) * adjoint(x)));
}

void state_axioms(SchemaBuilder& b, int n) {
  const Term x = Term::variable("x", n), y = Term::variable("y", n);
  const std::vector<std::pair<std::string, double>> p{{"n", n}};
  const auto xy = std::vector{sup("x", n), sup("y", n)};
  const auto only_x = std::vector{sup("x", n)};
  using F = Formula;
  const double lr = kScalar.real(), li = kScalar.imag();
  b.add(2, "ax2.additive_re", p, xy, abs(F::phi_re(x + y) - F::phi_re(x) - F::phi_re(y)));
  b.add(2, "ax2.additive_im", p, xy, abs(F::phi_im(x + y) - F::phi_im(x) - F::phi_im(y)));
  b.add(2, "ax2.homogeneous_re", p, only_x,
        abs(F::phi_re(kScalar * x) - (lr * F::phi_re(x) - li * F::phi_im(x))));
  b.add(2, "ax2.homogeneous_im", p, only_x,
        abs(F::phi_im(kScalar * x) - (lr * F::phi_im(x) + li * F::phi_re(x))));
  b.add(2, "ax2.positive", p, only_x, tsub(F::constant(0.0), F::phi_re(adjoint(x) * x)));
  b.add(2, "ax2.positive_im", p, only_x, abs(F::phi_im(adjoint(x) * x)));
  b.add(2, "ax2.hermitian_re", p, only_x, abs(F::phi_re(adjoint(x)) - F::phi_re(x)));
  b.add(2, "ax2.hermitian_im", p, only_x, abs(F::phi_im(adjoint(x)) + F::phi_im(x)));
}

void connecting_map_axioms(SchemaBuilder& b, int m, int n) {
  const Term x = Term::variable("x", m), y = Term::variable("y", m);
  const Term ix = include(x, n), iy = include(y, n);
  const std::vector<std::pair<std::string, double>> p{{"m", m}, {"n", n}};
  const auto xy = std::vector{sup("x", m), sup("y", m)};
  using F = Formula;
  b.add(3, "ax3.add", p, xy, F::metric(ix + iy, x + y));
  b.add(3, "ax3.mul", p, xy, F::metric(ix * iy, x * y));
  b.add(3, "ax3.adj", p, {sup("x", m)}, F::metric(adjoint(ix), adjoint(x)));
  b.add(3, "ax3.phi", p, {sup("x", m)}, abs(F::phi_re(ix) - F::phi_re(x)) + abs(F::phi_im(ix) - F::phi_im(x)));
}

void metric_axioms(SchemaBuilder& b, int n) {
  const Term x = Term::variable("x", n), y = Term::variable("y", n);
  const Term diff = x - y;
  const std::vector<std::pair<std::string, double>> p{{"n", n}};
  const auto xy = std::vector{sup("x", n), sup("y", n)};
  using F = Formula;
  const Formula sharp =
      sqrt(0.5 * (F::phi_re(adjoint(diff) * diff) + F::phi_re(diff * adjoint(diff))));
  b.add(4, "ax4.sharp", p, xy, abs(F::metric(x, y) - sharp));
  b.add(4, "ax4.diameter", p, xy, tsub(F::metric(x, y), F::constant(2.0 * n)));
}

void total_bound_axioms(SchemaBuilder& b, int n, int k) {
  const Term x = Term::variable("x", n), y = Term::variable("y", k);
  const std::vector<std::pair<std::string, double>> p{{"n", n}, {"k", k}};
  const auto xy = std::vector{sup("x", n), sup("y", k)};
  using F = Formula;
  const auto schema = [&](const Term& v) {
    const Formula yy = static_cast<double>(n) * static_cast<double>(n) * F::phi_re(adjoint(y) * y);
    return max({tsub(F::phi_re(adjoint(v * y) * (v * y)), yy), tsub(F::phi_re(adjoint(y * v) * (y * v)), yy)});
  };
  b.add(5, "ax5", p, xy, schema(x));
  b.add(5, "ax5.adj", p, xy, schema(adjoint(x)));
}

void inclusion_norm_axiom(SchemaBuilder& b, int n) {
  const Term x = Term::variable("x", 1);
  b.add(6, "ax6.norm", {{"n", n}}, {sup("x", 1)},
        abs(Formula::sharp_norm(include(x, n)) - Formula::sharp_norm(x)));
}

void inclusion_state_axiom(SchemaBuilder& b, int n, int k) {
  const Term x = Term::variable("x", 1), z = Term::variable("z", k);
  const Term zx = z * x, zix = z * include(x, n);
  b.add(6, "ax6.state", {{"n", n}, {"k", k}}, {sup("x", 1), sup("z", k)},
        abs(Formula::phi_re(adjoint(zx) * zx) - Formula::phi_re(adjoint(zix) * zix)));
}

void range_axioms(SchemaBuilder& b, int n, int k) {
  const Term x = Term::variable("x", n), y = Term::variable("y", 1);
  using F = Formula;
  const Formula one = F::constant(1.0);
  const Formula violation =
      max({tsub(F::op_norm(x), one), tsub(F::right_norm(x), one), tsub(F::right_norm(adjoint(x)), one)});
  WitnessOracle witness = [](const Interpretation& interp, const Environment& env) {
    const AlgebraElement& xv = env.at("x");
    const double tb = interp.space().total_bound(xv);
    return Environment{{"y", tb > 1.0 ? Complex(1.0 / tb) * xv : xv}};
  };
  b.add(7, "ax7", {{"n", n}, {"k", k}}, {sup("x", n), inf("y", 1)},
        tsub(F::metric(x, include(y, n)), violation), std::move(witness), "y = x / max(1, total_bound(x))");
}

void projection_axioms(SchemaBuilder& b, int n) {
  const Term x = Term::variable("x", n), y = Term::variable("y", 1);
  const std::vector<std::pair<std::string, double>> p{{"n", n}};
  using F = Formula;
  const Term px = apply_p(x);
  b.add(8, "ax8.self_adjoint", p, {sup("x", n)}, F::metric(px, adjoint(px)));
  b.add(8, "ax8.orthogonal", p, {sup("x", n), sup("y", 1)}, abs(F::phi_re((y + adjoint(y)) * (x - px))));
  const Complex i(0.0, 1.0);
  b.add(9, "ax9", p, {sup("x", n)}, F::metric(apply_q(x), i * apply_p(-i * x)));
  b.add(10, "ax10", p, {sup("x", n)}, F::metric(apply_r(x), px + apply_q(x)));
}

void closure_axioms(SchemaBuilder& b, double a, int n) {
  const Term x = Term::variable("x", n), y = Term::variable("y", n);
  using F = Formula;
  const Term lhs = Complex(2.0) * apply_r(apply_two_minus_r(x));
  const Term rhs = Complex(std::exp(-a)) * apply_two_minus_r(apply_two_minus_r(y)) +
                   Complex(std::exp(a)) * apply_r(apply_r(y));
  WitnessOracle witness = [a](const Interpretation& interp, const Environment& env) {
    const auto& s = interp.space();
    const GnsVector hx =
        multiplier(interp.instance().modular(), MultiplierKind::h, a, s.gns_embed(env.at("x")));
    return Environment{{"y", s.gns_recover(hx)}};
  };
  b.add(11, "ax11", {{"a", a}, {"n", n}}, {sup("x", n), inf("y", n)}, F::metric(lhs, rhs), std::move(witness),
        "y = h_a(log Delta) x");
}

void modular_axioms(SchemaBuilder& b, const RvdData& rvd, double t, int m, int n) {
  const ModularApprox approx = approximate_delta_it(rvd, t, m, n);
  auto p_m = std::make_shared<const PolyApprox>(approx.p_m);
  auto p_n = std::make_shared<const PolyApprox>(approx.p_n);
  const Term x = Term::variable("x", 1);
  const Term approximant = apply_poly_two_minus_r(p_m, apply_poly_r(p_n, x));
  using F = Formula;
  b.add(12, "ax12", {{"t", t}, {"m", m}, {"n", n}}, {sup("x", 1)},
        tsub(F::phi_norm(delta_it(t, x) - approximant), F::constant(approx.delta)));

  const Term av = Term::variable("a", 1);
  b.add(13, "ax13", {{"t", t}}, {sup("a", 1), sup("x", 1)},
        F::metric(sigma(t, av) * x, delta_it(t, av * delta_it(-t, x))));
}

}  // namespace

std::vector<AxiomSchema> generate_theory(Theory theory, const TheoryParams& params, const RvdData* rvd) {
  if (params.n_max < 1 || params.k_max < 1) throw DomainError("generate_theory: n_max and k_max must be positive");
  std::vector<AxiomSchema> out;
  SchemaBuilder b(theory, out);
  for (int n = 1; n <= params.n_max; ++n) star_algebra_axioms(b, n);
  for (int n = 1; n <= params.n_max; ++n) state_axioms(b, n);
  b.add(2, "ax2.unital", {}, {},
        abs(Formula::phi_re(Term::one(1)) - Formula::constant(1.0)) + abs(Formula::phi_im(Term::one(1))));
  for (int n = 2; n <= params.n_max; ++n)
    for (int m = 1; m < n; ++m) connecting_map_axioms(b, m, n);
  for (int n = 1; n <= params.n_max; ++n) metric_axioms(b, n);
  for (int n = 1; n <= params.n_max; ++n)
    for (int k = 1; k <= params.k_max; ++k) total_bound_axioms(b, n, k);
  for (int n = 2; n <= params.n_max; ++n) {
    inclusion_norm_axiom(b, n);
    for (int k = 1; k <= params.k_max; ++k) inclusion_state_axiom(b, n, k);
  }
  for (int n = 1; n <= params.n_max; ++n)
    for (int k = 1; k <= params.k_max; ++k) range_axioms(b, n, k);
  for (int n = 1; n <= params.n_max; ++n) projection_axioms(b, n);
  for (double a : params.a_list)
    for (int n = 1; n <= params.n_max; ++n) closure_axioms(b, a, n);
  if (theory == Theory::wstar_mod) {
    if (rvd == nullptr) throw MissingInterpretation("wstar_mod needs the bounded route to fit its polynomials");
    for (double t : params.t_list) modular_axioms(b, *rvd, t, params.m, params.n);
  }
  std::stable_sort(out.begin(), out.end(), [](const AxiomSchema& l, const AxiomSchema& r) { return l.axiom < r.axiom; });
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void validate_term(const Term& term, Theory theory, const AxiomSchema& schema) {
  const TermNode& n = term.node();
  const SymbolInfo& info = symbol_info(n.op);
  const auto fail = [&](const std::string& why) {
    throw SignatureError(schema.id + ": " + info.name + " " + why);
  };
  if (info.modular_only && theory != Theory::wstar_mod) fail("is not in the language of " + std::string(theory_name(theory)));
  if (info.arity != static_cast<int>(n.args.size())) fail("has the wrong arity");
  for (const auto& a : n.args) validate_term(a, theory, schema);
  switch (n.op) {
    case Op::variable: {
      const auto it = std::find_if(schema.prefix.begin(), schema.prefix.end(),
                                   [&](const BoundVariable& v) { return v.name == n.name; });
      if (it == schema.prefix.end()) fail("'" + n.name + "' is not bound");
      if (SortIndex(it->sort) != n.sort) fail("'" + n.name + "' used at the wrong sort");
      return;
    }
    case Op::include:
      if (!(n.args[0].sort() < n.sort)) fail("must map into a larger sort");
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
      if (n.args[0].sort() != n.args[1].sort()) fail("arguments live in different sorts");
      break;
    case Op::delta_it:
    case Op::sigma:
      if (n.args[0].sort() != 1) fail("is declared on S_1 only");
      break;
    default:
      break;
  }
  if (range_of(n) != n.sort) fail("has a range sort that disagrees with the signature");
}

void validate_formula(const Formula& f, Theory theory, const AxiomSchema& schema) {
  const FormulaNode& n = f.node();
  if (n.pred == Pred::metric && n.terms[0].sort() != n.terms[1].sort()) {
    throw SignatureError(schema.id + ": d_n compares different sorts");
  }
  for (const auto& t : n.terms) validate_term(t, theory, schema);
  for (const auto& a : n.args) validate_formula(a, theory, schema);
}

}  // namespace

void validate(const AxiomSchema& schema) {
  bool seen_inf = false;
  for (const auto& v : schema.prefix) {
    if (v.quantifier == Quantifier::inf) seen_inf = true;
    else if (seen_inf) throw SignatureError(schema.id + ": sup after inf is not supported");
    if (v.sort < 1) throw SignatureError(schema.id + ": sorts are indexed from 1");
  }
  validate_formula(schema.body, schema.theory, schema);
}

// ---------------------------------------------------------------------------
// Evaluation of schemas

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

AlgebraElement clip_to_sort(const WStarSpace& s, AlgebraElement x, int sort) {
  const double tb = s.total_bound(x);
  if (tb > sort) x = Complex(sort / tb) * x;
  return x;
}

class SchemaEvaluator {
 public:
  SchemaEvaluator(const AxiomSchema& schema, const Interpretation& interp, const EvalConfig& config)
      : schema_(schema), interp_(interp), config_(config) {
    for (const auto& v : schema.prefix) (v.quantifier == Quantifier::sup ? sups_ : infs_).push_back(v);
  }

  DefectEntry run() {
    const std::uint64_t stream = config_.seed ^ fnv1a(schema_.id);
    std::mt19937_64 rng(stream);
    DefectEntry e;
    e.id = schema_.id;
    e.axiom = schema_.axiom;
    e.seed = config_.seed;
    e.witnessed = infs_.empty() || (config_.use_witness && static_cast<bool>(schema_.witness));

    Environment best;
    double best_value = -std::numeric_limits<double>::infinity();
    const int draws = sups_.empty() ? 1 : config_.samples;
    for (int i = 0; i < draws; ++i) {
      Environment env;
      for (const auto& v : sups_) env.emplace(v.name, interp_.space().sample_sort(v.sort, rng));
      const double value = value_at(env);
      if (value > best_value) {
        best_value = value;
        best = std::move(env);
      }
    }
    e.samples = draws;
    if (config_.refine && !sups_.empty()) e.samples += refine(best, best_value, rng);

    Environment full = best;
    complete(full);
    e.defect = std::max(0.0, best_value);
    e.sort_excess = std::max(0.0, sort_excess(schema_.body, interp_, full));
    for (const auto& v : infs_) {
      const double tb = interp_.space().total_bound(full.at(v.name));
      e.sort_excess = std::max(e.sort_excess, tb / v.sort - 1.0);
    }
    e.pass = std::isfinite(e.defect) && e.defect <= config_.tolerance && e.sort_excess <= config_.tolerance;
    e.witness = std::move(full);
    return e;
  }

 private:
  // Fills in the inf-variables at their witnesses, or at the best of a
  // fixed batch of draws.
  void complete(Environment& env) const {
    if (infs_.empty()) return;
    if (config_.use_witness && schema_.witness) {
      for (auto& [name, value] : schema_.witness(interp_, env)) env.insert_or_assign(name, std::move(value));
      return;
    }
    std::mt19937_64 rng(config_.seed ^ fnv1a(schema_.id) ^ 0x9e3779b97f4a7c15ull);
    Environment best_env = env;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < config_.inf_samples; ++i) {
      Environment trial = env;
      for (const auto& v : infs_) trial.insert_or_assign(v.name, interp_.space().sample_sort(v.sort, rng));
      const double value = evaluate(schema_.body, interp_, trial);
      if (value < best) {
        best = value;
        best_env = std::move(trial);
      }
    }
    env = std::move(best_env);
  }

  double value_at(const Environment& outer) const {
    Environment env = outer;
    complete(env);
    return evaluate(schema_.body, interp_, env);
  }

  // Random coordinate-wise perturbations with steps from 0.1 down to 1e-3,
  // scaled by the sort; keeps a move when it raises the value.
  int refine(Environment& best, double& best_value, std::mt19937_64& rng) const {
    constexpr int steps = 20;
    const auto& s = interp_.space();
    int evaluations = 0;
    for (int k = 0; k < steps; ++k) {
      const double step = 0.1 * std::pow(1e-2, static_cast<double>(k) / (steps - 1));
      Environment direction;
      for (const auto& v : sups_) {
        AlgebraElement d = s.sample_gaussian(rng);
        const double len = d.blocks.frobenius_norm();
        direction.emplace(v.name, Complex(step * v.sort / std::max(len, 1e-300)) * d);
      }
      for (double sign : {1.0, -1.0}) {
        Environment trial;
        for (const auto& v : sups_) {
          trial.emplace(v.name,
                        clip_to_sort(s, best.at(v.name) + Complex(sign) * direction.at(v.name), v.sort));
        }
        const double value = value_at(trial);
        ++evaluations;
        if (value > best_value) {
          best_value = value;
          best = std::move(trial);
          break;
        }
      }
    }
    return evaluations;
  }

  const AxiomSchema& schema_;
  const Interpretation& interp_;
  const EvalConfig& config_;
  std::vector<BoundVariable> sups_;
  std::vector<BoundVariable> infs_;
};

}  // namespace

DefectEntry evaluate(const AxiomSchema& schema, const Interpretation& interp, const EvalConfig& config) {
  if (config.samples < 1) throw DomainError("evaluate: need at least one sample");
  return SchemaEvaluator(schema, interp, config).run();
}

bool DefectReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const DefectEntry& e) { return e.pass; });
}

const DefectEntry* DefectReport::worst() const {
  const DefectEntry* w = nullptr;
  for (const auto& e : checks)
    if (w == nullptr || e.defect > w->defect) w = &e;
  return w;
}

DefectReport check_theory(const Instance& instance, Theory theory, const TheoryParams& params,
                          const EvalConfig& config, Corruption corruption) {
  std::optional<Instance> local;
  if (corruption == Corruption::phi_unnormalized) local.emplace(corrupted_instance(instance.space(), corruption));
  const Instance& used = local ? *local : instance;
  const Interpretation interp(used, corruption);

  DefectReport report;
  report.theory = theory;
  report.seed = config.seed;
  report.tolerance = config.tolerance;
  report.samples = config.samples;
  report.corruption = std::string(corruption_name(corruption));
  for (const auto& schema : generate_theory(theory, params, &used.rvd())) {
    validate(schema);
    report.checks.push_back(evaluate(schema, interp, config));
  }
  return report;
}

}  // namespace modbench
