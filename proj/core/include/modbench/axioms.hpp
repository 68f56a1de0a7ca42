#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modbench/approx.hpp"
#include "modbench/instance.hpp"

namespace modbench {

enum class Theory { wstar, wstar_mod };

/// "wstar" or "wstar_mod"; throws UnknownTheory otherwise.
Theory parse_theory(std::string_view name);
std::string_view theory_name(Theory theory);

/// Sort indices are natural numbers that grow fast under products and
/// polynomials, so they are kept exact.
using SortIndex = BigInt;

// ---------------------------------------------------------------------------
// Signature

enum class Op {
  variable,
  zero,
  one,
  add,
  sub,
  mul,
  adjoint,
  scale,
  include,
  p,
  q,
  r,
  poly_r,            // f(R_K) for a fitted polynomial f
  poly_two_minus_r,  // f(2 − R_K)
  delta_it,
  sigma,
};

enum class Pred {
  constant,
  metric,      // d_n
  phi_re,      // Re φ_n
  phi_im,      // Im φ_n
  op_norm,     // definable: sup_z ‖xz‖_φ/‖z‖_φ
  right_norm,  // definable: sup_z ‖zx‖_φ/‖z‖_φ
  abs,
  tsub,  // truncated subtraction
  max,
  add,
  sub,
  scale,
  sqrt,
};

struct SymbolInfo {
  std::string name;
  int arity = 0;
  /// Range sort as a function of the argument sort n, e.g. "S_{n^2}".
  std::string range;
  /// Modulus of uniform continuity per argument, e.g. "eps/n".
  std::string modulus;
  /// Only in the modular expansion.
  bool modular_only = false;
  /// Defined by a formula over the base symbols rather than primitive.
  bool definable = false;
};

const SymbolInfo& symbol_info(Op op);
const SymbolInfo& symbol_info(Pred pred);

/// Per-argument modulus δ(ε) of a function symbol on S_n.
double continuity_modulus(Op op, double n, double eps, Complex lambda = 1.0);

// ---------------------------------------------------------------------------
// Terms and formulas

struct TermNode;
struct FormulaNode;

/// A term over the signature. Builders compute the range sort and insert
/// the inclusion ι whenever arguments of different sorts meet.
class Term {
 public:
  Term() = default;

  Op op() const;
  const SortIndex& sort() const;
  const TermNode& node() const { return *node_; }

  static Term variable(std::string name, int sort);
  static Term zero(int sort);
  static Term one(int sort);

  /// Number of nodes.
  std::size_t size() const;

 private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  friend Term make_term(TermNode node);
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  Op op = Op::variable;
  SortIndex sort = 1;
  std::string name;               // variable
  Complex scalar = 1.0;           // scale
  double t = 0.0;                 // delta_it, sigma
  std::shared_ptr<const PolyApprox> poly;  // poly_*
  std::vector<Term> args;
};

Term include(const Term& x, const SortIndex& target);
Term operator+(const Term& a, const Term& b);
Term operator-(const Term& a, const Term& b);
Term operator*(const Term& a, const Term& b);
Term operator*(Complex lambda, const Term& a);
Term adjoint(const Term& a);
Term apply_p(const Term& a);
Term apply_q(const Term& a);
Term apply_r(const Term& a);
/// (2 − R)x, built as 2x − R(x).
Term apply_two_minus_r(const Term& a);
Term apply_poly_r(std::shared_ptr<const PolyApprox> p, const Term& a);
Term apply_poly_two_minus_r(std::shared_ptr<const PolyApprox> p, const Term& a);
Term delta_it(double t, const Term& a);
Term sigma(double t, const Term& a);

class Formula {
 public:
  Formula() = default;

  Pred pred() const;
  const FormulaNode& node() const { return *node_; }

  static Formula constant(double value);
  static Formula metric(const Term& a, const Term& b);
  static Formula phi_re(const Term& a);
  static Formula phi_im(const Term& a);
  static Formula op_norm(const Term& a);
  static Formula right_norm(const Term& a);
  /// d(a, 0), the #-norm.
  static Formula sharp_norm(const Term& a);
  /// √(Re φ(a*a)).
  static Formula phi_norm(const Term& a);

  friend Formula abs(const Formula& f);
  friend Formula tsub(const Formula& f, const Formula& g);
  friend Formula max(std::vector<Formula> fs);
  friend Formula operator+(const Formula& f, const Formula& g);
  friend Formula operator-(const Formula& f, const Formula& g);
  friend Formula operator*(double c, const Formula& f);
  friend Formula sqrt(const Formula& f);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  friend Formula make_formula(FormulaNode node);
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  Pred pred = Pred::constant;
  double value = 0.0;  // constant, scale factor
  std::vector<Term> terms;
  std::vector<Formula> args;
};

// ---------------------------------------------------------------------------
// Interpretation

/// The shipped negative controls.
enum class Corruption { none, p_identity, q_zero, r_identity, phi_unnormalized, sigma_identity };

std::string_view corruption_name(Corruption c);
/// "none", "p-identity", "q-zero", "r-identity", "phi-unnormalized",
/// "sigma-identity"; nullopt otherwise.
std::optional<Corruption> parse_corruption(std::string_view name);

/// The instance used for a control: phi_unnormalized rescales ρ by 5/4 and
/// bypasses the trace check, sigma_identity needs a non-tracial space and
/// otherwise the instance is rebuilt unchanged.
Instance corrupted_instance(const WStarSpace& space, Corruption c);

/// Symbols interpreted on an instance: algebra operations and φ from the
/// space, P, Q, R from the bounded route, Δ^{it} and σ_t from the spectral
/// route. A corruption replaces one of them.
class Interpretation {
 public:
  Interpretation(const Instance& instance, Corruption corruption = Corruption::none)
      : instance_(&instance), corruption_(corruption) {}

  const Instance& instance() const { return *instance_; }
  const WStarSpace& space() const { return instance_->space(); }
  Corruption corruption() const { return corruption_; }

  AlgebraElement p(const AlgebraElement& x) const;
  AlgebraElement q(const AlgebraElement& x) const;
  AlgebraElement r(const AlgebraElement& x) const;
  AlgebraElement delta_it(double t, const AlgebraElement& x) const;
  AlgebraElement sigma(double t, const AlgebraElement& x) const;
  Complex phi(const AlgebraElement& x) const;

 private:
  const Instance* instance_;
  Corruption corruption_;
};

using Environment = std::map<std::string, AlgebraElement, std::less<>>;

AlgebraElement evaluate(const Term& term, const Interpretation& interp, const Environment& env);
double evaluate(const Formula& formula, const Interpretation& interp, const Environment& env);

/// Largest relative excess max(0, total_bound/sort − 1) over all subterms.
double sort_excess(const Term& term, const Interpretation& interp, const Environment& env);
double sort_excess(const Formula& formula, const Interpretation& interp, const Environment& env);

// ---------------------------------------------------------------------------
// Schemas

enum class Quantifier { sup, inf };

struct BoundVariable {
  Quantifier quantifier = Quantifier::sup;
  std::string name;
  int sort = 1;
};

/// Constructive values for the inf-variables given the sup-variables.
using WitnessOracle = std::function<Environment(const Interpretation&, const Environment&)>;

struct AxiomSchema {
  std::string id;  // e.g. "ax5(n=1,k=2)"
  Theory theory = Theory::wstar;
  int axiom = 0;
  std::vector<std::pair<std::string, double>> params;
  /// sup-variables first, then inf-variables.
  std::vector<BoundVariable> prefix;
  Formula body;
  WitnessOracle witness;
  std::string witness_description;
};

struct TheoryParams {
  int n_max = 2;
  int k_max = 2;
  std::vector<double> a_list{1.0, 2.0};
  std::vector<double> t_list{0.5, 1.0};
  int m = 10;
  int n = 10;
};

/// Instantiates every schema of the theory on the parameter grid. The
/// modular expansion fits its polynomials on the spectrum of R, so it needs
/// the bounded route; throws MissingInterpretation without it.
std::vector<AxiomSchema> generate_theory(Theory theory, const TheoryParams& params, const RvdData* rvd = nullptr);

/// Checks that every symbol is declared for the theory and every stored
/// sort matches the signature's range rule. Throws SignatureError.
void validate(const AxiomSchema& schema);

struct EvalConfig {
  int samples = 500;
  std::uint64_t seed = 7;
  double tolerance = 1e-6;
  bool refine = true;
  /// When false, inf-quantifiers are minimized over inf_samples draws even
  /// if the schema carries a witness.
  bool use_witness = true;
  int inf_samples = 64;
};

struct DefectEntry {
  std::string id;
  int axiom = 0;
  double defect = 0.0;
  double sort_excess = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  bool witnessed = false;
  bool pass = false;
  /// The maximizing sup-variables and the inf-variables used there.
  Environment witness;
};

struct DefectReport {
  Theory theory = Theory::wstar;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  int samples = 0;
  std::string corruption;
  std::vector<DefectEntry> checks;

  bool pass() const;
  /// Entry with the largest defect, nullptr when empty.
  const DefectEntry* worst() const;
};

/// Sampled sup over sort draws plus a local refinement, inf by witness or
/// sampled minimization. Deterministic in (schema id, config.seed).
DefectEntry evaluate(const AxiomSchema& schema, const Interpretation& interp, const EvalConfig& config);

DefectReport check_theory(const Instance& instance, Theory theory, const TheoryParams& params,
                          const EvalConfig& config, Corruption corruption = Corruption::none);

}  // namespace modbench
