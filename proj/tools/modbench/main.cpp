// modbench: instance generation, lemma suites, axiom checks, polynomial
// coefficients and small oracle queries. Exit codes: 0 pass, 1 a check
// failed, 2 bad input or usage.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modbench/approx.hpp"
#include "modbench/axioms.hpp"
#include "modbench/instance.hpp"
#include "modbench/io.hpp"
#include "modbench/lemmas.hpp"

namespace {

using namespace modbench;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

constexpr std::uint64_t kDefaultSeed = 7;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// --seed, then MODBENCH_SEED, then the default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MODBENCH_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw UsageError(std::string("MODBENCH_SEED is not an unsigned integer: ") + env);
    }
  }
  return kDefaultSeed;
}

/// Writes to the file if one was given, else to stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

/// Human-readable lines go to stderr when the JSON owns stdout.
std::ostream& log_stream(const std::string& path) { return (path.empty() || path == "-") ? std::cerr : std::cout; }

Instance load_instance(const std::string& path) { return Instance(instance_from_json(read_text(path))); }

// ---------------------------------------------------------------------------

struct GenArgs {
  std::vector<std::size_t> blocks;
  std::optional<std::uint64_t> seed;
  double min_eig = 0.02;
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  if (args.blocks.empty()) throw UsageError("--blocks needs at least one block size");
  for (auto n : args.blocks)
    if (n < 1 || n > 64) throw UsageError("block sizes must lie in 1..64");
  if (!(args.min_eig >= 1e-6)) throw UsageError("--min-eig must be at least 1e-6");
  std::size_t total = 0;
  for (auto n : args.blocks) total += n;
  if (args.min_eig * static_cast<double>(total) >= 1.0) throw UsageError("--min-eig too large for a unit-trace state");

  const auto space = random_space(args.blocks, resolve_seed(args.seed), args.min_eig);
  emit(args.out, instance_to_json(space));
  return kPass;
}

struct LemmaArgs {
  std::string in;
  std::string report;
  std::optional<std::uint64_t> seed;
  LemmaConfig config;
};

int cmd_lemmas(LemmaArgs args) {
  const auto instance = load_instance(args.in);
  args.config.seed = resolve_seed(args.seed);
  const auto report = run_lemma_suite(instance, args.config);
  emit(args.report, lemma_report_to_json(report, args.config));

  auto& log = log_stream(args.report);
  for (const auto* c : report.failures())
    log << "FAIL " << c->id << " defect=" << c->defect << " violations=" << c->violations << "/" << c->trials << "\n";
  log << (report.pass() ? "PASS" : "FAIL") << " lemmas: " << report.checks.size() << " checks, seed " << report.seed
      << "\n";
  return report.pass() ? kPass : kFail;
}

struct AxiomArgs {
  std::string in;
  std::string report;
  std::string theory = "wstar";
  std::string control = "none";
  std::optional<std::uint64_t> seed;
  EvalConfig config;
  TheoryParams params;
};

int cmd_axioms(AxiomArgs args) {
  Theory theory;
  try {
    theory = parse_theory(args.theory);
  } catch (const UnknownTheory& e) {
    throw UsageError(e.what());
  }
  const auto corruption = parse_corruption(args.control);
  if (!corruption) throw UsageError("unknown negative control: " + args.control);
  if (args.config.samples < 1) throw UsageError("--samples must be positive");
  if (!(args.config.tolerance > 0.0)) throw UsageError("--tol must be positive");

  const auto instance = load_instance(args.in);
  if (*corruption == Corruption::sigma_identity) {
    if (theory != Theory::wstar_mod) throw UsageError("sigma-identity only applies to --theory wstar_mod");
    if (instance.space().is_tracial()) throw UsageError("sigma-identity needs a non-tracial instance");
  }

  args.config.seed = resolve_seed(args.seed);
  const auto report = check_theory(instance, theory, args.params, args.config, *corruption);
  emit(args.report, defect_report_to_json(report, args.params));

  auto& log = log_stream(args.report);
  for (const auto& e : report.checks)
    if (!e.pass) log << "FAIL " << e.id << " defect=" << e.defect << " sort_excess=" << e.sort_excess << "\n";
  if (const auto* worst = report.worst())
    log << (report.pass() ? "PASS" : "FAIL") << " " << theory_name(theory) << ": " << report.checks.size()
        << " schemas, worst " << worst->id << " defect=" << worst->defect << ", seed " << report.seed << "\n";
  return report.pass() ? kPass : kFail;
}

struct ApproxArgs {
  std::string in;
  std::string out;
  double t = 1.0;
  int m = 10;
  int n = 10;
};

int cmd_approx(const ApproxArgs& args) {
  if (args.m < 1 || args.n < 1) throw UsageError("--m and --n must be positive");
  const auto instance = load_instance(args.in);
  const auto approx = approximate_delta_it(instance.rvd(), args.t, args.m, args.n);
  const double defect = operator_defect(instance.modular(), instance.rvd(), approx);
  emit(args.out, modular_approx_to_json(approx, defect));

  const bool sound = defect <= approx.delta;
  log_stream(args.out) << (sound ? "PASS" : "FAIL") << " approx t=" << args.t << " m=" << args.m << " n=" << args.n
                       << ": defect " << defect << " <= delta " << approx.delta << " (degrees " << approx.p_m.degree
                       << ", " << approx.p_n.degree << ")\n";
  return sound ? kPass : kFail;
}

struct QueryArgs {
  std::string in;
  std::string what;
  std::string element;
  double t = 0.0;
};

void print_values(std::span<const double> values) {
  std::cout << "[";
  for (std::size_t i = 0; i < values.size(); ++i) std::cout << (i ? ", " : "") << values[i];
  std::cout << "]\n";
}

int cmd_query(const QueryArgs& args) {
  const auto instance = load_instance(args.in);
  const auto& space = instance.space();
  std::cout.precision(17);
  auto element = [&] {
    if (args.element.empty()) throw UsageError("--element is required for " + args.what);
    return element_from_json(read_text(args.element), space);
  };

  if (args.what == "delta-spectrum") {
    print_values(instance.modular().delta_spectrum());
  } else if (args.what == "r-spectrum") {
    print_values(instance.rvd().r_spectrum());
  } else if (args.what == "norms") {
    const auto x = element();
    std::cout << "{\"op\": " << space.op_norm(x) << ", \"phi\": " << space.phi_norm(x)
              << ", \"sharp\": " << space.sharp_norm(x) << ", \"right\": " << space.right_norm(x)
              << ", \"total\": " << space.total_bound(x) << "}\n";
  } else if (args.what == "state") {
    const auto z = space.state(element());
    std::cout << "[" << z.real() << ", " << z.imag() << "]\n";
  } else if (args.what == "sigma") {
    std::cout << element_to_json(sigma_t(instance.modular(), element(), args.t));
  } else if (args.what == "p") {
    std::cout << element_to_json(p_element(instance.rvd(), element()));
  } else {
    throw UsageError("unknown query: " + args.what);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular theory workbench for finite-dimensional W*-probability spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "modbench 0.1.0");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Random faithful state on a direct sum of matrix blocks");
  gen_cmd->add_option("--blocks", gen.blocks, "Block sizes, e.g. 2,3")->required()->delimiter(',');
  gen_cmd->add_option("--seed", gen.seed, "RNG seed (falls back to MODBENCH_SEED)");
  gen_cmd->add_option("--min-eig", gen.min_eig, "Eigenvalue floor of rho");
  gen_cmd->add_option("--out", gen.out, "Instance file (stdout if omitted)");

  LemmaArgs lemmas;
  auto* lemmas_cmd = app.add_subcommand("lemmas", "Run the norm-bound and identity suite on an instance");
  lemmas_cmd->add_option("--in", lemmas.in, "Instance file")->required();
  lemmas_cmd->add_option("--report", lemmas.report, "Report file (stdout if omitted)");
  lemmas_cmd->add_option("--seed", lemmas.seed, "RNG seed (falls back to MODBENCH_SEED)");
  lemmas_cmd->add_option("--trials", lemmas.config.trials, "Random trials per bound")->check(CLI::PositiveNumber);
  lemmas_cmd->add_option("--identity-samples", lemmas.config.identity_samples, "Samples per identity")
      ->check(CLI::PositiveNumber);
  lemmas_cmd->add_option("--tol", lemmas.config.identity_tolerance, "Identity tolerance")->check(CLI::PositiveNumber);

  AxiomArgs axioms;
  auto* axioms_cmd = app.add_subcommand("axioms", "Evaluate the axiom schemas of a theory on an instance");
  axioms_cmd->add_option("--in", axioms.in, "Instance file")->required();
  axioms_cmd->add_option("--theory", axioms.theory, "wstar or wstar_mod");
  axioms_cmd->add_option("--report", axioms.report, "Report file (stdout if omitted)");
  axioms_cmd->add_option("--seed", axioms.seed, "RNG seed (falls back to MODBENCH_SEED)");
  axioms_cmd->add_option("--samples", axioms.config.samples, "Sup samples per schema");
  axioms_cmd->add_option("--tol", axioms.config.tolerance, "Defect tolerance");
  axioms_cmd->add_option("--negative-control", axioms.control,
                         "none, p-identity, q-zero, r-identity, phi-unnormalized, sigma-identity");
  axioms_cmd->add_flag("!--no-refine", axioms.config.refine, "Skip local refinement of the sup");
  axioms_cmd->add_option("--n-max", axioms.params.n_max, "Largest sort index")->check(CLI::Range(1, 8));
  axioms_cmd->add_option("--k-max", axioms.params.k_max, "Largest second sort index")->check(CLI::Range(1, 8));
  axioms_cmd->add_option("--a-list", axioms.params.a_list, "Multiplier shifts")->delimiter(',');
  axioms_cmd->add_option("--t-list", axioms.params.t_list, "Modular times")->delimiter(',');
  axioms_cmd->add_option("--m", axioms.params.m, "Accuracy index for p_m")->check(CLI::Range(1, 1000));
  axioms_cmd->add_option("--n", axioms.params.n, "Accuracy index for p_n")->check(CLI::Range(1, 1000));

  ApproxArgs approx;
  auto* approx_cmd = app.add_subcommand("approx", "Rational polynomial pair for Delta^{it} and its certified bound");
  approx_cmd->add_option("--in", approx.in, "Instance file")->required();
  approx_cmd->add_option("--t", approx.t, "Modular time");
  approx_cmd->add_option("--m", approx.m, "Accuracy index for p_m");
  approx_cmd->add_option("--n", approx.n, "Accuracy index for p_n");
  approx_cmd->add_option("--out", approx.out, "Coefficient file (stdout if omitted)");

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Print one oracle value for an instance");
  query_cmd->add_option("--in", query.in, "Instance file")->required();
  query_cmd->add_option("--what", query.what, "delta-spectrum, r-spectrum, norms, state, sigma, p")->required();
  query_cmd->add_option("--element", query.element, "Element file ({\"element_blocks\": ...})");
  query_cmd->add_option("--t", query.t, "Modular time for sigma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*lemmas_cmd) return cmd_lemmas(lemmas);
    if (*axioms_cmd) return cmd_axioms(axioms);
    if (*approx_cmd) return cmd_approx(approx);
    if (*query_cmd) return cmd_query(query);
  } catch (const UsageError& e) {
    std::cerr << "modbench: " << e.what() << "\n";
    return kUsage;
  } catch (const modbench::Error& e) {
    std::cerr << "modbench: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
