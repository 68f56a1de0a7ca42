// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "modbench/approx.hpp"
#include "modbench/axioms.hpp"
#include "modbench/instance.hpp"
#include "modbench/lemmas.hpp"

using namespace modbench;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int number, const char* title, const Outcome& o) {
  std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", number, title, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<std::vector<std::size_t>> kPatterns{{2}, {3}, {2, 2}, {2, 3}};
constexpr int kInstances = 20;
constexpr double kFloor = 0.02;

WStarSpace qubit() {
  return make_space({2}, {CMatrix::diagonal(std::vector<double>{2.0 / 3.0, 1.0 / 3.0})});
}

std::vector<Instance> random_instances() {
  std::vector<Instance> out;
  for (int i = 0; i < kInstances; ++i)
    out.emplace_back(random_space(kPatterns[i % kPatterns.size()], 1000 + i, kFloor));
  return out;
}

// Checks whose zero-violation record is the norm-bound criterion.
const std::vector<std::string> kBoundChecks{
    "p.commutant_norm", "p.norm",          "p.right_norm",         "p.total",
    "resolvent.norm",   "resolvent.right_norm", "h.contraction",   "spectral.powers",
    "spectral.right_norm", "spectral.total", "g.right_norm",         "g.norm",
};

}  // namespace

int main() {
  const auto t_start = Clock::now();

  // 1. Route agreement, timed from instance construction.
  std::vector<Instance> instances;
  {
    const auto start = Clock::now();
    instances = random_instances();
    double worst = 0;
    for (const auto& inst : instances)
      for (double t : {0.5, 1.0, 2.0}) {
        const CMatrix spectral = inst.modular().function_matrix(
            [t](double mu) { return std::exp(Complex(0, t * std::log(mu))); });
        worst = std::max(worst, op_norm(delta_it_rvd_matrix(inst.rvd(), t) - spectral));
      }
    const double elapsed = seconds_since(start);
    report(1, "route agreement",
           {worst <= 1e-7 && elapsed < 10.0,
            fmt("%d instances, max op-norm gap %.3g (<= 1e-7), %.2f s (< 10 s)", kInstances, worst, elapsed)});
  }

  const Instance qubit_instance(qubit());
  std::vector<const Instance*> all;
  for (const auto& inst : instances) all.push_back(&inst);
  all.push_back(&qubit_instance);

  // Lemma suite once per instance; criteria 2, 3, 4, 6, 8 read from it.
  LemmaConfig lemma_config;
  lemma_config.trials = 500;
  std::vector<LemmaReport> lemma_reports;
  for (const auto* inst : all) lemma_reports.push_back(run_lemma_suite(*inst, lemma_config));

  const auto max_defect = [&](const std::string& id) {
    double worst = 0;
    for (const auto& r : lemma_reports)
      if (const auto* c = r.find(id)) worst = std::max(worst, c->defect);
    return worst;
  };
  const auto all_pass = [&](const std::string& id) {
    return std::all_of(lemma_reports.begin(), lemma_reports.end(), [&](const LemmaReport& r) {
      const auto* c = r.find(id);
      return c != nullptr && c->pass;
    });
  };

  // 2. RvD facts: J, iP = Qi, the two Θ identities; spectral margin of R.
  {
    double worst = 0;
    double margin = 2.0;
    for (const auto* inst : all) {
      const auto& rvd = inst->rvd();
      const auto dim = inst->space().gns_dim();
      const auto& j = rvd.conjugation();
      worst = std::max(worst, j.antilinearity_defect());
      worst = std::max(worst, op_norm((j * j - RealLinearOperator::identity(dim)).matrix()));
      const auto omega = inst->space().omega();
      worst = std::max(worst, (apply(j, omega) - omega).norm());
      const RealLinearOperator i(imaginary_unit(dim));
      worst = std::max(worst, op_norm((i * rvd.p() - rvd.q() * i).matrix()));
      worst = std::max(worst, theta_identities_check(rvd, 20, 7).max_defect());
      const auto spec = rvd.r_spectrum();
      margin = std::min({margin, spec.front(), 2.0 - spec.back()});
    }
    report(2, "Rieffel-Van Daele identities",
           {worst <= 1e-8 && margin > 0.0,
            fmt("max defect %.3g (<= 1e-8), spec(R) inside (%.4f, 2 - %.4f)", worst, margin, margin)});
  }

  // 3. Norm-bound certificates.
  {
    bool ok = true;
    int min_trials = 1 << 30;
    long violations = 0;
    double worst_ratio = 0;
    std::string offender;
    for (const auto& id : kBoundChecks)
      for (const auto& r : lemma_reports) {
        const auto* c = r.find(id);
        if (c == nullptr) {
          ok = false;
          offender = id + " missing";
          continue;
        }
        min_trials = std::min(min_trials, c->trials);
        violations += c->violations;
        worst_ratio = std::max(worst_ratio, c->worst_ratio);
        if (c->violations > 0 && offender.empty()) offender = id;
      }
    ok = ok && violations == 0 && min_trials >= 500;
    report(3, "norm-bound certificates",
           {ok, fmt("%zu bounds x %zu instances, >= %d trials each, %ld violations, worst ratio %.4f%s%s",
                    kBoundChecks.size(), lemma_reports.size(), min_trials, violations, worst_ratio,
                    offender.empty() ? "" : ", first offender ", offender.c_str())});
  }

  // 4. Bridge identity for a in {0, 1, 2}.
  {
    const double worst = max_defect("h.bridge");
    report(4, "bridge identity", {all_pass("h.bridge") && worst <= 1e-8, fmt("max residual %.3g (<= 1e-8)", worst)});
  }

  // 5. Worked qubit example against the closed form ρ = diag(p1, p2).
  {
    const double p1 = 2.0 / 3.0, p2 = 1.0 / 3.0;
    const auto& space = qubit_instance.space();
    const auto& md = qubit_instance.modular();
    std::vector<double> gaps;
    const auto e12 = space.unit(0, 0, 1), e21 = space.unit(0, 1, 0);
    // ρ^{-1/2} e_ij ρ^{1/2} = √(p_j/p_i) e_ij
    gaps.push_back(std::abs(space.right_norm(e12) - std::sqrt(p2 / p1)) / 1e-10);
    gaps.push_back(std::abs(space.right_norm(e21) - std::sqrt(p1 / p2)) / 1e-10);
    std::vector<double> delta_expected{p2 / p1, 1.0, 1.0, p1 / p2};
    std::vector<double> r_expected;
    for (double d : delta_expected) r_expected.push_back(2.0 / (1.0 + d));
    std::sort(delta_expected.begin(), delta_expected.end());
    std::sort(r_expected.begin(), r_expected.end());
    const auto delta_spec = md.delta_spectrum();
    const auto r_spec = qubit_instance.rvd().r_spectrum();
    for (std::size_t k = 0; k < 4; ++k) {
      gaps.push_back(std::abs(delta_spec[k] - delta_expected[k]) / 1e-9);
      gaps.push_back(std::abs(r_spec[k] - r_expected[k]) / 1e-9);
    }
    const double log_ratio = std::log(p1 / p2);
    const auto xi = space.gns_embed(e12);
    const auto coefficient = [&](const GnsVector& v) { return std::abs(inner(v, xi) / inner(xi, xi)); };
    gaps.push_back(std::abs(coefficient(multiplier(md, MultiplierKind::h, 0.0, xi)) - 1.0 / std::cosh(log_ratio)) /
                   1e-10);
    gaps.push_back(std::abs(coefficient(gaussian_smooth(md, xi, 1.0)) - std::exp(-log_ratio * log_ratio / 4.0)) /
                   1e-10);
    const double worst = *std::max_element(gaps.begin(), gaps.end());
    report(5, "qubit example",
           {worst <= 1.0, fmt("%zu values, worst error at %.3g of its tolerance; r(e12)=%.12f h0=%.12f", gaps.size(),
                              worst, space.right_norm(e12),
                              coefficient(multiplier(md, MultiplierKind::h, 0.0, xi)))});
  }

  // 6. Series inversion against eigenvalue-wise inversion; tanh on E_c.
  {
    const double series = max_defect("g.inverse_series");
    const double center = max_defect("g.center");
    report(6, "g inversion",
           {all_pass("g.inverse_series") && all_pass("g.center") && series <= 1e-8 && center <= 1e-10,
            fmt("series vs direct %.3g (<= 1e-8), tanh on E_c %.3g (<= 1e-10)", series, center)});
  }

  // 7. Approximation soundness over the (t, m, n) grid.
  {
    bool ok = true;
    double worst_ratio = 0, worst_delta10 = 0;
    int cases = 0;
    for (const auto* inst : all)
      for (double t : {0.5, 1.0})
        for (int m : {10, 50})
          for (int n : {10, 50}) {
            const auto a = approximate_delta_it(inst->rvd(), t, m, n);
            const double measured = operator_defect(inst->modular(), inst->rvd(), a);
            const double recomputed = 1.0 / m + a.p_m.sup_abs / n;
            ok = ok && measured <= a.delta && std::abs(recomputed - a.delta) <= 1e-15;
            worst_ratio = std::max(worst_ratio, measured / a.delta);
            if (m == 10 && n == 10) worst_delta10 = std::max(worst_delta10, a.delta);
            ++cases;
          }
    ok = ok && worst_delta10 <= 0.21;
    report(7, "approximation soundness",
           {ok, fmt("%d cases, max defect/delta %.3f (<= 1), max delta at m=n=10 %.4f (<= 0.21)", cases, worst_ratio,
                    worst_delta10)});
  }

  // 8. Sech series.
  {
    const auto four = sech_series(4);
    const bool exact = four.coefficients == std::vector<BigRational>{BigRational(1, 2), BigRational(1, 8),
                                                                      BigRational(1, 16), BigRational(5, 128)};
    const double at_zero = sech_series(50).partial_sum(0.0);
    const bool truncation = all_pass("sech.truncation");
    report(8, "sech series",
           {exact && truncation && std::abs(at_zero - 1.0) <= 0.08,
            fmt("a1..a4 %s, truncation bound on eigencomponents %s, N=50 sum at 0 = %.5f", exact ? "exact" : "WRONG",
                truncation ? "holds" : "VIOLATED", at_zero)});
  }

  // 9. Axiom soundness with 500 samples per schema.
  {
    const auto start = Clock::now();
    EvalConfig config;
    config.samples = 500;
    bool ok = true;
    double worst = 0;
    std::size_t schemas = 0;
    std::string offender;
    for (const auto* inst : all)
      for (auto theory : {Theory::wstar, Theory::wstar_mod}) {
        const auto r = check_theory(*inst, theory, {}, config);
        schemas += r.checks.size();
        if (const auto* w = r.worst()) {
          worst = std::max(worst, w->defect);
          if (!r.pass() && offender.empty()) offender = w->id;
        }
        ok = ok && r.pass();
      }
    const double elapsed = seconds_since(start);
    report(9, "axiom soundness",
           {ok && worst <= 1e-6 && elapsed < 60.0,
            fmt("%zu schema evaluations, worst defect %.3g (<= 1e-6), %.1f s (< 60 s)%s%s", schemas, worst, elapsed,
                offender.empty() ? "" : ", failing ", offender.c_str())});
  }

  // 10. Negative controls on a non-tracial instance.
  {
    EvalConfig config;
    config.samples = 500;
    bool ok = true;
    std::string detail;
    for (auto c : {Corruption::p_identity, Corruption::q_zero, Corruption::r_identity, Corruption::phi_unnormalized,
                   Corruption::sigma_identity}) {
      const auto inst = corrupted_instance(qubit_instance.space(), c);
      const auto r = check_theory(inst, Theory::wstar_mod, {}, config, c);
      const double worst = r.worst() ? r.worst()->defect : 0.0;
      ok = ok && worst >= 0.01;
      detail += fmt("%s%s %.3g", detail.empty() ? "" : ", ", std::string(corruption_name(c)).c_str(), worst);
    }
    report(10, "negative controls", {ok, "worst defect per control (>= 0.01): " + detail});
  }

  // Diagnostics for the two literal constants that do not hold as printed.
  {
    long same_side = 0, same_side_trials = 0, sqrt_k = 0, sqrt_k_trials = 0;
    for (const auto& r : lemma_reports) {
      if (const auto* c = r.find("resolvent.right_norm_same_side")) {
        same_side += c->violations;
        same_side_trials += c->trials;
      }
      if (const auto* c = r.find("sharp_norm.sqrt_k")) {
        sqrt_k += c->violations;
        sqrt_k_trials += c->trials;
      }
    }
    std::printf("INFO resolvent right norm, same-side pairing: %ld / %ld trials exceed the bound\n", same_side,
                same_side_trials);
    std::printf("INFO sharp norm with constant sqrt(K): %ld / %ld trials exceed the bound\n", sqrt_k, sqrt_k_trials);
  }

  std::printf("%s: %d criteria failed, %.1f s\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures,
              seconds_since(t_start));
  return failures == 0 ? 0 : 1;
}
