#include <gtest/gtest.h>

#include "modbench/lemmas.hpp"
#include "oracles.hpp"

using namespace modbench;

namespace {

LemmaConfig quick_config() {
  LemmaConfig c;
  c.trials = 100;
  c.identity_samples = 5;
  return c;
}

}  // namespace

TEST(LemmaSuite, QubitPasses) {
  const Instance inst(oracle::qubit().space());
  const auto report = run_lemma_suite(inst, quick_config());
  EXPECT_TRUE(report.pass());
  for (const auto* c : report.failures()) ADD_FAILURE() << c->id << " defect=" << c->defect;
}

TEST(LemmaSuite, TracialPasses) {
  const Instance inst(oracle::tracial_qubit().space());
  EXPECT_TRUE(run_lemma_suite(inst, quick_config()).pass());
}

TEST(LemmaSuite, RandomInstancesPass) {
  const std::vector<std::vector<std::size_t>> patterns{{3}, {2, 2}, {2, 3}};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Instance inst(oracle::random_density(patterns[seed - 1], 300 + seed).space());
    const auto report = run_lemma_suite(inst, quick_config());
    for (const auto* c : report.failures()) ADD_FAILURE() << "seed " << seed << ": " << c->id;
  }
}

TEST(LemmaSuite, ReportsKindsAndTrials) {
  const Instance inst(oracle::qubit().space());
  const auto cfg = quick_config();
  const auto report = run_lemma_suite(inst, cfg);
  const auto* p = report.find("p.commutant_norm");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, CheckKind::bound);
  EXPECT_GE(p->trials, cfg.trials);
  EXPECT_LE(p->worst_ratio, 1.0);
  const auto* route = report.find("route.delta_it");
  ASSERT_NE(route, nullptr);
  EXPECT_EQ(route->kind, CheckKind::identity);
  EXPECT_LT(route->defect, 1e-7);
  EXPECT_EQ(report.find("no.such.check"), nullptr);
}

TEST(LemmaSuite, LiteralSqrtKFormIsOnlyDiagnostic) {
  // On the qubit e12 already violates √K‖a‖_φ; the suite records it without failing.
  const Instance inst(oracle::qubit().space());
  const auto report = run_lemma_suite(inst, quick_config());
  const auto* c = report.find("sharp_norm.sqrt_k");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->kind, CheckKind::diagnostic);
  const auto& space = inst.space();
  const auto e12 = space.unit(0, 0, 1);
  EXPECT_GT(space.sharp_norm(e12), std::sqrt(space.total_bound(e12)) * space.phi_norm(e12));
}

TEST(LemmaSuite, DeterministicInSeed) {
  const Instance inst(oracle::random_density({2, 3}, 9).space());
  const auto a = run_lemma_suite(inst, quick_config());
  const auto b = run_lemma_suite(inst, quick_config());
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) EXPECT_EQ(a.checks[i].defect, b.checks[i].defect) << a.checks[i].id;
}
