#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "modbench/instance.hpp"

namespace modbench {

enum class CheckKind {
  bound,       // lhs ≤ rhs on every trial
  identity,    // residual ≤ tolerance
  margin,      // a strictly positive quantity
  diagnostic,  // reported only, never fails the suite
};

std::string_view check_kind_name(CheckKind kind);

struct LemmaCheck {
  std::string id;
  std::string statement;
  CheckKind kind = CheckKind::identity;
  int trials = 0;
  int violations = 0;
  /// bound: largest lhs − rhs (clamped at 0); identity: largest residual;
  /// margin: the observed margin.
  double defect = 0.0;
  /// bound only: largest lhs/rhs seen.
  double worst_ratio = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct LemmaConfig {
  /// Random trials per norm bound.
  int trials = 500;
  /// Random samples per identity.
  int identity_samples = 20;
  std::uint64_t seed = 7;
  double identity_tolerance = 1e-8;
  /// Bounds pass when lhs ≤ rhs·(1 + bound_rel) + bound_abs.
  double bound_rel = 1e-9;
  double bound_abs = 1e-12;
  std::vector<double> lambdas_re{-1.0, 0.0, -2.0};
  std::vector<double> lambdas_im{0.0, 1.0, 3.0};
  std::vector<double> t_list{0.5, 1.0};
  std::vector<int> mn_list{10, 50};
  int sech_terms = 10;
};

struct LemmaReport {
  std::uint64_t seed = 0;
  int trials = 0;
  double identity_tolerance = 0.0;
  std::vector<LemmaCheck> checks;

  bool pass() const;
  const LemmaCheck* find(std::string_view id) const;
  /// Failing non-diagnostic checks.
  std::vector<const LemmaCheck*> failures() const;
};

/// Every quantitative lemma that survives in finite dimensions, run on one
/// instance. Deterministic in config.seed.
LemmaReport run_lemma_suite(const Instance& instance, const LemmaConfig& config = {});

}  // namespace modbench
