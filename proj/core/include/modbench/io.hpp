#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "modbench/approx.hpp"
#include "modbench/axioms.hpp"
#include "modbench/lemmas.hpp"
#include "modbench/space.hpp"

namespace modbench {

// All functions below produce or consume JSON text. Malformed input throws
// FormatError; a well-formed instance that is not a faithful state throws
// the space errors (NotPositive, TraceError).

/// {"blocks":[2,3],"rho_blocks":[[[[re,im],...],...],...]}
std::string instance_to_json(const WStarSpace& space);
WStarSpace instance_from_json(std::string_view text, SpaceOptions options = {});

/// {"element_blocks":[...]} in the same nested layout as rho_blocks.
std::string element_to_json(const AlgebraElement& x);
AlgebraElement element_from_json(std::string_view text, const WStarSpace& space);

std::string poly_to_json(const PolyApprox& p);
PolyApprox poly_from_json(std::string_view text);

/// The coefficient file of the approx command: both polynomials, δ, the
/// sort index q and the measured operator defect.
std::string modular_approx_to_json(const ModularApprox& approx, double measured_defect);

std::string defect_report_to_json(const DefectReport& report, const TheoryParams& params);
std::string lemma_report_to_json(const LemmaReport& report, const LemmaConfig& config);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace modbench
