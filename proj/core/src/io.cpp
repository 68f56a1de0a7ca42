#include "modbench/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace modbench {

using nlohmann::json;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json blocks_json(const BlockMatrix& b) {
  json out = json::array();
  for (const auto& blk : b.blocks()) out.push_back(matrix_json(blk));
  return out;
}

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw FormatError(std::string("missing key \"") + key + "\"");
  return obj.at(key);
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw FormatError(std::string(what) + ": expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const char* what) {
  if (!v.is_number_integer()) throw FormatError(std::string(what) + ": expected an integer");
  return v.get<std::int64_t>();
}

CMatrix matrix_from(const json& rows, std::size_t n, const char* what) {
  if (!rows.is_array() || rows.size() != n) throw FormatError(std::string(what) + ": expected " + std::to_string(n) + " rows");
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != n) throw FormatError(std::string(what) + ": ragged row");
    for (std::size_t j = 0; j < n; ++j) {
      const auto& z = row[j];
      if (!z.is_array() || z.size() != 2) throw FormatError(std::string(what) + ": entries are [re, im] pairs");
      m(i, j) = Complex(number(z[0], what), number(z[1], what));
    }
  }
  return m;
}

std::vector<CMatrix> blocks_from(const json& arr, std::span<const std::size_t> sizes, const char* what) {
  if (!arr.is_array() || arr.size() != sizes.size())
    throw FormatError(std::string(what) + ": expected one matrix per block");
  std::vector<CMatrix> out;
  for (std::size_t b = 0; b < sizes.size(); ++b) out.push_back(matrix_from(arr[b], sizes[b], what));
  return out;
}

json rational_json(const Rational& r) { return json::array({r.num, r.den}); }

Rational rational_from(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) throw FormatError(std::string(what) + ": expected [num, den]");
  Rational r{integer(v[0], what), integer(v[1], what)};
  if (r.den <= 0) throw FormatError(std::string(what) + ": denominator must be positive");
  return r;
}

json poly_json(const PolyApprox& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(json::array({c.re.num, c.re.den, c.im.num, c.im.den}));
  return {
      {"t", p.t},
      {"degree", p.degree},
      {"variable", "u = (x - center) / half_width"},
      {"center", rational_json(p.center)},
      {"half_width", rational_json(p.half_width)},
      {"coeffs", std::move(coeffs)},
      {"interval", json::array({p.interval.lo, p.interval.hi})},
      {"sup_error", p.sup_error},
      {"sup_abs", p.sup_abs},
      {"samples", p.samples},
  };
}

json environment_json(const Environment& env) {
  json out = json::object();
  for (const auto& [name, x] : env) out[name] = blocks_json(x.blocks);
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string instance_to_json(const WStarSpace& space) {
  json rho = json::array();
  for (std::size_t b = 0; b < space.block_count(); ++b) rho.push_back(matrix_json(space.rho(b)));
  json sizes = json::array();
  for (auto n : space.sizes()) sizes.push_back(n);
  return dump({{"blocks", std::move(sizes)}, {"rho_blocks", std::move(rho)}});
}

WStarSpace instance_from_json(std::string_view text, SpaceOptions options) {
  const json j = parse(text);
  const auto& blocks = field(j, "blocks");
  if (!blocks.is_array() || blocks.empty()) throw FormatError("blocks: expected a nonempty array");
  std::vector<std::size_t> sizes;
  for (const auto& b : blocks) {
    const auto n = integer(b, "blocks");
    if (n < 1 || n > 64) throw FormatError("blocks: sizes must lie in 1..64");
    sizes.push_back(static_cast<std::size_t>(n));
  }
  auto rho = blocks_from(field(j, "rho_blocks"), sizes, "rho_blocks");
  return make_space(std::move(sizes), std::move(rho), options);
}

std::string element_to_json(const AlgebraElement& x) { return dump({{"element_blocks", blocks_json(x.blocks)}}); }

AlgebraElement element_from_json(std::string_view text, const WStarSpace& space) {
  const json j = parse(text);
  auto blocks = blocks_from(field(j, "element_blocks"), space.sizes(), "element_blocks");
  return {BlockMatrix(std::move(blocks))};
}

std::string poly_to_json(const PolyApprox& p) { return dump(poly_json(p)); }

PolyApprox poly_from_json(std::string_view text) {
  const json j = parse(text);
  PolyApprox p;
  p.t = number(field(j, "t"), "t");
  p.center = rational_from(field(j, "center"), "center");
  p.half_width = rational_from(field(j, "half_width"), "half_width");
  const auto& coeffs = field(j, "coeffs");
  if (!coeffs.is_array() || coeffs.empty()) throw FormatError("coeffs: expected a nonempty array");
  for (const auto& c : coeffs) {
    if (!c.is_array() || c.size() != 4) throw FormatError("coeffs: entries are [num_re, den_re, num_im, den_im]");
    GaussianRational g{{integer(c[0], "coeffs"), integer(c[1], "coeffs")}, {integer(c[2], "coeffs"), integer(c[3], "coeffs")}};
    if (g.re.den <= 0 || g.im.den <= 0) throw FormatError("coeffs: denominators must be positive");
    p.coeffs.push_back(g);
  }
  p.degree = static_cast<int>(integer(field(j, "degree"), "degree"));
  if (p.degree != static_cast<int>(p.coeffs.size()) - 1) throw FormatError("degree does not match the coefficient count");
  const auto& interval = field(j, "interval");
  if (!interval.is_array() || interval.size() != 2) throw FormatError("interval: expected [lo, hi]");
  p.interval = {number(interval[0], "interval"), number(interval[1], "interval")};
  p.sup_error = number(field(j, "sup_error"), "sup_error");
  if (j.contains("sup_abs")) p.sup_abs = number(j.at("sup_abs"), "sup_abs");
  if (j.contains("samples")) p.samples = integer(j.at("samples"), "samples");
  return p;
}

std::string modular_approx_to_json(const ModularApprox& approx, double measured_defect) {
  return dump({
      {"t", approx.t},
      {"m", approx.m},
      {"n", approx.n},
      {"delta", approx.delta},
      {"q", approx.q.str()},
      {"measured_defect", measured_defect},
      {"sound", measured_defect <= approx.delta},
      {"p_m", poly_json(approx.p_m)},
      {"p_n", poly_json(approx.p_n)},
  });
}

std::string defect_report_to_json(const DefectReport& report, const TheoryParams& params) {
  json checks = json::array();
  for (const auto& e : report.checks) {
    checks.push_back({
        {"id", e.id},
        {"axiom", e.axiom},
        {"defect", e.defect},
        {"sort_excess", e.sort_excess},
        {"pass", e.pass},
        {"samples", e.samples},
        {"seed", e.seed},
        {"witnessed", e.witnessed},
        {"witness", environment_json(e.witness)},
    });
  }
  const auto* worst = report.worst();
  return dump({
      {"theory", theory_name(report.theory)},
      {"seed", report.seed},
      {"tolerance", report.tolerance},
      {"samples", report.samples},
      {"corruption", report.corruption},
      {"params",
       {{"n_max", params.n_max},
        {"k_max", params.k_max},
        {"a_list", params.a_list},
        {"t_list", params.t_list},
        {"m", params.m},
        {"n", params.n}}},
      {"pass", report.pass()},
      {"worst", worst ? json(worst->id) : json(nullptr)},
      {"checks", std::move(checks)},
  });
}

std::string lemma_report_to_json(const LemmaReport& report, const LemmaConfig& config) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json entry = {
        {"id", c.id},
        {"statement", c.statement},
        {"kind", check_kind_name(c.kind)},
        {"trials", c.trials},
        {"violations", c.violations},
        {"defect", c.defect},
        {"tolerance", c.tolerance},
        {"pass", c.pass},
    };
    if (c.kind == CheckKind::bound || c.kind == CheckKind::diagnostic) entry["worst_ratio"] = c.worst_ratio;
    checks.push_back(std::move(entry));
  }
  json failures = json::array();
  for (const auto* c : report.failures()) failures.push_back(c->id);
  return dump({
      {"seed", report.seed},
      {"trials", config.trials},
      {"identity_samples", config.identity_samples},
      {"identity_tolerance", config.identity_tolerance},
      {"bound_rel", config.bound_rel},
      {"bound_abs", config.bound_abs},
      {"pass", report.pass()},
      {"failures", std::move(failures)},
      {"checks", std::move(checks)},
  });
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

}  // namespace modbench
