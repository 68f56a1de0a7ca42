#include <gtest/gtest.h>

#include <filesystem>

#include "modbench/io.hpp"
#include "oracles.hpp"

using namespace modbench;

TEST(InstanceJson, RoundTripIsBitExact) {
  const auto space = random_space({2, 3}, 5, 0.02);
  const auto text = instance_to_json(space);
  const auto back = instance_from_json(text);
  ASSERT_EQ(back.block_count(), 2u);
  for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(back.rho(b), space.rho(b));
  EXPECT_EQ(instance_to_json(back), text);
}

TEST(InstanceJson, Errors) {
  EXPECT_THROW(instance_from_json("{"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"blocks":[2]})"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"blocks":[1],"rho_blocks":[[[1.0]]]})"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"blocks":[1],"rho_blocks":[[[[0.5,0]]]]})"), TraceError);
  EXPECT_THROW(instance_from_json(R"({"blocks":[1],"rho_blocks":[[[[-1,0]]]]})", {.normalize = true}), NotPositive);
  const auto ok = instance_from_json(R"({"blocks":[1],"rho_blocks":[[[[0.5,0]]]]})", {.normalize = true});
  EXPECT_NEAR(ok.total_trace(), 1.0, 1e-15);
}

TEST(ElementJson, RoundTrip) {
  const auto space = oracle::qubit().space();
  const auto x = space.unit(0, 0, 1) + Complex(0, 2) * space.unit(0, 1, 1);
  EXPECT_EQ(element_from_json(element_to_json(x), space), x);
  EXPECT_THROW(element_from_json(R"({"element_blocks":[[[[1,0]]]]})", space), FormatError);
}

TEST(PolyJson, RoundTrip) {
  const auto p = fit_power_it(1.0, 8, {0.5, 1.5});
  const auto back = poly_from_json(poly_to_json(p));
  EXPECT_EQ(back.coeffs, p.coeffs);
  EXPECT_EQ(back.center, p.center);
  EXPECT_EQ(back.half_width, p.half_width);
  EXPECT_EQ(back.sup_error, p.sup_error);
  EXPECT_EQ(back.evaluate(0.9), p.evaluate(0.9));
}

TEST(PolyJson, DegreeMismatch) {
  EXPECT_THROW(poly_from_json(R"({"t":1,"degree":2,"center":[1,1],"half_width":[1,1],"coeffs":[[1,1,0,1]],)"
                              R"("interval":[0.5,1.5],"sup_error":0.1})"),
               FormatError);
}

TEST(Files, WriteThenRead) {
  const auto path = std::filesystem::temp_directory_path() / "modbench_io_test.json";
  write_text(path, "{\"a\":1}\n");
  EXPECT_EQ(read_text(path), "{\"a\":1}\n");
  std::filesystem::remove(path);
  EXPECT_THROW(read_text(path), FormatError);
}

TEST(Reports, LemmaReportListsFailures) {
  LemmaReport report;
  report.checks.push_back({.id = "x", .statement = "s", .kind = CheckKind::bound, .pass = false});
  report.checks.push_back({.id = "y", .statement = "s", .kind = CheckKind::diagnostic, .pass = false});
  const auto text = lemma_report_to_json(report, {});
  EXPECT_NE(text.find("\"failures\": [\n    \"x\"\n  ]"), std::string::npos);
  EXPECT_NE(text.find("\"pass\": false"), std::string::npos);
}
