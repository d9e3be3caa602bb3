#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "rbk/csv.hpp"
#include "rbk/scenario.hpp"
#include "test_support.hpp"

namespace rbk {
namespace {

std::string error_text(const std::string& doc) {
  try {
    parse_scenario(doc);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(ParseScenario, MinimalDocumentGetsDefaults) {
  const Scenario s = parse_scenario(R"({"id": "mini", "polytope": {"kind": "interval", "a": 1}})");
  EXPECT_EQ(s.subvariety.kind, SubvarietyKind::Ambient);
  EXPECT_EQ(s.weight.reference.kind(), ReferenceKind::FubiniStudy);
  EXPECT_EQ(s.grid.n_per_axis, 257);
  EXPECT_DOUBLE_EQ(s.grid.halfwidth, 12.0);
  EXPECT_EQ(s.m_list, std::vector<int>{8});
  EXPECT_TRUE(s.wants("kernel"));
}

TEST(ParseScenario, RationalSides) {
  const Scenario s = parse_scenario(R"({"id": "r", "polytope": {"kind": "rectangle", "a": "3/2", "b": 2}})");
  EXPECT_EQ(s.polytope.a(), Rational(3, 2));
  EXPECT_EQ(s.polytope.b(), Rational(2));
}

TEST(ParseScenario, UnknownKeyReportsLine) {
  const std::string doc = "{\n  \"id\": \"x\",\n  \"polytope\": {\"kind\": \"interval\"},\n  \"colour\": 1\n}";
  EXPECT_EQ(testing::code_of([&] { parse_scenario(doc); }), ErrorCode::ParseError);
  EXPECT_NE(error_text(doc).find("line 4"), std::string::npos);
  EXPECT_NE(error_text(doc).find("colour"), std::string::npos);
}

TEST(ParseScenario, ValidationErrors) {
  EXPECT_NE(error_text(R"({"id": "x", "polytope": {"kind": "interval"}, "m_list": [0, 4]})").find("m >= 1 violated"),
            std::string::npos);
  EXPECT_EQ(testing::code_of([] { parse_scenario(R"({"id": "x", "polytope": {"kind": "interval"}, "m_list": [4, 2]})"); }),
            ErrorCode::ValidationError);
  EXPECT_EQ(testing::code_of([] { parse_scenario(R"({"id": "a/b", "polytope": {"kind": "interval"}})"); }),
            ErrorCode::ValidationError);
  EXPECT_EQ(testing::code_of([] {
              parse_scenario(R"({"id": "x", "polytope": {"kind": "interval"},
                                 "weight": {"perturbation": [{"kind": "quadratic"}]}})");
            }),
            ErrorCode::ValidationError);
  EXPECT_EQ(testing::code_of([] { parse_scenario("{\"id\": "); }), ErrorCode::ParseError);
  EXPECT_EQ(testing::code_of([] { parse_scenario(R"({"id": "x", "polytope": {"kind": "cube"}})"); }), ErrorCode::ParseError);
}

TEST(ShippedScenarios, AllParseWithUniqueIds) {
  std::set<std::string> ids;
  for (const auto& f : scenario_files(RBK_SCENARIO_DIR)) {
    const Scenario s = load_scenario(f);
    EXPECT_EQ(f.stem().string(), s.id);
    EXPECT_TRUE(ids.insert(s.id).second);
    EXPECT_NO_THROW(s.model());
  }
  EXPECT_EQ(ids.size(), 7u);
}

TEST(Csv, FormatsAndRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_double(x)), x);
  CsvTable t({"m", "B"});
  t.add_row(std::vector<double>{1, 2.5});
  t.add_row(std::vector<std::string>{"2", "x"});
  EXPECT_EQ(t.str(), "m,B\n1,2.5\n2,x\n");
}

TEST(Csv, AtomicWriteReplacesTarget) {
  const auto dir = std::filesystem::temp_directory_path() / "rbk_csv_test";
  std::filesystem::create_directories(dir);
  write_atomic(dir / "a.csv", "one\n");
  write_atomic(dir / "a.csv", "two\n");
  std::ifstream in(dir / "a.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "two");
  EXPECT_FALSE(std::filesystem::exists(dir / "a.csv.tmp"));
  EXPECT_EQ(testing::code_of([] { write_atomic("/proc/rbk/none.csv", "x"); }), ErrorCode::Io);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace rbk
