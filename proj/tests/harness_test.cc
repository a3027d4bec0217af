// Copyright 2026 The Hyperlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hyperlab/hyperlab.hpp"

namespace hyperlab {
namespace {

Scenario from_text(const std::string& text) { return parse_scenario(nlohmann::json::parse(text)); }

TEST(Report, EmptyCsvIsHeaderOnly) {
  EXPECT_EQ(to_csv(Report{}), std::string(kCsvHeader) + "\n");
}

TEST(Report, JsonRoundTrip) {
  Report r;
  r.rows.push_back(make_row("x", "op", "tree", "g=a, \"q\"", Check::AbsLe, -0.125, 1.0 / 3.0, 0.5));
  r.rows.push_back(make_row("y", "op", "tree", "inf", Check::Ge, kInfinity, kInfinity, 1.0));
  r.rows.push_back(make_row("z", "op", "tree", "", Check::Info, 2.0, 3.0));
  Report back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
  ASSERT_EQ(back.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.rows[i], r.rows[i]) << i;
  }
}

TEST(Report, VerdictFollowsMargin) {
  EXPECT_TRUE(make_row("e", "o", "m", "", Check::Le, 1, 2, 2).pass);
  EXPECT_FALSE(make_row("e", "o", "m", "", Check::Le, 1, 2.5, 2).pass);
  EXPECT_TRUE(make_row("e", "o", "m", "", Check::AbsLe, -3, 5, 0).pass);
  EXPECT_FALSE(make_row("e", "o", "m", "", Check::AbsLe, 0.5, 1, 0.25).pass);
  EXPECT_DOUBLE_EQ(make_row("e", "o", "m", "", Check::Ge, 3, 4, 1).margin, 2);
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
}

TEST(Scenario, EmptyRunsClean) {
  RunOutcome out = run_scenario(from_text(R"({"seed": 3, "experiments": []})"));
  EXPECT_TRUE(out.report.rows.empty());
  EXPECT_EQ(out.exit_code(), kExitPass);
}

TEST(Scenario, MalformedKindIsConfigError) {
  EXPECT_THROW(from_text(R"({"models": {"m": {"kind": "sphere"}}, "experiments": []})"),
               ConfigError);
}

TEST(Scenario, UnknownModelAndOp) {
  EXPECT_THROW(from_text(R"({"experiments": [{"name": "x", "op": "length",
                              "params": {"model": "nowhere", "word": "a"}}]})"),
               ConfigError);
  RunOutcome out = run_scenario(
      from_text(R"({"experiments": [{"name": "x", "op": "frobnicate", "params": {}}]})"));
  EXPECT_EQ(out.exit_code(), kExitError);
  ASSERT_EQ(out.errors.size(), 1u);
}

TEST(Scenario, FailingCheckExitsOne) {
  RunOutcome out = run_scenario(from_text(R"({"experiments": [
      {"name": "x", "op": "length", "params": {"model": "tree", "word": "ab", "expect": 3}}]})"));
  EXPECT_EQ(out.exit_code(), kExitCheckFailed);
}

TEST(Scenario, SameSeedSameBytes) {
  const char* text = R"({"seed": 7, "experiments": [
      {"name": "c", "op": "cocycle_identity", "params": {"model": "tree", "samples": 50}},
      {"name": "r", "op": "cross_ratio_invariance", "params": {"model": "hplane", "samples": 20}}]})";
  std::string a = to_csv(run_scenario(from_text(text)).report);
  std::string b = to_csv(run_scenario(from_text(text)).report);
  EXPECT_EQ(a, b);
  EXPECT_GT(a.size(), std::string(kCsvHeader).size() + 1);
}

TEST(Scenario, StreamsIgnoreOrder) {
  std::string one = R"({"name": "c", "op": "cocycle_identity", "params": {"model": "tree", "samples": 30}})";
  std::string two = R"({"name": "s", "op": "stable_length", "params": {"model": "tree", "samples": 30}})";
  Report ab = run_scenario(from_text("{\"experiments\": [" + one + "," + two + "]}")).report;
  Report ba = run_scenario(from_text("{\"experiments\": [" + two + "," + one + "]}")).report;
  ASSERT_EQ(ab.rows.size(), ba.rows.size());
  EXPECT_EQ(ab.rows.front(), ba.rows.back());
}

TEST(Scenario, TreeExactnessFileAllPass) {
  Scenario s = load_scenario(HYPERLAB_SCENARIO_DIR "/tree-exactness.scenario");
  RunOutcome out = run_scenario(s);
  for (const auto& e : out.errors) {
    ADD_FAILURE() << e;
  }
  for (const auto& r : out.report.rows) {
    EXPECT_TRUE(r.pass) << r.experiment << " " << r.op << " " << r.input;
  }
  EXPECT_EQ(out.exit_code(), kExitPass);
}

TEST(Verify, QuickCoversEveryCriterion) {
  Scenario s = verify_scenario("quick");
  std::set<int> seen;
  for (const auto& e : s.experiments) {
    seen.insert(criterion_of(e.name));
  }
  EXPECT_EQ(seen.size(), verify_criteria().size());
  EXPECT_THROW(verify_scenario("slow"), ConfigError);
}

TEST(Verify, EmitWritesSideFiles) {
  auto dir = std::filesystem::temp_directory_path() / "hyperlab_harness_test";
  std::filesystem::remove_all(dir);
  RunOutcome out = run_scenario(from_text(R"({"experiments": [
      {"name": "d", "op": "descent", "params": {"model": "tree", "distance": 20000}}]})"));
  EXPECT_EQ(out.exit_code(), kExitPass);
  emit_outcome(out, dir, "report");
  EXPECT_TRUE(std::filesystem::exists(dir / "report.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  std::ifstream trace(dir / "d.trace.csv");
  std::string header;
  std::getline(trace, header);
  EXPECT_EQ(header, "step,point,rho_lower,target");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace hyperlab
