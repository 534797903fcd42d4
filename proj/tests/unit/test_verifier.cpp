#include <gtest/gtest.h>

#include "json.hpp"
#include "tautrel/errors.hpp"
#include "tautrel/verifier.hpp"

using namespace tautrel;

namespace {

SuiteConfig only(bool master, bool aeqb, bool string, int threads = 1) {
  SuiteConfig c;
  c.checks = {master, aeqb, aeqb, aeqb, string, false};
  c.threads = threads;
  return c;
}

}  // namespace

TEST(Master, SpecExamples) {
  auto e = check_master(0, 2, 1, {0});
  EXPECT_EQ(e.verdict, Verdict::Pass);
  EXPECT_FALSE(e.computed_degree);
  EXPECT_EQ(e.bound, -1);
  auto f = check_master(0, 1, 2, {0, 0});
  EXPECT_EQ(f.verdict, Verdict::Pass);
  EXPECT_EQ(f.computed_degree, 0);
  EXPECT_EQ(f.bound, 0);
  EXPECT_THROW(check_master(0, 1, 0, {}), std::invalid_argument);
}

TEST(AeqB, SpecExamples) {
  auto s2 = check_aeqb_2(0, 3, 0);
  EXPECT_EQ(s2.verdict, Verdict::Pass);
  EXPECT_FALSE(s2.computed_degree);
  EXPECT_EQ(check_aeqb_1(0, 2, 2, {0, 0}).verdict, Verdict::Pass);
  EXPECT_EQ(check_aeqb_3(1, 1).verdict, Verdict::Pass);
  EXPECT_THROW(check_aeqb_1(0, 2, 1, {0}), std::invalid_argument);
}

TEST(StringIdentity, LiteralFormFailsOnlyAtTheTopPower) {
  for (int g = 0; g <= 1; ++g)
    for (int n = 1; n <= 3; ++n) {
      if (2 * g - 1 + n <= 0) continue;
      for (int b = 1; b <= 4; ++b) {
        auto e = check_string_xi(g, n, b);
        const bool top = b == g + n - 1;
        EXPECT_EQ(e.verdict, top ? Verdict::Fail : Verdict::Pass) << g << n << b;
        if (top) {
          // the defect is the base polynomial, degree 2g
          EXPECT_FALSE(e.poly_if_fail.empty());
          EXPECT_EQ(e.computed_degree, 2 * g);
        }
        EXPECT_EQ(check_string_xi_stable(g, n, b).verdict, Verdict::Pass) << g << n << b;
      }
    }
  EXPECT_THROW(check_string_xi(0, 2, 0), std::invalid_argument);
}

TEST(StringIdentity, UnstableRootPart) {
  EXPECT_TRUE(unstable_root_part(0, 1, 0).is_zero());
  EXPECT_EQ(unstable_root_part(0, 2, 0), MultiPoly::parse("-1", vars_a(2)));
  EXPECT_EQ(unstable_root_part(1, 1, 0), MultiPoly::parse("-1/24*a1^2", vars_a(1)));
  EXPECT_TRUE(unstable_root_part(1, 1, 1).is_zero());
}

TEST(C1C2, Ranges) {
  EXPECT_EQ(check_c1_equals_c2(1, 0, 2).verdict, Verdict::Pass);
  EXPECT_EQ(check_c1_equals_c2(5, 2, 3).verdict, Verdict::Pass);
}

TEST(Suite, EmptyRange) {
  InstanceRange r;
  r.max_g = -1;
  auto rep = run_suite(r, SuiteConfig{});
  EXPECT_TRUE(rep.entries.empty());
  EXPECT_TRUE(rep.all_pass());
}

TEST(Suite, SmallRangePasses) {
  InstanceRange r;
  r.max_g = 1;
  r.max_n = 3;
  r.max_m = 2;
  auto rep = run_suite(r, only(true, true, false));
  EXPECT_GT(rep.entries.size(), 50u);
  EXPECT_TRUE(rep.all_pass()) << rep.summary_line();
  EXPECT_EQ(rep.summary_line().rfind("PASS 100% (", 0), 0u);
  EXPECT_GT(rep.equivalence_checked, 0);
  EXPECT_EQ(rep.equivalence_mismatches, 0);
  for (size_t i = 1; i < rep.entries.size(); ++i) EXPECT_NE(rep.entries[i - 1].key(), rep.entries[i].key());
}

TEST(Suite, ThreadCountDoesNotChangeTheReport) {
  InstanceRange r;
  r.max_g = 1;
  r.max_n = 3;
  r.max_m = 2;
  r.max_string_b = 3;
  auto one = run_suite(r, only(true, true, true, 1));
  auto three = run_suite(r, only(true, true, true, 3));
  EXPECT_EQ(one.to_json(false), three.to_json(false));
}

TEST(Suite, CalibrationExclusion) {
  InstanceRange r;
  r.max_g = 0;
  r.max_n = 2;
  r.max_m = 2;
  auto plan = plan_suite(r, only(true, false, false).checks);
  ASSERT_FALSE(plan.empty());
  r.calibration_exclusion.insert(plan[0].key());
  auto rep = run_suite(r, only(true, false, false));
  EXPECT_EQ(rep.entries.size(), plan.size() - 1);
  ASSERT_EQ(rep.excluded.size(), 1u);
  EXPECT_EQ(rep.excluded[0], plan[0].key());
  for (const auto& e : rep.entries) EXPECT_NE(e.key(), plan[0].key());
}

TEST(Suite, BeyondCalibrationIsListed) {
  InstanceRange r;
  r.max_g = 3;
  r.max_n = 1;
  r.max_m = 1;
  r.max_sum_b = 0;
  try {
    run_suite(r, only(true, false, false));
    FAIL() << "expected UncalibratedBase";
  } catch (const UncalibratedBase& e) {
    EXPECT_NE(std::string(e.what()).find("master|3|1|1|0"), std::string::npos) << e.what();
  }
}

TEST(Report, JsonShape) {
  InstanceRange r;
  r.max_g = 0;
  r.max_n = 2;
  r.max_m = 1;
  auto rep = run_suite(r, only(true, false, false));
  auto j = nlohmann::json::parse(rep.to_json(false));
  EXPECT_EQ(j["suite"], "suite");
  ASSERT_TRUE(j["instances"].is_array());
  ASSERT_FALSE(j["instances"].empty());
  const auto& first = j["instances"][0];
  for (const char* k : {"check", "g", "n", "m", "b", "bound", "computed_degree", "verdict", "poly_if_fail"})
    EXPECT_TRUE(first.contains(k)) << k;
  EXPECT_FALSE(first.contains("timing_ms"));
  EXPECT_TRUE(j["calibration"].contains("constants"));
  EXPECT_TRUE(j["summary"].is_object());
}
