#include <gtest/gtest.h>

#include <algorithm>

#include "tokenpacker/cost.h"
#include "tokenpacker/errors.h"
#include "tokenpacker/gradcheck.h"

namespace tpk {
namespace {

TEST(CostReportTest, SingleImageRows) {
  const auto report = build_cost_report(24, 24, {2, 3, 4}, 128);
  ASSERT_EQ(report.rows.size(), 4u);
  EXPECT_EQ(report.rows[0].projector, "mlp");
  EXPECT_EQ(report.rows[0].tokens.visual, 576u);
  EXPECT_EQ(report.rows[0].compression_ratio, 0.0);

  EXPECT_EQ(report.rows[1].tokens.visual, 144u);
  EXPECT_EQ(report.rows[1].compression_ratio, 0.75);
  EXPECT_EQ(report.rows[2].tokens.visual, 64u);
  EXPECT_NEAR(report.rows[2].compression_ratio, 1.0 - 64.0 / 576.0, 1e-15);
  EXPECT_EQ(report.rows[3].tokens.visual, 36u);
  EXPECT_EQ(report.rows[3].compression_ratio, 0.9375);

  EXPECT_EQ(report.rows[1].cost, 272.0 * 272.0);
  EXPECT_EQ(report.rows[0].cost, 704.0 * 704.0);
  EXPECT_NEAR(report.rows[1].relative_cost, 73984.0 / 495616.0, 1e-15);
}

TEST(CostReportTest, GridPlanCountsSeparators) {
  const auto report = build_cost_report(24, 24, {2}, 0, 4, 4);
  EXPECT_EQ(report.rows[1].tokens.visual, 2448u);
  EXPECT_EQ(report.rows[1].tokens.separators(), 17u);
  EXPECT_EQ(report.rows[0].tokens.visual, 17u * 576u);
  EXPECT_NEAR(report.rows[1].compression_ratio, 0.75, 1e-15);
}

TEST(CostReportTest, CostStrictlyIncreasingInVisualTokens) {
  double prev = -1.0;
  for (std::size_t v = 0; v <= 5000; v += 7) {
    const double c = quadratic_cost(v, 128);
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(CostReportTest, RejectsIndivisibleScale) {
  EXPECT_THROW(build_cost_report(24, 24, {5}, 128), IndivisibleGridError);
}

TEST(CostReportTest, SerialisesBothFormats) {
  const auto report = build_cost_report(24, 24, {2}, 128);
  const auto j = report.to_json();
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][1]["visual_tokens"], 144);
  const std::string tsv = report.to_tsv();
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 3);
}

TEST(GradcheckTest, DefaultsPass) {
  const auto report = run_gradcheck({});
  EXPECT_TRUE(report.passed()) << "worst " << report.worst();
  // 10 weight tensors, 2 levels, query source.
  EXPECT_EQ(report.entries.size(), 13u);
}

TEST(GradcheckTest, CorruptedBackwardFails) {
  GradcheckOptions opts;
  opts.corrupt_backward = true;
  EXPECT_FALSE(run_gradcheck(opts).passed());
}

TEST(GradcheckTest, LargerStepStillBounded) {
  GradcheckOptions small, large;
  large.eps = 1e-3;
  const double fine = run_gradcheck(small).worst();
  const double coarse = run_gradcheck(large).worst();
  EXPECT_GT(coarse, fine);
  EXPECT_LT(coarse, 1e-3);
}

TEST(GradcheckTest, RelativeErrorFloor) {
  EXPECT_EQ(relative_error(1.0, 1.0), 0.0);
  EXPECT_NEAR(relative_error(2.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(relative_error(1e-12, 0.0), 1e-6, 1e-18);
}

}  // namespace
}  // namespace tpk
