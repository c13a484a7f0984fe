#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "concordia/power.hpp"
#include "concordia/random.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace concordia;

namespace {

AnnotationTable responses(const std::vector<std::vector<std::string>>& rows) {
  std::vector<Record> recs;
  for (std::size_t u = 0; u < rows.size(); ++u)
    for (std::size_t r = 0; r < rows[u].size(); ++r)
      recs.push_back({"q" + std::to_string(u), "p" + std::to_string(r), rows[u][r]});
  return parse_long_records(recs);
}

const Scale kScale = parse_scale("Yes=1,Maybe=2,No=3");

double trapezoid(const DensityCurve& c) {
  double s = 0.0;
  for (std::size_t i = 1; i < c.grid.size(); ++i)
    s += 0.5 * (c.density[i] + c.density[i - 1]) * (c.grid[i] - c.grid[i - 1]);
  return s;
}

PowerSpec props(double p1, double p2, double power = 0.8) {
  PowerSpec s;
  s.power = power;
  s.effect = ProportionEffect{p1, p2};
  return s;
}

}  // namespace

TEST(ParseScale, ReadsPairs) {
  ASSERT_EQ(kScale.size(), 3u);
  EXPECT_EQ(kScale[1].first, Label("Maybe"));
  EXPECT_EQ(kScale[2].second, 3.0);
  EXPECT_ERROR_CODE(parse_scale("Yes"), ErrorCode::ParseError);
  EXPECT_ERROR_CODE(parse_scale("Yes=x"), ErrorCode::ParseError);
}

TEST(MeanItemScores, Examples) {
  auto s = mean_item_scores(responses({{"Yes", "Maybe", "No"}, {"Yes", "Yes", "Maybe"}}), kScale);
  EXPECT_EQ(s.scores[0], 2.0);
  EXPECT_NEAR(s.scores[1], 4.0 / 3.0, 1e-15);
  EXPECT_EQ(s.obs_counts[1], 3u);
}

TEST(MeanItemScores, UnmappedLabelRejected) {
  EXPECT_ERROR_CODE(mean_item_scores(responses({{"Yes", "Perhaps"}}), kScale), ErrorCode::UnmappedLabel);
}

TEST(MeanItemScores, SurveyShapeGivesFiftyScoresWithinScale) {
  Rng rng(79);
  std::vector<std::vector<std::string>> rows(50);
  const char* labels[] = {"Yes", "Maybe", "No"};
  for (auto& row : rows)
    for (int i = 0; i < 16; ++i) row.push_back(labels[rng.below(3)]);
  auto s = mean_item_scores(responses(rows), kScale);
  EXPECT_EQ(s.scores.size(), 50u);
  for (double v : s.scores) {
    EXPECT_GE(v, 1.0);
    EXPECT_LE(v, 3.0);
  }
}

TEST(MeanItemScores, InvariantUnderObservationOrder) {
  Rng rng(83);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> row;
    const std::size_t m = 1 + rng.below(20);
    const char* labels[] = {"Yes", "Maybe", "No"};
    for (std::size_t i = 0; i < m; ++i) row.push_back(labels[rng.below(3)]);
    const double base = mean_item_scores(responses({row}), kScale).scores[0];
    for (std::size_t i = row.size(); i > 1; --i) std::swap(row[i - 1], row[rng.below(i)]);
    EXPECT_EQ(mean_item_scores(responses({row}), kScale).scores[0], base);
  }
}

TEST(SilvermanBandwidth, MatchesRuleOfThumb) {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 10.0};
  // sd = sqrt(12.5), IQR (type 7) = 4 - 2 = 2.
  const double expected = 0.9 * std::min(std::sqrt(12.5), 2.0 / 1.34) * std::pow(5.0, -0.2);
  EXPECT_NEAR(silverman_bandwidth(x), expected, 1e-15);
}

TEST(SilvermanBandwidth, ConstantDataDegenerate) {
  std::vector<double> x(10, 2.0);
  EXPECT_ERROR_CODE(silverman_bandwidth(x), ErrorCode::DegenerateSample);
  EXPECT_ERROR_CODE(density_estimate(x), ErrorCode::DegenerateSample);
}

TEST(DensityEstimate, SymmetricSampleGivesSymmetricCurve) {
  std::vector<double> x{-3.0, -1.0, -0.5, 0.5, 1.0, 3.0};
  auto c = density_estimate(x, std::nullopt, 401);
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    EXPECT_NEAR(c.grid[i], -c.grid[c.grid.size() - 1 - i], 1e-12);
    EXPECT_NEAR(c.density[i], c.density[c.grid.size() - 1 - i], 1e-9);
  }
}

TEST(DensityEstimate, GridAndIntegral) {
  Rng rng(89);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(2 + rng.below(200));
    for (auto& v : x) v = rng.normal() * (0.1 + rng.uniform());
    auto c = density_estimate(x, std::nullopt, 64 + rng.below(512));
    EXPECT_NEAR(trapezoid(c), 1.0, 1e-3);
    EXPECT_TRUE(std::is_sorted(c.grid.begin(), c.grid.end(), std::less_equal<>()));
    EXPECT_TRUE(std::all_of(c.density.begin(), c.density.end(), [](double d) { return d >= 0.0; }));
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    EXPECT_NEAR(c.grid.front(), *lo - 3.0 * c.bandwidth, 1e-12);
    EXPECT_NEAR(c.grid.back(), *hi + 3.0 * c.bandwidth, 1e-12);
  }
}

TEST(DensityEstimate, StandardNormalModeNearZero) {
  Rng rng(97);
  std::vector<double> x(10000);
  for (auto& v : x) v = rng.normal();
  auto c = density_estimate(x);
  const auto mode = c.grid[std::max_element(c.density.begin(), c.density.end()) - c.density.begin()];
  EXPECT_NEAR(mode, 0.0, 0.1);
  // Peak of the standard normal density.
  EXPECT_NEAR(*std::max_element(c.density.begin(), c.density.end()), 0.3989, 0.03);
}

TEST(DensityEstimate, Errors) {
  std::vector<double> empty;
  EXPECT_ERROR_CODE(density_estimate(empty), ErrorCode::EmptyScores);
  std::vector<double> x{1.0, 2.0};
  EXPECT_ERROR_CODE(density_estimate(x, -1.0), ErrorCode::InvalidArgument);
}

TEST(SubsampleConvergence, FullSizeIsZero) {
  auto x = oracle::bimodal_sample(1, 300);
  ConvergenceOptions opt;
  opt.sizes = {300};
  opt.reps = 3;
  auto pts = subsample_convergence(x, opt);
  EXPECT_EQ(pts[0].mean_jsd, 0.0);
  EXPECT_EQ(pts[0].rep_count, 3u);
}

TEST(SubsampleConvergence, ConstantDataWithFixedBandwidthIsZero) {
  std::vector<double> x(100, 2.0);
  ConvergenceOptions opt;
  opt.sizes = {5, 50, 100};
  opt.bandwidth = 0.2;
  for (const auto& p : subsample_convergence(x, opt)) EXPECT_EQ(p.mean_jsd, 0.0);
}

TEST(SubsampleConvergence, SmallSubsamplesDivergeMore) {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto x = oracle::bimodal_sample(seed, 800);
    ConvergenceOptions opt;
    opt.sizes = {100, 300, 600};
    opt.seed = seed;
    auto pts = subsample_convergence(x, opt);
    wins += pts[0].mean_jsd > pts[2].mean_jsd;
  }
  EXPECT_GE(wins, 9);
}

TEST(SubsampleConvergence, Deterministic) {
  auto x = oracle::bimodal_sample(4, 400);
  ConvergenceOptions opt;
  opt.sizes = {50, 200};
  opt.seed = 42;
  auto a = subsample_convergence(x, opt), b = subsample_convergence(x, opt);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].mean_jsd, b[i].mean_jsd);
}

TEST(SubsampleConvergence, Errors) {
  std::vector<double> x{1.0, 2.0, 3.0};
  ConvergenceOptions opt;
  opt.sizes = {4};
  EXPECT_ERROR_CODE(subsample_convergence(x, opt), ErrorCode::SizeExceedsData);
  std::vector<double> empty;
  EXPECT_ERROR_CODE(subsample_convergence(empty, opt), ErrorCode::EmptyScores);
}

TEST(RequiredSampleSize, TwoProportions) {
  const double z = 1.959963984540054 + 0.8416212335729143;
  const double expected = z * z * (0.25 + 0.24) / 0.01;
  EXPECT_NEAR(required_sample_size_exact(props(0.5, 0.6)), expected, 1e-9);
  EXPECT_EQ(required_sample_size(props(0.5, 0.6)), 385u);
}

TEST(RequiredSampleSize, StandardizedDifference) {
  PowerSpec s;
  s.effect = StandardizedEffect{0.5};
  const double z = 1.959963984540054 + 0.8416212335729143;
  EXPECT_NEAR(required_sample_size_exact(s), z * z * 2.0 / 0.25, 1e-9);
  EXPECT_EQ(required_sample_size(s), 63u);
}

TEST(RequiredSampleSize, ZeroEffect) {
  EXPECT_ERROR_CODE(required_sample_size(props(0.4, 0.4)), ErrorCode::ZeroEffect);
  PowerSpec s;
  s.effect = StandardizedEffect{0.0};
  EXPECT_ERROR_CODE(required_sample_size(s), ErrorCode::ZeroEffect);
}

TEST(RequiredSampleSize, InvalidSpec) {
  auto s = props(0.4, 0.5);
  s.alpha = 1.2;
  EXPECT_ERROR_CODE(required_sample_size(s), ErrorCode::OutOfRange);
  s = props(0.0, 0.5);
  EXPECT_ERROR_CODE(required_sample_size(s), ErrorCode::OutOfRange);
}

TEST(RequiredSampleSize, MoreSpreadNeedsMoreItems) {
  // Same 0.1 difference, spread term p(1-p) grows toward 0.5.
  EXPECT_LT(required_sample_size(props(0.05, 0.15)), required_sample_size(props(0.45, 0.55)));
}

TEST(RequiredSampleSize, MonotoneInEffectAndPower) {
  double prev = INFINITY;
  for (double p2 = 0.51; p2 < 0.99; p2 += 0.01) {
    const double n = required_sample_size_exact(props(0.5, p2));
    EXPECT_LT(n, prev);
    prev = n;
  }
  prev = 0.0;
  for (double power = 0.5; power < 0.99; power += 0.01) {
    const double n = required_sample_size_exact(props(0.3, 0.4, power));
    EXPECT_GT(n, prev);
    prev = n;
  }
}

TEST(RequiredSampleSize, OneTailedNeedsFewer) {
  auto two = props(0.3, 0.4), one = two;
  one.tails = 1;
  EXPECT_LT(required_sample_size(one), required_sample_size(two));
}

TEST(NormalQuantile, KnownValues) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-14);
  EXPECT_NEAR(normal_quantile(0.8), 0.8416212335729143, 1e-14);
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
}
