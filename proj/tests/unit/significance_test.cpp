#include <cmath>

#include <gtest/gtest.h>

#include "concordia/random.hpp"
#include "concordia/significance.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace concordia;

TEST(McNemar, CaseStudyContinuityCorrected) {
  auto r = mcnemar(ConfusionTable2x2(64, 23, 988, 6720));
  EXPECT_NEAR(r.chi_square, (965.0 - 1.0) * (965.0 - 1.0) / 1011.0, 1e-9);
  EXPECT_NEAR(r.chi_square, 919.18, 0.01);
  EXPECT_EQ(r.df, 1);
  EXPECT_LT(r.p_value, 1e-100);
  EXPECT_EQ(r.n, 7795u);
  EXPECT_TRUE(r.continuity_corrected);
}

TEST(McNemar, UncorrectedCaseStudy) {
  auto r = mcnemar(ConfusionTable2x2(64, 23, 988, 6720), false);
  EXPECT_NEAR(r.chi_square, 965.0 * 965.0 / 1011.0, 1e-9);
  EXPECT_NEAR(r.chi_square, 921.1, 0.05);
}

TEST(McNemar, EqualDiscordanceIsZero) {
  auto r = mcnemar(ConfusionTable2x2(3, 7, 7, 2), false);
  EXPECT_EQ(r.chi_square, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(McNemar, TenVersusFive) {
  // 25 / 15; the reference chi-square upper tail at 5/3 with 1 df is 0.19670560245894.
  auto r = mcnemar(ConfusionTable2x2(0, 10, 5, 0), false);
  EXPECT_NEAR(r.chi_square, 25.0 / 15.0, 1e-15);
  EXPECT_NEAR(r.p_value, 0.19670560245894, 1e-12);
}

TEST(McNemar, CorrectionClampsAtZero) {
  EXPECT_EQ(mcnemar(ConfusionTable2x2(1, 3, 2, 1)).chi_square, 0.0);
}

TEST(McNemar, NoDiscordantPairs) {
  EXPECT_ERROR_CODE(mcnemar(ConfusionTable2x2(4, 0, 0, 9)), ErrorCode::NoDiscordantPairs);
}

TEST(McNemar, SymmetricAndCorrectionNeverIncreases) {
  for (std::uint64_t b = 0; b < 40; ++b)
    for (std::uint64_t c = 0; c < 40; ++c) {
      if (b + c == 0) continue;
      auto x = mcnemar(ConfusionTable2x2(1, b, c, 1));
      auto y = mcnemar(ConfusionTable2x2(1, c, b, 1));
      EXPECT_EQ(x.chi_square, y.chi_square);
      EXPECT_EQ(x.p_value, y.p_value);
      if (b != c) EXPECT_LE(x.chi_square, mcnemar(ConfusionTable2x2(1, b, c, 1), false).chi_square);
    }
}

TEST(ChiSquareSf, KnownPoints) {
  EXPECT_EQ(chi_square_sf(0.0), 1.0);
  EXPECT_NEAR(chi_square_sf(3.8415), 0.05, 1e-4);
  // Reference values of the chi-square(1) upper tail.
  EXPECT_NEAR(chi_square_sf(1.0), 0.31731050786291415, 1e-14);
  EXPECT_NEAR(chi_square_sf(10.0), 0.0015654022580025018, 1e-16);
  EXPECT_LT(chi_square_sf(919.18), 1e-100);
  EXPECT_ERROR_CODE(chi_square_sf(-1.0), ErrorCode::OutOfRange);
}

TEST(ChiSquareSf, MonotoneNonIncreasing) {
  double prev = 1.0;
  for (double x = 0.0; x < 60.0; x += 0.01) {
    const double p = chi_square_sf(x);
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(ClassificationMetrics, HandComputed) {
  // truth = rater A: tp = tt, fn = tf, fp = ft, tn = ff.
  auto m = classification_metrics(ConfusionTable2x2(5, 3, 2, 10));
  EXPECT_EQ(m.tp, 5u);
  EXPECT_EQ(m.fp, 2u);
  EXPECT_EQ(m.fn, 3u);
  EXPECT_EQ(m.tn, 10u);
  EXPECT_NEAR(*m.precision, 5.0 / 7.0, 1e-15);
  EXPECT_NEAR(*m.recall, 0.625, 1e-15);
  EXPECT_NEAR(*m.f1, 2.0 * (5.0 / 7.0) * 0.625 / (5.0 / 7.0 + 0.625), 1e-15);
  EXPECT_NEAR(*m.accuracy, 15.0 / 20.0, 1e-15);
}

TEST(ClassificationMetrics, TruthAxisSwapsErrors) {
  auto m = classification_metrics(ConfusionTable2x2(5, 3, 2, 10), TruthAxis::RaterB);
  EXPECT_EQ(m.fp, 3u);
  EXPECT_EQ(m.fn, 2u);
}

TEST(ClassificationMetrics, PerfectClassifier) {
  auto m = classification_metrics(ConfusionTable2x2(4, 0, 0, 6));
  EXPECT_EQ(*m.accuracy, 1.0);
  EXPECT_EQ(*m.precision, 1.0);
  EXPECT_EQ(*m.recall, 1.0);
  EXPECT_EQ(*m.f1, 1.0);
}

TEST(ClassificationMetrics, EmptyDenominatorIsNotDefined) {
  // No positive predictions: tp = fp = 0.
  auto m = classification_metrics(ConfusionTable2x2(0, 4, 0, 6));
  EXPECT_FALSE(m.precision.has_value());
  EXPECT_FALSE(m.f1.has_value());
  EXPECT_EQ(*m.recall, 0.0);
}

TEST(QuantileType7, Interpolates) {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  EXPECT_EQ(quantile_type7(x, 0.0), 1.0);
  EXPECT_EQ(quantile_type7(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_type7(x, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_type7(x, 0.25), 1.75);
}

TEST(Bootstrap, DegenerateAllCorrect) {
  auto ci = bootstrap_ci(Metric::Accuracy, ConfusionTable2x2(7, 0, 0, 5), TruthAxis::RaterA, {500, 0.95, 1, 1});
  EXPECT_EQ(ci.lower, 1.0);
  EXPECT_EQ(ci.upper, 1.0);
  EXPECT_EQ(ci.point, 1.0);
}

TEST(Bootstrap, SameSeedBitIdentical) {
  ConfusionTable2x2 c(40, 12, 9, 39);
  BootstrapOptions opt{1000, 0.9, 1234, 1};
  auto a = bootstrap_ci(Metric::F1, c, TruthAxis::RaterA, opt);
  auto b = bootstrap_ci(Metric::F1, c, TruthAxis::RaterA, opt);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
  EXPECT_EQ(a.point, b.point);
  opt.seed = 1235;
  auto d = bootstrap_ci(Metric::F1, c, TruthAxis::RaterA, opt);
  EXPECT_TRUE(d.lower != a.lower || d.upper != a.upper);
}

TEST(Bootstrap, ThreadCountDoesNotChangeResult) {
  ConfusionTable2x2 c(40, 12, 9, 39);
  auto serial = bootstrap_ci(Metric::Precision, c, TruthAxis::RaterB, {999, 0.95, 77, 1});
  auto parallel = bootstrap_ci(Metric::Precision, c, TruthAxis::RaterB, {999, 0.95, 77, 4});
  EXPECT_EQ(serial.lower, parallel.lower);
  EXPECT_EQ(serial.upper, parallel.upper);
  EXPECT_EQ(serial.undefined_replicates, parallel.undefined_replicates);
}

TEST(Bootstrap, PairedLabelsMatchConfusionRoute) {
  std::vector<std::pair<Label, Label>> pairs;
  auto add = [&](const char* a, const char* b, int n) {
    for (int i = 0; i < n; ++i) pairs.emplace_back(Label(a), Label(b));
  };
  add("y", "y", 20);
  add("y", "n", 5);
  add("n", "y", 7);
  add("n", "n", 30);
  BootstrapOptions opt{800, 0.95, 5, 1};
  auto from_pairs = bootstrap_ci(Metric::Recall, PairedLabels(pairs), Label("y"), TruthAxis::RaterA, opt);
  auto from_counts = bootstrap_ci(Metric::Recall, ConfusionTable2x2(20, 5, 7, 30), TruthAxis::RaterA, opt);
  EXPECT_EQ(from_pairs.lower, from_counts.lower);
  EXPECT_EQ(from_pairs.upper, from_counts.upper);
}

TEST(Bootstrap, PointLiesInsideInterval) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto c = oracle::synthetic_confusion(rng, 15 + rng.below(40), 0.7);
    for (auto metric : {Metric::Accuracy, Metric::Precision, Metric::Recall, Metric::F1}) {
      try {
        auto ci = bootstrap_ci(metric, c, TruthAxis::RaterA, {200, 0.95, 9, 1});
        EXPECT_LE(ci.lower, ci.point);
        EXPECT_LE(ci.point, ci.upper);
        EXPECT_EQ(ci.point, std::clamp(ci.estimate, ci.lower, ci.upper));
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotDefined);
      }
    }
  }
}

TEST(Bootstrap, UndefinedReplicatesAreCounted) {
  // One positive prediction among 30 items: many resamples have no positive predictions.
  auto ci = bootstrap_ci(Metric::Precision, ConfusionTable2x2(0, 3, 1, 26), TruthAxis::RaterA, {500, 0.95, 2, 1});
  EXPECT_GT(ci.undefined_replicates, 0u);
  EXPECT_LT(ci.undefined_replicates, 500u);
}

TEST(Bootstrap, InvalidArguments) {
  ConfusionTable2x2 c(3, 1, 1, 3);
  EXPECT_ERROR_CODE(bootstrap_ci(Metric::Accuracy, c, TruthAxis::RaterA, {100, 1.0, 0, 1}), ErrorCode::InvalidLevel);
  EXPECT_ERROR_CODE(bootstrap_ci(Metric::Precision, ConfusionTable2x2(0, 3, 0, 4), TruthAxis::RaterA),
                    ErrorCode::NotDefined);
  std::vector<std::pair<Label, Label>> none;
  EXPECT_ERROR_CODE(PairedLabels p(none); bootstrap_ci(Metric::Accuracy, p, Label("a"), TruthAxis::RaterA),
                    ErrorCode::EmptyInput);
}

TEST(Bootstrap, WidthShrinksWithMoreItems) {
  double small = 0.0, large = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed, 99);
    auto a = bootstrap_ci(Metric::Accuracy, oracle::synthetic_confusion(rng, 100, 0.8), TruthAxis::RaterA,
                          {400, 0.95, seed, 1});
    auto b = bootstrap_ci(Metric::Accuracy, oracle::synthetic_confusion(rng, 400, 0.8), TruthAxis::RaterA,
                          {400, 0.95, seed, 1});
    small += a.upper - a.lower;
    large += b.upper - b.lower;
  }
  EXPECT_LT(large, small);
}

TEST(Bootstrap, CoverageOnReducedMonteCarlo) {
  int covered = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + t, 1);
    auto c = oracle::synthetic_confusion(rng, 300, 0.8);
    auto ci = bootstrap_ci(Metric::Accuracy, c, TruthAxis::RaterA, {500, 0.95, static_cast<std::uint64_t>(t), 1});
    covered += ci.lower <= 0.8 && 0.8 <= ci.upper;
  }
  // Binomial(200, 0.95) lies within [180, 199] with overwhelming probability.
  EXPECT_GE(covered, 180);
}

TEST(Metric, ParseAndName) {
  EXPECT_EQ(parse_metric("f1"), Metric::F1);
  EXPECT_EQ(to_string(Metric::Recall), "recall");
  EXPECT_ERROR_CODE(parse_metric("auc"), ErrorCode::InvalidArgument);
}
