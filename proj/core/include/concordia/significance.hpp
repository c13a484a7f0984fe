#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "concordia/annotation.hpp"

namespace concordia {

struct McNemarResult {
  double chi_square = 0.0;
  int df = 1;
  double p_value = 1.0;
  std::uint64_t n = 0;
  bool continuity_corrected = true;
  std::uint64_t b = 0;  // tf: A positive, B negative
  std::uint64_t c = 0;  // ft: A negative, B positive
};

/// McNemar's test on the discordant cells b = tf and c = ft. With continuity
/// correction the statistic is max(|b - c| - 1, 0)^2 / (b + c). Throws
/// NoDiscordantPairs when b + c = 0.
McNemarResult mcnemar(const ConfusionTable2x2& confusion, bool continuity = true);

/// Upper tail P(X >= x) of the chi-square distribution. Only df = 1 is
/// supported, where the tail is erfc(sqrt(x / 2)).
double chi_square_sf(double x, int df = 1);

/// Which rater of a confusion table holds the reference labels.
enum class TruthAxis { RaterA, RaterB };

/// A ratio that is NotDefined (nullopt) when its denominator is empty.
using Ratio = std::optional<double>;

struct ClassificationMetrics {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  Ratio accuracy, precision, recall, f1;
};

ClassificationMetrics classification_metrics(const ConfusionTable2x2& confusion,
                                             TruthAxis truth = TruthAxis::RaterA);

enum class Metric { Accuracy, Precision, Recall, F1 };

std::string_view to_string(Metric m) noexcept;
Metric parse_metric(std::string_view name);
Ratio metric_value(const ClassificationMetrics& m, Metric which);

struct BootstrapOptions {
  std::size_t replicates = 2000;
  double level = 0.95;
  std::uint64_t seed = 0;
  /// Worker threads; output is identical for every thread count.
  unsigned threads = 1;
};

struct BootstrapCI {
  std::string metric_name;
  double point = 0.0;     // estimate clamped into [lower, upper]
  double estimate = 0.0;  // full-sample estimate, unclamped
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  /// Replicates whose resample left the metric NotDefined; they are dropped
  /// before the quantiles are taken.
  std::size_t undefined_replicates = 0;
};

/// Percentile bootstrap over items, resampled with replacement. Replicate i
/// draws from substream i of `seed`; quantiles use type-7 interpolation.
/// `point` is the full-sample estimate clamped into [lower, upper]; the raw
/// estimate is kept in `estimate`.
BootstrapCI bootstrap_ci(Metric metric, const PairedLabels& paired, const Label& positive,
                         TruthAxis truth, const BootstrapOptions& options = {});
BootstrapCI bootstrap_ci(Metric metric, const ConfusionTable2x2& confusion, TruthAxis truth,
                         const BootstrapOptions& options = {});

/// Type-7 (linear interpolation) sample quantile of sorted data.
double quantile_type7(std::span<const double> sorted, double p);

}  // namespace concordia
