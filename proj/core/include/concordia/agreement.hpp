#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "concordia/annotation.hpp"

namespace concordia {

enum class Statistic { Percent, CohenKappa, FleissKappa, KrippendorffAlpha };
enum class Level { Nominal, Ordinal, Interval, Ratio };

std::string_view to_string(Statistic s) noexcept;
std::string_view to_string(Level l) noexcept;
Level parse_level(std::string_view name);

/// Measurement level used to pick Krippendorff's difference function.
///
/// Ordinal levels carry a total order over labels; interval and ratio levels
/// carry an injective label -> number mapping. Labels stay opaque tokens in the
/// table, so the same data can be analyzed at several levels.
class MeasurementLevel {
 public:
  static MeasurementLevel nominal();
  static MeasurementLevel ordinal(std::vector<Label> order);
  static MeasurementLevel interval(std::vector<std::pair<Label, double>> values);
  static MeasurementLevel ratio(std::vector<std::pair<Label, double>> values);

  Level level() const noexcept { return level_; }
  std::span<const Label> order() const noexcept { return order_; }
  std::span<const std::pair<Label, double>> values() const noexcept { return values_; }

 private:
  MeasurementLevel(Level level) : level_(level) {}

  Level level_;
  std::vector<Label> order_;
  std::vector<std::pair<Label, double>> values_;
};

struct ReliabilityResult {
  Statistic statistic = Statistic::CohenKappa;
  double value = 0.0;
  std::size_t n_subjects = 0;
  std::size_t n_raters = 0;
  Level level = Level::Nominal;
  std::string band;
  /// Units dropped before computation (Krippendorff: fewer than 2 ratings).
  std::size_t excluded_units = 0;
  /// Observed agreement (kappas) or observed disagreement (alpha).
  double observed = 0.0;
  /// Chance agreement (kappas) or expected disagreement (alpha).
  double expected = 0.0;
};

/// Fraction of pairs with identical labels. Throws EmptyInput on no pairs.
double percent_agreement(const PairedLabels& paired);
double percent_agreement(const ConfusionTable2x2& confusion);

/// Probability that two uniform random raters agree on a k-choice item: 1/k.
double chance_agreement_uniform(int k);

/// Cohen's kappa for two raters. Chance agreement is the product of the two
/// raters' marginals; computed from integer counts so the paired-label and
/// confusion-count routes agree bit for bit on binary data.
ReliabilityResult cohen_kappa(const ConfusionTable2x2& confusion);
ReliabilityResult cohen_kappa(const PairedLabels& paired);

/// Fleiss' kappa. Every unit must be rated by every rater of the table
/// (at least 2 raters), otherwise IncompleteDesign.
ReliabilityResult fleiss_kappa(const AnnotationTable& table);

/// Krippendorff's alpha from the coincidence matrix of pairable values.
/// Units with fewer than two ratings are dropped and counted in
/// `excluded_units`.
ReliabilityResult krippendorff_alpha(const AnnotationTable& table,
                                     const MeasurementLevel& level = MeasurementLevel::nominal());

/// Dense, pre-coded variant: `codes` is a units x raters row-major matrix of
/// category indices in [0, n_categories), with -1 marking a missing rating.
/// For ordinal data the index order is the category order; interval and ratio
/// data read `category_values[c]`.
ReliabilityResult krippendorff_alpha(std::span<const std::int32_t> codes, std::size_t n_raters,
                                     std::size_t n_categories, Level level = Level::Nominal,
                                     std::span<const double> category_values = {});

/// Descriptor for a coefficient in [-1, 1]: poor (< 0), slight (<= .20),
/// fair (<= .40), moderate (<= .60), substantial (<= .80), almost perfect.
std::string_view interpret_band(double value);

}  // namespace concordia
