#include "concordia/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "concordia/error.hpp"

namespace concordia {

std::string_view to_string(Statistic s) noexcept {
  switch (s) {
    case Statistic::Percent: return "percent";
    case Statistic::CohenKappa: return "cohen_kappa";
    case Statistic::FleissKappa: return "fleiss_kappa";
    case Statistic::KrippendorffAlpha: return "krippendorff_alpha";
  }
  return "unknown";
}

std::string_view to_string(Level l) noexcept {
  switch (l) {
    case Level::Nominal: return "nominal";
    case Level::Ordinal: return "ordinal";
    case Level::Interval: return "interval";
    case Level::Ratio: return "ratio";
  }
  return "unknown";
}

Level parse_level(std::string_view name) {
  for (auto l : {Level::Nominal, Level::Ordinal, Level::Interval, Level::Ratio}) {
    if (to_string(l) == name) return l;
  }
  throw Error(ErrorCode::InvalidMeasurementLevel,
              "unknown measurement level '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// MeasurementLevel

namespace {

void check_numeric_mapping(const std::vector<std::pair<Label, double>>& values, bool ratio) {
  if (values.empty())
    throw Error(ErrorCode::InvalidMeasurementLevel, "numeric level needs a label -> value mapping");
  std::set<Label> labels;
  std::set<double> numbers;
  for (const auto& [label, v] : values) {
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvalidMeasurementLevel, "value for '" + label.str() + "' is not finite");
    if (ratio && v < 0.0)
      throw Error(ErrorCode::InvalidMeasurementLevel, "ratio values must be non-negative");
    if (!labels.insert(label).second)
      throw Error(ErrorCode::InvalidMeasurementLevel, "label '" + label.str() + "' mapped twice");
    if (!numbers.insert(v).second)
      throw Error(ErrorCode::InvalidMeasurementLevel, "numeric mapping is not injective");
  }
}

}  // namespace

MeasurementLevel MeasurementLevel::nominal() { return MeasurementLevel(Level::Nominal); }

MeasurementLevel MeasurementLevel::ordinal(std::vector<Label> order) {
  std::set<Label> seen(order.begin(), order.end());
  if (order.empty() || seen.size() != order.size())
    throw Error(ErrorCode::InvalidMeasurementLevel, "ordinal order must list distinct labels");
  MeasurementLevel m(Level::Ordinal);
  m.order_ = std::move(order);
  return m;
}

MeasurementLevel MeasurementLevel::interval(std::vector<std::pair<Label, double>> values) {
  check_numeric_mapping(values, false);
  MeasurementLevel m(Level::Interval);
  m.values_ = std::move(values);
  return m;
}

MeasurementLevel MeasurementLevel::ratio(std::vector<std::pair<Label, double>> values) {
  check_numeric_mapping(values, true);
  MeasurementLevel m(Level::Ratio);
  m.values_ = std::move(values);
  return m;
}

// ---------------------------------------------------------------------------
// Percent and chance agreement

double percent_agreement(const PairedLabels& paired) {
  if (paired.size() == 0) throw Error(ErrorCode::EmptyInput, "no label pairs");
  std::uint64_t same = 0;
  for (const auto& [a, b] : paired.pairs()) same += (a == b);
  return static_cast<double>(same) / static_cast<double>(paired.size());
}

double percent_agreement(const ConfusionTable2x2& c) {
  return static_cast<double>(c.tt() + c.ff()) / static_cast<double>(c.n());
}

double chance_agreement_uniform(int k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "chance agreement needs at least 2 labels");
  return 1.0 / static_cast<double>(k);
}

// ---------------------------------------------------------------------------
// Cohen's kappa

namespace {

// k x k contingency counts, row = rater A, column = rater B.
ReliabilityResult cohen_from_counts(const std::vector<std::uint64_t>& counts, std::size_t k) {
  std::uint64_t n = 0, diag = 0, chance = 0;
  std::vector<std::uint64_t> rows(k, 0), cols(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto c = counts[i * k + j];
      n += c;
      rows[i] += c;
      cols[j] += c;
      if (i == j) diag += c;
    }
  }
  if (n == 0) throw Error(ErrorCode::EmptyInput, "no items to compare");
  for (std::size_t i = 0; i < k; ++i) chance += rows[i] * cols[i];
  const double dn = static_cast<double>(n);
  if (chance == n * n)
    throw Error(ErrorCode::DegenerateMarginals,
                "both raters used one identical label for every item; kappa is undefined");

  ReliabilityResult r;
  r.statistic = Statistic::CohenKappa;
  r.observed = static_cast<double>(diag) / dn;
  r.expected = static_cast<double>(chance) / (dn * dn);
  r.value = (r.observed - r.expected) / (1.0 - r.expected);
  r.n_subjects = n;
  r.n_raters = 2;
  r.level = Level::Nominal;
  r.band = std::string(interpret_band(std::clamp(r.value, -1.0, 1.0)));
  return r;
}

}  // namespace

ReliabilityResult cohen_kappa(const ConfusionTable2x2& c) {
  return cohen_from_counts({c.tt(), c.tf(), c.ft(), c.ff()}, 2);
}

ReliabilityResult cohen_kappa(const PairedLabels& paired) {
  if (paired.size() == 0) throw Error(ErrorCode::EmptyInput, "no label pairs");
  const std::size_t k = paired.label_set().size();
  std::vector<std::uint64_t> counts(k * k, 0);
  for (const auto& [a, b] : paired.pairs()) ++counts[a * k + b];
  return cohen_from_counts(counts, k);
}

// ---------------------------------------------------------------------------
// Fleiss' kappa

ReliabilityResult fleiss_kappa(const AnnotationTable& table) {
  const std::size_t m = table.rater_count();
  const std::size_t n_units = table.unit_count();
  if (n_units == 0) throw Error(ErrorCode::EmptyInput, "table has no units");
  if (m < 2) throw Error(ErrorCode::IncompleteDesign, "Fleiss' kappa needs at least 2 raters");
  const std::size_t k = table.label_count();

  // Integer sums keep the chance term exact, so degeneracy is an exact test.
  std::uint64_t sum_sq = 0;
  std::vector<std::uint64_t> totals(k, 0);
  std::vector<std::uint64_t> unit_counts(k);
  for (std::size_t u = 0; u < n_units; ++u) {
    auto cells = table.cells(u);
    if (cells.size() != m)
      throw Error(ErrorCode::IncompleteDesign, "unit '" + table.units()[u] + "' has " +
                                                   std::to_string(cells.size()) + " of " +
                                                   std::to_string(m) + " ratings");
    std::fill(unit_counts.begin(), unit_counts.end(), 0);
    for (const auto& c : cells) ++unit_counts[c.label];
    for (std::size_t j = 0; j < k; ++j) {
      sum_sq += unit_counts[j] * unit_counts[j];
      totals[j] += unit_counts[j];
    }
  }
  const std::uint64_t nm = n_units * m;
  std::uint64_t totals_sq = 0;
  for (auto t : totals) totals_sq += t * t;
  if (totals_sq == nm * nm)
    throw Error(ErrorCode::DegenerateMarginals, "only one category used; kappa is undefined");

  ReliabilityResult r;
  r.statistic = Statistic::FleissKappa;
  r.observed = static_cast<double>(sum_sq - nm) / static_cast<double>(nm * (m - 1));
  r.expected = static_cast<double>(totals_sq) / (static_cast<double>(nm) * static_cast<double>(nm));
  r.value = (r.observed - r.expected) / (1.0 - r.expected);
  r.n_subjects = n_units;
  r.n_raters = m;
  r.level = Level::Nominal;
  r.band = std::string(interpret_band(std::clamp(r.value, -1.0, 1.0)));
  return r;
}

// ---------------------------------------------------------------------------
// Krippendorff's alpha

namespace {

// Units in compressed form: values[offsets[u] .. offsets[u+1]) are the category
// codes observed in unit u.
ReliabilityResult alpha_from_units(std::span<const std::int32_t> values,
                                   std::span<const std::size_t> offsets, std::size_t n_raters,
                                   std::size_t k, Level level,
                                   std::span<const double> category_values) {
  std::vector<double> o(k * k, 0.0);
  std::vector<std::size_t> unit_counts(k);
  std::size_t used = 0, excluded = 0;

  for (std::size_t u = 0; u + 1 < offsets.size(); ++u) {
    const std::size_t m = offsets[u + 1] - offsets[u];
    if (m < 2) {
      ++excluded;
      continue;
    }
    ++used;
    std::fill(unit_counts.begin(), unit_counts.end(), 0);
    for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) ++unit_counts[values[i]];
    const double w = 1.0 / static_cast<double>(m - 1);
    for (std::size_t c = 0; c < k; ++c) {
      if (unit_counts[c] == 0) continue;
      for (std::size_t d = 0; d < k; ++d) {
        const std::size_t pairs = unit_counts[c] * (unit_counts[d] - (c == d ? 1 : 0));
        if (pairs != 0) o[c * k + d] += static_cast<double>(pairs) * w;
      }
    }
  }
  if (used == 0) throw Error(ErrorCode::NoPairableValues, "no unit has two or more ratings");

  std::vector<double> marg(k, 0.0);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t d = 0; d < k; ++d) marg[c] += o[c * k + d];
  const double n = std::accumulate(marg.begin(), marg.end(), 0.0);

  auto delta = [&](std::size_t c, std::size_t d) -> double {
    if (c == d) return 0.0;
    switch (level) {
      case Level::Nominal:
        return 1.0;
      case Level::Ordinal: {
        const std::size_t lo = std::min(c, d), hi = std::max(c, d);
        double s = 0.0;
        for (std::size_t g = lo; g <= hi; ++g) s += marg[g];
        s -= 0.5 * (marg[lo] + marg[hi]);
        return s * s;
      }
      case Level::Interval: {
        const double diff = category_values[c] - category_values[d];
        return diff * diff;
      }
      case Level::Ratio: {
        const double sum = category_values[c] + category_values[d];
        if (sum == 0.0) return 0.0;
        const double q = (category_values[c] - category_values[d]) / sum;
        return q * q;
      }
    }
    return 1.0;
  };

  double observed = 0.0, expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      if (c == d) continue;
      const double dl = delta(c, d);
      observed += o[c * k + d] * dl;
      expected += marg[c] * marg[d] * dl;
    }
  }
  if (expected == 0.0)
    throw Error(ErrorCode::DegenerateValues, "expected disagreement is zero (one value observed)");

  ReliabilityResult r;
  r.statistic = Statistic::KrippendorffAlpha;
  r.observed = observed / n;
  r.expected = expected / (n * (n - 1.0));
  r.value = 1.0 - (n - 1.0) * observed / expected;
  r.n_subjects = used;
  r.n_raters = n_raters;
  r.level = level;
  r.excluded_units = excluded;
  r.band = std::string(interpret_band(std::clamp(r.value, -1.0, 1.0)));
  return r;
}

}  // namespace

ReliabilityResult krippendorff_alpha(std::span<const std::int32_t> codes, std::size_t n_raters,
                                     std::size_t n_categories, Level level,
                                     std::span<const double> category_values) {
  if (n_raters == 0 || codes.size() % n_raters != 0)
    throw Error(ErrorCode::InvalidArgument, "code matrix is not units x raters");
  if ((level == Level::Interval || level == Level::Ratio) && category_values.size() != n_categories)
    throw Error(ErrorCode::InvalidMeasurementLevel, "numeric levels need one value per category");
  const std::size_t n_units = codes.size() / n_raters;
  std::vector<std::int32_t> values;
  values.reserve(codes.size());
  std::vector<std::size_t> offsets;
  offsets.reserve(n_units + 1);
  offsets.push_back(0);
  for (std::size_t u = 0; u < n_units; ++u) {
    for (std::size_t r = 0; r < n_raters; ++r) {
      const auto c = codes[u * n_raters + r];
      if (c < 0) continue;
      if (static_cast<std::size_t>(c) >= n_categories)
        throw Error(ErrorCode::OutOfRange, "category code outside [0, n_categories)");
      values.push_back(c);
    }
    offsets.push_back(values.size());
  }
  return alpha_from_units(values, offsets, n_raters, n_categories, level, category_values);
}

ReliabilityResult krippendorff_alpha(const AnnotationTable& table, const MeasurementLevel& level) {
  const auto labels = table.label_set();
  const std::size_t k = labels.size();

  // Map each label index onto a category code (and value, for numeric levels).
  std::vector<std::int32_t> code(k);
  std::vector<double> category_values;
  std::size_t n_categories = k;
  switch (level.level()) {
    case Level::Nominal:
      std::iota(code.begin(), code.end(), 0);
      break;
    case Level::Ordinal: {
      auto order = level.order();
      for (std::size_t i = 0; i < k; ++i) {
        auto it = std::find(order.begin(), order.end(), labels[i]);
        if (it == order.end())
          throw Error(ErrorCode::InvalidMeasurementLevel,
                      "label '" + labels[i].str() + "' is missing from the ordinal order");
        code[i] = static_cast<std::int32_t>(it - order.begin());
      }
      n_categories = order.size();
      break;
    }
    case Level::Interval:
    case Level::Ratio: {
      auto values = level.values();
      category_values.resize(k);
      for (std::size_t i = 0; i < k; ++i) {
        auto it = std::find_if(values.begin(), values.end(),
                               [&](const auto& lv) { return lv.first == labels[i]; });
        if (it == values.end())
          throw Error(ErrorCode::InvalidMeasurementLevel,
                      "label '" + labels[i].str() + "' has no numeric value");
        code[i] = static_cast<std::int32_t>(i);
        category_values[i] = it->second;
      }
      break;
    }
  }

  std::vector<std::int32_t> values;
  values.reserve(table.cell_count());
  std::vector<std::size_t> offsets{0};
  offsets.reserve(table.unit_count() + 1);
  for (std::size_t u = 0; u < table.unit_count(); ++u) {
    for (const auto& c : table.cells(u)) values.push_back(code[c.label]);
    offsets.push_back(values.size());
  }
  return alpha_from_units(values, offsets, table.rater_count(), n_categories, level.level(),
                          category_values);
}

// ---------------------------------------------------------------------------

std::string_view interpret_band(double value) {
  if (!(value >= -1.0 && value <= 1.0))
    throw Error(ErrorCode::OutOfRange, "coefficient outside [-1, 1]");
  if (value < 0.0) return "poor";
  if (value <= 0.20) return "slight";
  if (value <= 0.40) return "fair";
  if (value <= 0.60) return "moderate";
  if (value <= 0.80) return "substantial";
  return "almost perfect";
}

}  // namespace concordia
