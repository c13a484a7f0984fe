#include "concordia/significance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include "concordia/error.hpp"
#include "concordia/random.hpp"

namespace concordia {

McNemarResult mcnemar(const ConfusionTable2x2& confusion, bool continuity) {
  const std::uint64_t b = confusion.tf(), c = confusion.ft();
  if (b + c == 0) throw Error(ErrorCode::NoDiscordantPairs, "McNemar's test needs discordant pairs");
  double diff = std::abs(static_cast<double>(b) - static_cast<double>(c));
  if (continuity) diff = std::max(diff - 1.0, 0.0);

  McNemarResult r;
  r.chi_square = diff * diff / static_cast<double>(b + c);
  r.df = 1;
  r.p_value = chi_square_sf(r.chi_square, 1);
  r.n = confusion.n();
  r.continuity_corrected = continuity;
  r.b = b;
  r.c = c;
  return r;
}

double chi_square_sf(double x, int df) {
  if (df != 1) throw Error(ErrorCode::InvalidArgument, "only df = 1 is supported");
  if (!(x >= 0.0)) throw Error(ErrorCode::OutOfRange, "chi-square statistic must be >= 0");
  return std::erfc(std::sqrt(x / 2.0));
}

// ---------------------------------------------------------------------------

namespace {

Ratio ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

// Cell counts in confusion order: tt, tf, ft, ff.
using Counts = std::array<std::uint64_t, 4>;

ClassificationMetrics metrics_from_counts(const Counts& k, TruthAxis truth) {
  ClassificationMetrics m;
  m.tp = k[0];
  m.tn = k[3];
  if (truth == TruthAxis::RaterA) {
    m.fn = k[1];
    m.fp = k[2];
  } else {
    m.fp = k[1];
    m.fn = k[2];
  }
  m.accuracy = ratio(m.tp + m.tn, m.tp + m.tn + m.fp + m.fn);
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  if (m.precision && m.recall) m.f1 = ratio(2 * m.tp, 2 * m.tp + m.fp + m.fn);
  return m;
}

BootstrapCI bootstrap_codes(Metric metric, const std::vector<std::uint8_t>& codes, TruthAxis truth,
                            const BootstrapOptions& opt) {
  if (codes.empty()) throw Error(ErrorCode::EmptyInput, "no items to resample");
  if (opt.replicates == 0) throw Error(ErrorCode::InvalidArgument, "replicates must be >= 1");
  if (!(opt.level > 0.0 && opt.level < 1.0))
    throw Error(ErrorCode::InvalidLevel, "confidence level must lie in (0, 1)");

  Counts full{};
  for (auto c : codes) ++full[c];
  auto point = metric_value(metrics_from_counts(full, truth), metric);
  if (!point)
    throw Error(ErrorCode::NotDefined,
                std::string(to_string(metric)) + " is not defined on the full sample");

  const std::size_t n = codes.size();
  std::vector<Ratio> stats(opt.replicates);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t rep = begin; rep < end; ++rep) {
      Rng rng(opt.seed, rep);
      Counts k{};
      for (std::size_t i = 0; i < n; ++i) ++k[codes[rng.below(n)]];
      stats[rep] = metric_value(metrics_from_counts(k, truth), metric);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, opt.replicates));
  if (threads == 1) {
    run(0, opt.replicates);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (opt.replicates + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk, end = std::min(opt.replicates, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }

  std::vector<double> defined;
  defined.reserve(stats.size());
  for (const auto& s : stats)
    if (s) defined.push_back(*s);
  if (defined.empty())
    throw Error(ErrorCode::NotDefined, "metric undefined in every bootstrap replicate");
  std::sort(defined.begin(), defined.end());

  BootstrapCI ci;
  ci.metric_name = std::string(to_string(metric));
  ci.lower = quantile_type7(defined, (1.0 - opt.level) / 2.0);
  ci.upper = quantile_type7(defined, (1.0 + opt.level) / 2.0);
  ci.estimate = *point;
  ci.point = std::clamp(*point, ci.lower, ci.upper);
  ci.level = opt.level;
  ci.replicates = opt.replicates;
  ci.seed = opt.seed;
  ci.undefined_replicates = stats.size() - defined.size();
  return ci;
}

}  // namespace

ClassificationMetrics classification_metrics(const ConfusionTable2x2& c, TruthAxis truth) {
  return metrics_from_counts({c.tt(), c.tf(), c.ft(), c.ff()}, truth);
}

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::Accuracy: return "accuracy";
    case Metric::Precision: return "precision";
    case Metric::Recall: return "recall";
    case Metric::F1: return "f1";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (auto m : {Metric::Accuracy, Metric::Precision, Metric::Recall, Metric::F1}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

Ratio metric_value(const ClassificationMetrics& m, Metric which) {
  switch (which) {
    case Metric::Accuracy: return m.accuracy;
    case Metric::Precision: return m.precision;
    case Metric::Recall: return m.recall;
    case Metric::F1: return m.f1;
  }
  return std::nullopt;
}

BootstrapCI bootstrap_ci(Metric metric, const PairedLabels& paired, const Label& positive,
                         TruthAxis truth, const BootstrapOptions& options) {
  if (paired.size() == 0) throw Error(ErrorCode::EmptyInput, "no label pairs");
  // Validates the binary label set and the positive label.
  to_confusion(paired, positive);
  const auto pos = *paired.label_index(positive);
  std::vector<std::uint8_t> codes;
  codes.reserve(paired.size());
  for (const auto& [a, b] : paired.pairs()) {
    codes.push_back(static_cast<std::uint8_t>((a == pos ? 0 : 2) + (b == pos ? 0 : 1)));
  }
  return bootstrap_codes(metric, codes, truth, options);
}

BootstrapCI bootstrap_ci(Metric metric, const ConfusionTable2x2& confusion, TruthAxis truth,
                         const BootstrapOptions& options) {
  std::vector<std::uint8_t> codes;
  codes.reserve(confusion.n());
  const std::uint64_t counts[4] = {confusion.tt(), confusion.tf(), confusion.ft(), confusion.ff()};
  for (std::uint8_t cell = 0; cell < 4; ++cell) codes.insert(codes.end(), counts[cell], cell);
  return bootstrap_codes(metric, codes, truth, options);
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyInput, "quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::OutOfRange, "quantile probability outside [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace concordia
