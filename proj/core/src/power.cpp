#include "concordia/power.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "concordia/error.hpp"
#include "concordia/random.hpp"
#include "concordia/significance.hpp"
#include "concordia/soft_metrics.hpp"

namespace concordia {

namespace {

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  return v;
}

// Map each label index of the table onto its scale value.
std::vector<std::optional<double>> scale_by_label(const AnnotationTable& table, const Scale& scale) {
  std::vector<std::optional<double>> out(table.label_count());
  for (const auto& [label, value] : scale) {
    if (!std::isfinite(value))
      throw Error(ErrorCode::InvalidArgument, "scale value for '" + label.str() + "' is not finite");
    if (auto i = table.label_index(label)) out[*i] = value;
  }
  return out;
}

double mapped(const std::vector<std::optional<double>>& by_label, const AnnotationTable& table,
              std::size_t label) {
  if (!by_label[label])
    throw Error(ErrorCode::UnmappedLabel,
                "label '" + table.label_set()[label].str() + "' has no scale value");
  return *by_label[label];
}

double sample_sd(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

constexpr double kCutoff = 8.0;  // kernel support in bandwidths

// Kernel sums at each grid point for sorted data. Tied values are collapsed
// into one term weighted by their share of the sample.
std::vector<double> kernel_sums(std::span<const double> sorted, double h,
                                std::span<const double> grid) {
  std::vector<double> values, weights;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    values.push_back(sorted[i]);
    weights.push_back(static_cast<double>(j - i) / n);
    i = j;
  }
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    const auto lo = std::lower_bound(values.begin(), values.end(), x - kCutoff * h) - values.begin();
    const auto hi = std::upper_bound(values.begin() + lo, values.end(), x + kCutoff * h) - values.begin();
    double s = 0.0;
    for (auto v = lo; v < hi; ++v) {
      const double z = (x - values[v]) / h;
      s += weights[v] * std::exp(-0.5 * z * z);
    }
    out[g] = s;
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, std::size_t points) {
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + static_cast<double>(i) * step;
  grid.back() = hi;
  return grid;
}

double resolve_bandwidth(std::span<const double> sorted, std::optional<double> bandwidth) {
  if (bandwidth) {
    if (!(*bandwidth > 0.0) || !std::isfinite(*bandwidth))
      throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive and finite");
    return *bandwidth;
  }
  return silverman_bandwidth(sorted);
}

std::vector<double> to_probabilities(std::vector<double> sums) {
  const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
  if (!(total > 0.0))
    throw Error(ErrorCode::DegenerateSample, "density vanishes on the evaluation grid");
  for (auto& v : sums) v /= total;
  return sums;
}

}  // namespace

Scale parse_scale(std::string_view spec) {
  Scale scale;
  while (!spec.empty()) {
    auto comma = spec.find(',');
    auto item = spec.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ParseError, "scale entry '" + std::string(item) + "' lacks '='");
    scale.emplace_back(Label(item.substr(0, eq)), parse_double(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    spec.remove_prefix(comma + 1);
  }
  if (scale.empty()) throw Error(ErrorCode::ParseError, "empty scale");
  return scale;
}

ItemScores mean_item_scores(const AnnotationTable& table, const Scale& scale) {
  const auto by_label = scale_by_label(table, scale);
  ItemScores out;
  out.scale = scale;
  out.units.assign(table.units().begin(), table.units().end());
  out.scores.reserve(table.unit_count());
  out.obs_counts.reserve(table.unit_count());
  for (std::size_t u = 0; u < table.unit_count(); ++u) {
    auto cells = table.cells(u);
    if (cells.empty())
      throw Error(ErrorCode::EmptyUnit, "unit '" + table.units()[u] + "' has no responses");
    // Sum in label order so the mean does not depend on observation order.
    std::vector<std::size_t> counts(table.label_count(), 0);
    for (const auto& c : cells) ++counts[c.label];
    double sum = 0.0;
    for (std::size_t l = 0; l < counts.size(); ++l) {
      if (counts[l] != 0) sum += static_cast<double>(counts[l]) * mapped(by_label, table, l);
    }
    out.scores.push_back(sum / static_cast<double>(cells.size()));
    out.obs_counts.push_back(cells.size());
  }
  return out;
}

std::vector<double> observation_scores(const AnnotationTable& table, const Scale& scale) {
  const auto by_label = scale_by_label(table, scale);
  std::vector<double> out;
  out.reserve(table.cell_count());
  for (std::size_t u = 0; u < table.unit_count(); ++u) {
    for (const auto& c : table.cells(u)) out.push_back(mapped(by_label, table, c.label));
  }
  return out;
}

double silverman_bandwidth(std::span<const double> scores) {
  if (scores.size() < 2)
    throw Error(ErrorCode::DegenerateSample, "automatic bandwidth needs at least 2 scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double sd = sample_sd(sorted);
  const double iqr = (quantile_type7(sorted, 0.75) - quantile_type7(sorted, 0.25)) / 1.34;
  double spread = std::min(sd, iqr);
  if (!(spread > 0.0)) spread = std::max(sd, iqr);
  if (!(spread > 0.0))
    throw Error(ErrorCode::DegenerateSample, "scores have no spread; give an explicit bandwidth");
  return 0.9 * spread * std::pow(static_cast<double>(sorted.size()), -0.2);
}

DensityCurve density_estimate(std::span<const double> scores, std::optional<double> bandwidth,
                              std::size_t grid_points) {
  if (scores.empty()) throw Error(ErrorCode::EmptyScores, "no scores to estimate a density from");
  if (grid_points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points");
  if (std::any_of(scores.begin(), scores.end(), [](double v) { return !std::isfinite(v); }))
    throw Error(ErrorCode::InvalidArgument, "scores must be finite");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = resolve_bandwidth(sorted, bandwidth);

  DensityCurve curve;
  curve.bandwidth = h;
  curve.n = sorted.size();
  curve.grid = make_grid(sorted.front() - 3.0 * h, sorted.back() + 3.0 * h, grid_points);
  curve.density = kernel_sums(sorted, h, curve.grid);

  double integral = 0.0;
  for (std::size_t i = 1; i < grid_points; ++i) {
    integral += 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.grid[i] - curve.grid[i - 1]);
  }
  if (!(integral > 0.0))
    throw Error(ErrorCode::DegenerateSample, "density vanishes on the evaluation grid");
  for (auto& d : curve.density) d /= integral;
  return curve;
}

std::vector<ConvergencePoint> subsample_convergence(std::span<const double> scores,
                                                    const ConvergenceOptions& options) {
  if (scores.empty()) throw Error(ErrorCode::EmptyScores, "no scores to subsample");
  if (options.reps == 0) throw Error(ErrorCode::InvalidArgument, "reps must be >= 1");
  for (auto s : options.sizes) {
    if (s > scores.size())
      throw Error(ErrorCode::SizeExceedsData, "subsample size " + std::to_string(s) +
                                                  " exceeds " + std::to_string(scores.size()) +
                                                  " observations");
    if (s == 0) throw Error(ErrorCode::InvalidArgument, "subsample size must be >= 1");
  }

  // Subsamples are sorted before evaluation, so a subsample holding every
  // observation reproduces the full curve bit for bit.
  const DensityCurve full = density_estimate(scores, options.bandwidth, options.grid_points);
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const auto reference = to_probabilities(kernel_sums(sorted, full.bandwidth, full.grid));

  std::vector<ConvergencePoint> out;
  out.reserve(options.sizes.size());
  std::vector<double> pool(scores.size()), sub;
  for (std::size_t si = 0; si < options.sizes.size(); ++si) {
    const std::size_t size = options.sizes[si];
    double total = 0.0;
    for (std::size_t rep = 0; rep < options.reps; ++rep) {
      Rng rng(derive_seed(options.seed, size), rep);
      std::copy(sorted.begin(), sorted.end(), pool.begin());
      for (std::size_t i = 0; i < size; ++i) {
        std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
      }
      sub.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
      std::sort(sub.begin(), sub.end());
      const double h = resolve_bandwidth(sub, options.bandwidth);
      const auto probs = to_probabilities(kernel_sums(sub, h, full.grid));
      total += js_divergence(probs, reference, LogBase::Two);
    }
    out.push_back({size, total / static_cast<double>(options.reps), options.reps});
  }
  return out;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::OutOfRange, "quantile probability outside (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double required_sample_size_exact(const PowerSpec& spec) {
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
    throw Error(ErrorCode::OutOfRange, "alpha must lie in (0, 1)");
  if (!(spec.power > 0.0 && spec.power < 1.0))
    throw Error(ErrorCode::OutOfRange, "power must lie in (0, 1)");
  if (spec.tails != 1 && spec.tails != 2)
    throw Error(ErrorCode::InvalidArgument, "tails must be 1 or 2");
  const double z = normal_quantile(1.0 - spec.alpha / spec.tails) + normal_quantile(spec.power);

  if (const auto* prop = std::get_if<ProportionEffect>(&spec.effect)) {
    for (double p : {prop->p1, prop->p2}) {
      if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::OutOfRange, "proportions must lie in (0, 1)");
    }
    if (prop->p1 == prop->p2) throw Error(ErrorCode::ZeroEffect, "p1 equals p2");
    const double diff = prop->p1 - prop->p2;
    const double variance = prop->p1 * (1.0 - prop->p1) + prop->p2 * (1.0 - prop->p2);
    return z * z * variance / (diff * diff);
  }
  const double d = std::get<StandardizedEffect>(spec.effect).d;
  if (!std::isfinite(d)) throw Error(ErrorCode::InvalidArgument, "effect size must be finite");
  if (d == 0.0) throw Error(ErrorCode::ZeroEffect, "standardized difference is zero");
  return z * z * 2.0 / (d * d);
}

std::uint64_t required_sample_size(const PowerSpec& spec) {
  return static_cast<std::uint64_t>(std::ceil(required_sample_size_exact(spec)));
}

}  // namespace concordia
