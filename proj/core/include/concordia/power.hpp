#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "concordia/annotation.hpp"

namespace concordia {

/// Numeric value for each label of a response scale, e.g. Yes=1, Maybe=2, No=3.
using Scale = std::vector<std::pair<Label, double>>;

/// Parse "Yes=1,Maybe=2,No=3".
Scale parse_scale(std::string_view spec);

struct ItemScores {
  std::vector<std::string> units;
  std::vector<double> scores;            // per-unit mean of mapped responses
  std::vector<std::size_t> obs_counts;   // responses behind each score
  Scale scale;
};

/// Per-unit arithmetic mean of scale-mapped responses. Throws UnmappedLabel
/// for an observed label without a scale value and EmptyUnit for a unit
/// without ratings.
ItemScores mean_item_scores(const AnnotationTable& table, const Scale& scale);

/// Every observation mapped through the scale, unit-major in table order.
std::vector<double> observation_scores(const AnnotationTable& table, const Scale& scale);

struct DensityCurve {
  std::vector<double> grid;     // strictly increasing
  std::vector<double> density;  // trapezoidal integral over grid is 1
  double bandwidth = 0.0;
  std::size_t n = 0;
};

/// Silverman's rule of thumb, 0.9 * min(sd, IQR / 1.34) * n^(-1/5). When one
/// of the spread measures is zero the other is used; DegenerateSample when
/// both are.
double silverman_bandwidth(std::span<const double> scores);

/// Gaussian kernel density on `grid_points` evenly spaced points covering
/// [min - 3h, max + 3h]. `bandwidth` = nullopt selects Silverman's rule.
/// The curve is rescaled so its trapezoidal integral over the grid is 1.
DensityCurve density_estimate(std::span<const double> scores,
                              std::optional<double> bandwidth = std::nullopt,
                              std::size_t grid_points = 512);

struct ConvergenceOptions {
  std::vector<std::size_t> sizes;
  std::size_t reps = 20;
  std::uint64_t seed = 0;
  std::optional<double> bandwidth;  // nullopt: Silverman per (sub)sample
  std::size_t grid_points = 512;
};

struct ConvergencePoint {
  std::size_t size = 0;
  double mean_jsd = 0.0;
  std::size_t rep_count = 0;
};

/// For each size, draw `reps` subsamples without replacement, estimate their
/// densities on the full sample's grid, renormalize both curves to
/// probability vectors and average the Jensen-Shannon divergence (bits) to
/// the full-sample curve.
std::vector<ConvergencePoint> subsample_convergence(std::span<const double> scores,
                                                    const ConvergenceOptions& options);

struct ProportionEffect {
  double p1 = 0.5;
  double p2 = 0.5;
};

struct StandardizedEffect {
  double d = 0.0;
};

struct PowerSpec {
  double alpha = 0.05;
  double power = 0.8;
  std::variant<ProportionEffect, StandardizedEffect> effect;
  int tails = 2;
};

/// Normal-approximation sample size per group before rounding:
///   proportions: (z_{1-alpha/tails} + z_power)^2 (p1(1-p1) + p2(1-p2)) / (p1 - p2)^2
///   standardized difference: (z_{1-alpha/tails} + z_power)^2 * 2 / d^2
double required_sample_size_exact(const PowerSpec& spec);

/// required_sample_size_exact rounded up to a whole number of items.
std::uint64_t required_sample_size(const PowerSpec& spec);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace concordia
