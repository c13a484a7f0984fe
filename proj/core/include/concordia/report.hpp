#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "concordia/agreement.hpp"
#include "concordia/power.hpp"
#include "concordia/significance.hpp"
#include "concordia/soft_metrics.hpp"

namespace concordia {

enum class Format { Text, Json, Csv };

/// "text", "json" or "csv"; anything else raises UnsupportedFormat.
Format parse_format(std::string_view name);
std::string_view to_string(Format f) noexcept;

/// Fixed-point text with `decimals` places ("0.0937").
std::string format_fixed(double value, int decimals);

/// "p < .001" below the threshold, otherwise "p = .xxx" (no leading zero).
std::string format_p_value(double p);

/// A single named real, e.g. a divergence or a similarity.
struct ScalarResult {
  std::string name;
  double value = 0.0;
};

struct SampleSizeResult {
  PowerSpec spec;
  double exact = 0.0;
  std::uint64_t per_group = 0;
};

// Every renderer is deterministic: identical input gives identical bytes.
// JSON numbers carry full precision; text output rounds for display only.
std::string render(const ReliabilityResult& r, Format f);
std::string render(const McNemarResult& r, Format f);
std::string render(const ClassificationMetrics& m, Format f);
std::string render(const BootstrapCI& ci, Format f);
std::string render(const ScalarResult& s, Format f);
std::string render(const EntropyVector& v, Format f);
std::string render(const ItemScores& s, Format f);
std::string render(const DensityCurve& c, Format f);
std::string render(const std::vector<ConvergencePoint>& points, Format f);
std::string render(const SampleSizeResult& s, Format f);

/// Inverse of the JSON renderers.
ReliabilityResult reliability_from_json(std::string_view json);
McNemarResult mcnemar_from_json(std::string_view json);
BootstrapCI bootstrap_from_json(std::string_view json);

}  // namespace concordia
