#pragma once

#include <span>
#include <string>
#include <vector>

#include "concordia/annotation.hpp"

namespace concordia {

/// Logarithm base for entropic quantities. Bits are the default everywhere.
enum class LogBase { Two, E };

/// Cross-entropy H(p, q') in the given base, where q' is q with `epsilon`
/// added to every mass and renormalized. With epsilon = 0, a zero q mass under
/// positive p mass raises InfiniteResult. p and q must share a label set.
double cross_entropy(const LabelDistribution& p, const LabelDistribution& q,
                     LogBase base = LogBase::Two, double epsilon = 0.0);
double cross_entropy(std::span<const double> p, std::span<const double> q,
                     LogBase base = LogBase::Two, double epsilon = 0.0);

/// Jensen-Shannon divergence: mean KL of p and q to their midpoint. Exactly
/// symmetric, finite, and within [0, log(2)] in the chosen base.
double js_divergence(const LabelDistribution& p, const LabelDistribution& q,
                     LogBase base = LogBase::Two);
double js_divergence(std::span<const double> p, std::span<const double> q,
                     LogBase base = LogBase::Two);

/// Shannon entropy; `normalized` divides by log(k) for the full label set
/// size k, which requires k >= 2.
double item_entropy(const LabelDistribution& dist, LogBase base = LogBase::Two,
                    bool normalized = false);
double entropy(std::span<const double> probs, LogBase base = LogBase::Two);

/// Per-item entropies aligned to a unit ordering.
struct EntropyVector {
  std::vector<std::string> units;  // may be empty when alignment is implicit
  std::vector<double> values;
  LogBase base = LogBase::Two;
  bool normalized = false;
};

/// Entropy of every unit's label distribution, in table unit order.
EntropyVector entropy_vector(const AnnotationTable& table, LogBase base = LogBase::Two,
                             bool normalized = true);

/// Cosine similarity of two non-negative entropy vectors, in [0, 1].
double entropy_similarity(const EntropyVector& human, const EntropyVector& model);

/// Pearson correlation of two entropy vectors (length >= 2, non-constant).
double entropy_correlation(const EntropyVector& human, const EntropyVector& model);

double cosine_similarity(std::span<const double> a, std::span<const double> b);
double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace concordia
