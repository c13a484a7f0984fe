#include "concordia/soft_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "concordia/error.hpp"

namespace concordia {

namespace {

double log_base(double x, LogBase base) {
  return base == LogBase::Two ? std::log2(x) : std::log(x);
}

void check_same_support(const LabelDistribution& p, const LabelDistribution& q) {
  if (p.size() != q.size() || !std::equal(p.labels().begin(), p.labels().end(), q.labels().begin()))
    throw Error(ErrorCode::LabelSetMismatch, "distributions are over different label sets");
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::LengthMismatch, "vectors differ in length");
}

// p * log(p / m), with the 0 log 0 = 0 convention.
double kl_term(double p, double m, LogBase base) {
  return p > 0.0 ? p * log_base(p / m, base) : 0.0;
}

void check_alignment(const EntropyVector& a, const EntropyVector& b) {
  check_lengths(a.values.size(), b.values.size());
  if (!a.units.empty() && !b.units.empty() && a.units != b.units)
    throw Error(ErrorCode::InvalidArgument, "entropy vectors are aligned to different unit orders");
}

}  // namespace

double cross_entropy(std::span<const double> p, std::span<const double> q, LogBase base,
                     double epsilon) {
  check_lengths(p.size(), q.size());
  if (p.empty()) throw Error(ErrorCode::EmptyInput, "empty distribution");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorCode::InvalidArgument, "smoothing epsilon must be finite and >= 0");
  const double norm = 1.0 + epsilon * static_cast<double>(q.size());
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    double qs = (q[i] + epsilon) / norm;
    if (qs <= 0.0)
      throw Error(ErrorCode::InfiniteResult, "q has zero mass where p is positive");
    h -= p[i] * log_base(qs, base);
  }
  return h;
}

double cross_entropy(const LabelDistribution& p, const LabelDistribution& q, LogBase base,
                     double epsilon) {
  check_same_support(p, q);
  return cross_entropy(p.probs(), q.probs(), base, epsilon);
}

double js_divergence(std::span<const double> p, std::span<const double> q, LogBase base) {
  check_lengths(p.size(), q.size());
  if (p.empty()) throw Error(ErrorCode::EmptyInput, "empty distribution");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == q[i]) continue;  // both terms vanish
    double m = 0.5 * (p[i] + q[i]);
    sum += kl_term(p[i], m, base) + kl_term(q[i], m, base);
  }
  const double upper = base == LogBase::Two ? 1.0 : std::numbers::ln2;
  return std::clamp(0.5 * sum, 0.0, upper);
}

double js_divergence(const LabelDistribution& p, const LabelDistribution& q, LogBase base) {
  check_same_support(p, q);
  return js_divergence(p.probs(), q.probs(), base);
}

double entropy(std::span<const double> probs, LogBase base) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * log_base(p, base);
  }
  return std::max(h, 0.0);
}

double item_entropy(const LabelDistribution& dist, LogBase base, bool normalized) {
  double h = entropy(dist.probs(), base);
  if (!normalized) return h;
  if (dist.size() < 2)
    throw Error(ErrorCode::NormalizationUndefined, "normalized entropy needs at least 2 labels");
  return std::min(h / log_base(static_cast<double>(dist.size()), base), 1.0);
}

EntropyVector entropy_vector(const AnnotationTable& table, LogBase base, bool normalized) {
  EntropyVector out;
  out.base = base;
  out.normalized = normalized;
  out.units.assign(table.units().begin(), table.units().end());
  out.values.reserve(table.unit_count());
  for (std::size_t u = 0; u < table.unit_count(); ++u) {
    out.values.push_back(item_entropy(item_distribution(table, u), base, normalized));
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  check_lengths(a.size(), b.size());
  if (a.empty()) throw Error(ErrorCode::EmptyInput, "empty vectors");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine of a zero-norm vector");
  return dot / std::sqrt(na * nb);
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  check_lengths(a.size(), b.size());
  if (a.size() < 2) throw Error(ErrorCode::EmptyInput, "correlation needs at least 2 items");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(a) || constant(b)) throw Error(ErrorCode::ZeroVariance, "constant vector");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw Error(ErrorCode::ZeroVariance, "constant vector");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double entropy_similarity(const EntropyVector& human, const EntropyVector& model) {
  check_alignment(human, model);
  for (const auto* v : {&human.values, &model.values}) {
    if (std::any_of(v->begin(), v->end(), [](double x) { return !(x >= 0.0); }))
      throw Error(ErrorCode::InvalidArgument, "entropies must be non-negative");
  }
  return std::clamp(cosine_similarity(human.values, model.values), 0.0, 1.0);
}

double entropy_correlation(const EntropyVector& human, const EntropyVector& model) {
  check_alignment(human, model);
  return pearson_correlation(human.values, model.values);
}

}  // namespace concordia
