#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oracle {

AlphaOracle krippendorff_pairwise(const CodedTable& t, bool ordinal, const std::vector<double>& values) {
  const std::size_t K = t.categories;
  std::vector<std::vector<double>> o(K, std::vector<double>(K, 0.0));
  bool any_pairable = false;
  for (std::size_t u = 0; u < t.units; ++u) {
    std::vector<int> vals;
    for (std::size_t r = 0; r < t.raters; ++r) {
      const auto c = t.codes[u * t.raters + r];
      if (c >= 0) vals.push_back(c);
    }
    const std::size_t m = vals.size();
    if (m < 2) continue;
    any_pairable = true;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) o[vals[i]][vals[j]] += 1.0 / static_cast<double>(m - 1);
  }
  if (!any_pairable) return {AlphaOutcome::NoPairable, 0.0};

  std::vector<double> nc(K, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < K; ++c)
    for (std::size_t k = 0; k < K; ++k) {
      nc[c] += o[c][k];
      n += o[c][k];
    }
  std::set<std::size_t> used;
  for (std::size_t c = 0; c < K; ++c)
    if (nc[c] > 0.5) used.insert(c);
  if (used.size() < 2) return {AlphaOutcome::Degenerate, 0.0};

  auto delta = [&](std::size_t c, std::size_t k) -> double {
    if (!values.empty()) return (values[c] - values[k]) * (values[c] - values[k]);
    if (!ordinal) return c == k ? 0.0 : 1.0;
    const std::size_t lo = std::min(c, k), hi = std::max(c, k);
    double s = 0.0;
    for (std::size_t g = lo; g <= hi; ++g) s += nc[g];
    s -= (nc[c] + nc[k]) / 2.0;
    return s * s;
  };

  double Do = 0.0, De = 0.0;
  for (std::size_t c = 0; c < K; ++c)
    for (std::size_t k = 0; k < K; ++k) {
      Do += o[c][k] * delta(c, k);
      De += nc[c] * nc[k] * delta(c, k);
    }
  Do /= n;
  De /= n * (n - 1.0);
  if (De == 0.0) return {AlphaOutcome::Degenerate, 0.0};
  return {AlphaOutcome::Value, 1.0 - Do / De};
}

FleissOracle fleiss_direct(const std::vector<std::vector<int>>& counts) {
  const double N = static_cast<double>(counts.size());
  int m = 0;
  for (int v : counts.front()) m += v;
  const std::size_t k = counts.front().size();

  double pbar = 0.0;
  std::vector<double> pj(k, 0.0);
  for (const auto& row : counts) {
    double sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      sq += static_cast<double>(row[j]) * row[j];
      pj[j] += row[j];
    }
    pbar += (sq - m) / (static_cast<double>(m) * (m - 1));
  }
  pbar /= N;
  double pe = 0.0;
  int nonzero = 0;
  for (double& p : pj) {
    if (p > 0) ++nonzero;
    p /= N * m;
    pe += p * p;
  }
  if (nonzero < 2) return {FleissOutcome::Degenerate, 0.0};
  return {FleissOutcome::Value, (pbar - pe) / (1.0 - pe)};
}

double cohen_direct(const std::vector<std::vector<double>>& table) {
  const std::size_t k = table.size();
  double n = 0.0, agree = 0.0;
  std::vector<double> row(k, 0.0), col(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      n += table[i][j];
      row[i] += table[i][j];
      col[j] += table[i][j];
      if (i == j) agree += table[i][j];
    }
  const double po = agree / n;
  double pe = 0.0;
  for (std::size_t i = 0; i < k; ++i) pe += (row[i] / n) * (col[i] / n);
  return (po - pe) / (1.0 - pe);
}

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0) h -= v * std::log2(v);
  return h;
}

double kl_bits(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0) d += p[i] * std::log2(p[i] / q[i]);
  return d;
}

std::vector<double> random_distribution(concordia::Rng& rng, std::size_t k, bool sparse) {
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& v : w) {
    v = -std::log(1.0 - rng.uniform());
    if (sparse && rng.uniform() < 0.3) v = 0.0;
    total += v;
  }
  if (total == 0.0) {
    w[rng.below(k)] = 1.0;
    total = 1.0;
  }
  for (auto& v : w) v /= total;
  return w;
}

std::vector<double> bimodal_sample(std::uint64_t seed, std::size_t n) {
  concordia::Rng rng(seed, 7);
  std::vector<double> out(n);
  for (auto& v : out) {
    v = rng.uniform() < 0.65 ? 1.4 + 0.25 * rng.normal() : 2.6 + 0.3 * rng.normal();
  }
  return out;
}

concordia::ConfusionTable2x2 synthetic_confusion(concordia::Rng& rng, std::size_t n, double acc) {
  std::uint64_t tt = 0, tf = 0, ft = 0, ff = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool correct = rng.uniform() < acc;
    const bool positive = rng.uniform() < 0.4;
    if (correct)
      ++(positive ? tt : ff);
    else
      ++(positive ? tf : ft);
  }
  return {tt, tf, ft, ff};
}

concordia::AnnotationTable to_table(const CodedTable& t) {
  std::vector<std::string> units, raters;
  for (std::size_t u = 0; u < t.units; ++u) units.push_back("u" + std::to_string(u));
  for (std::size_t r = 0; r < t.raters; ++r) raters.push_back("r" + std::to_string(r));
  std::vector<concordia::Label> labels;
  for (std::size_t c = 0; c < t.categories; ++c) labels.emplace_back("c" + std::to_string(c));
  std::vector<concordia::AnnotationTable::Entry> entries;
  for (std::size_t u = 0; u < t.units; ++u)
    for (std::size_t r = 0; r < t.raters; ++r) {
      const auto c = t.codes[u * t.raters + r];
      if (c >= 0) entries.push_back({u, r, labels[static_cast<std::size_t>(c)]});
    }
  return concordia::AnnotationTable(units, raters, labels, entries);
}

}  // namespace oracle
