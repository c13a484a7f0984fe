#include "concordia/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "concordia/error.hpp"
#include "concordia/soft_metrics.hpp"

namespace concordia {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<Label> sorted_unique(std::vector<Label> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

std::optional<std::size_t> find_label(std::span<const Label> set, const Label& label) {
  auto it = std::lower_bound(set.begin(), set.end(), label);
  if (it == set.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - set.begin());
}

std::string normalize_id(std::string_view id, const char* what) {
  auto t = trim(id);
  if (t.empty()) throw Error(ErrorCode::InvalidIdentifier, std::string("empty ") + what + " id");
  return std::string(t);
}

}  // namespace

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

Label::Label(std::string_view token) : value_(trim(token)) {
  if (value_.empty()) throw Error(ErrorCode::InvalidLabel, "label token is empty");
}

// ---------------------------------------------------------------------------
// AnnotationTable

AnnotationTable::AnnotationTable(std::vector<std::string> units, std::vector<std::string> raters,
                                 std::vector<Label> label_set,
                                 const std::vector<Entry>& entries) {
  auto check_ids = [](std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string> seen;
    for (auto& id : ids) {
      id = normalize_id(id, what);
      if (!seen.insert(id).second)
        throw Error(ErrorCode::InvalidIdentifier, std::string("repeated ") + what + " id '" + id + "'");
    }
  };
  check_ids(units, "unit");
  check_ids(raters, "rater");

  units_ = std::move(units);
  raters_ = std::move(raters);
  label_set_ = sorted_unique(std::move(label_set));
  cells_.resize(units_.size());

  for (const auto& e : entries) {
    if (e.unit >= units_.size() || e.rater >= raters_.size())
      throw Error(ErrorCode::OutOfRange, "cell index outside the table");
    auto label = find_label(label_set_, e.label);
    if (!label)
      throw Error(ErrorCode::UnknownLabel, "label '" + e.label.str() + "' is not in the label set");
    cells_[e.unit].push_back(Cell{e.rater, *label});
  }
  for (std::size_t u = 0; u < cells_.size(); ++u) {
    auto& row = cells_[u];
    std::stable_sort(row.begin(), row.end(),
                     [](const Cell& a, const Cell& b) { return a.rater < b.rater; });
    auto dup = std::adjacent_find(row.begin(), row.end(),
                                  [](const Cell& a, const Cell& b) { return a.rater == b.rater; });
    if (dup != row.end())
      throw Error(ErrorCode::DuplicateCell,
                  "unit '" + units_[u] + "' rated twice by '" + raters_[dup->rater] + "'");
    cell_count_ += row.size();
  }
}

std::optional<std::size_t> AnnotationTable::unit_index(std::string_view id) const {
  auto it = std::find(units_.begin(), units_.end(), trim(id));
  if (it == units_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - units_.begin());
}

std::optional<std::size_t> AnnotationTable::rater_index(std::string_view id) const {
  auto it = std::find(raters_.begin(), raters_.end(), trim(id));
  if (it == raters_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - raters_.begin());
}

std::optional<std::size_t> AnnotationTable::label_index(const Label& label) const {
  return find_label(label_set_, label);
}

std::optional<std::size_t> AnnotationTable::at(std::size_t unit, std::size_t rater) const {
  const auto& row = cells_.at(unit);
  auto it = std::lower_bound(row.begin(), row.end(), rater,
                             [](const Cell& c, std::size_t r) { return c.rater < r; });
  if (it == row.end() || it->rater != rater) return std::nullopt;
  return it->label;
}

AnnotationTable AnnotationTable::select_units(std::span<const std::size_t> unit_indices) const {
  AnnotationTable out;
  out.raters_ = raters_;
  out.label_set_ = label_set_;
  out.units_.reserve(unit_indices.size());
  out.cells_.reserve(unit_indices.size());
  std::unordered_set<std::size_t> seen;
  for (auto u : unit_indices) {
    if (u >= units_.size()) throw Error(ErrorCode::OutOfRange, "unit index outside the table");
    if (!seen.insert(u).second)
      throw Error(ErrorCode::InvalidIdentifier, "unit selected twice: '" + units_[u] + "'");
    out.units_.push_back(units_[u]);
    out.cells_.push_back(cells_[u]);
    out.cell_count_ += cells_[u].size();
  }
  return out;
}

AnnotationTable parse_long_records(std::span<const Record> rows,
                                   const std::optional<std::vector<Label>>& label_set) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no annotation records");

  std::vector<std::string> units, raters;
  std::unordered_map<std::string, std::size_t> unit_pos, rater_pos;
  std::vector<AnnotationTable::Entry> entries;
  entries.reserve(rows.size());
  std::vector<Label> observed;
  std::vector<Label> admissible;
  if (label_set) admissible = sorted_unique(*label_set);

  auto intern = [](std::vector<std::string>& ids, std::unordered_map<std::string, std::size_t>& pos,
                   std::string id) {
    auto [it, inserted] = pos.emplace(id, ids.size());
    if (inserted) ids.push_back(std::move(id));
    return it->second;
  };

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    auto unit = normalize_id(row.unit, "unit");
    auto rater = normalize_id(row.rater, "rater");
    Label label(row.label);
    if (label_set && !find_label(admissible, label)) {
      throw Error(ErrorCode::UnknownLabel,
                  "row " + std::to_string(i + 1) + ": label '" + label.str() + "' is not admissible");
    }
    auto u = intern(units, unit_pos, std::move(unit));
    auto r = intern(raters, rater_pos, std::move(rater));
    if (!label_set) observed.push_back(label);
    entries.push_back({u, r, std::move(label)});
  }

  auto labels = label_set ? std::move(admissible) : sorted_unique(std::move(observed));
  return AnnotationTable(std::move(units), std::move(raters), std::move(labels), entries);
}

// ---------------------------------------------------------------------------
// PairedLabels

PairedLabels::PairedLabels(const std::vector<std::pair<Label, Label>>& pairs,
                           const std::optional<std::vector<Label>>& label_set) {
  if (label_set) {
    label_set_ = sorted_unique(*label_set);
  } else {
    std::vector<Label> observed;
    observed.reserve(2 * pairs.size());
    for (const auto& [a, b] : pairs) {
      observed.push_back(a);
      observed.push_back(b);
    }
    label_set_ = sorted_unique(std::move(observed));
  }
  pairs_.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    auto ia = find_label(label_set_, a);
    auto ib = find_label(label_set_, b);
    if (!ia || !ib)
      throw Error(ErrorCode::UnknownLabel,
                  "pair label '" + (ia ? b : a).str() + "' is not in the label set");
    pairs_.emplace_back(*ia, *ib);
  }
}

std::optional<std::size_t> PairedLabels::label_index(const Label& label) const {
  return find_label(label_set_, label);
}

PairedLabels paired_from_table(const AnnotationTable& table, std::size_t rater_a,
                               std::size_t rater_b) {
  if (rater_a >= table.rater_count() || rater_b >= table.rater_count() || rater_a == rater_b)
    throw Error(ErrorCode::InvalidArgument, "paired raters must be two distinct raters of the table");
  std::vector<std::pair<Label, Label>> pairs;
  pairs.reserve(table.unit_count());
  const auto labels = table.label_set();
  for (std::size_t u = 0; u < table.unit_count(); ++u) {
    auto a = table.at(u, rater_a);
    auto b = table.at(u, rater_b);
    if (!a || !b)
      throw Error(ErrorCode::IncompleteDesign,
                  "unit '" + table.units()[u] + "' is not rated by both raters");
    pairs.emplace_back(labels[*a], labels[*b]);
  }
  return PairedLabels(pairs, std::vector<Label>(labels.begin(), labels.end()));
}

// ---------------------------------------------------------------------------
// ConfusionTable2x2

ConfusionTable2x2::ConfusionTable2x2(std::uint64_t tt, std::uint64_t tf, std::uint64_t ft,
                                     std::uint64_t ff)
    : tt_(tt), tf_(tf), ft_(ft), ff_(ff) {
  if (n() == 0) throw Error(ErrorCode::EmptyInput, "confusion table has no observations");
}

ConfusionTable2x2 to_confusion(const PairedLabels& paired, const Label& positive) {
  if (paired.label_set().size() != 2)
    throw Error(ErrorCode::NonBinaryLabels, "label set has " +
                                                std::to_string(paired.label_set().size()) +
                                                " labels, expected 2");
  auto pos = paired.label_index(positive);
  if (!pos) throw Error(ErrorCode::UnknownLabel, "positive label '" + positive.str() + "' is not in the label set");
  std::uint64_t counts[2][2] = {{0, 0}, {0, 0}};
  for (const auto& [a, b] : paired.pairs()) {
    ++counts[a == *pos ? 0 : 1][b == *pos ? 0 : 1];
  }
  return ConfusionTable2x2(counts[0][0], counts[0][1], counts[1][0], counts[1][1]);
}

// ---------------------------------------------------------------------------
// LabelDistribution

LabelDistribution::LabelDistribution(std::vector<std::pair<Label, double>> probs,
                                     std::size_t support_count)
    : support_count_(support_count) {
  if (probs.empty()) throw Error(ErrorCode::InvalidDistribution, "distribution has no labels");
  if (support_count == 0) throw Error(ErrorCode::InvalidDistribution, "support count must be >= 1");
  std::sort(probs.begin(), probs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (i > 0 && probs[i].first == probs[i - 1].first)
      throw Error(ErrorCode::InvalidDistribution, "label '" + probs[i].first.str() + "' repeated");
    double p = probs[i].second;
    if (!std::isfinite(p) || p < 0.0)
      throw Error(ErrorCode::InvalidDistribution, "probabilities must be finite and non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidDistribution, "probabilities do not sum to 1");
  labels_.reserve(probs.size());
  probs_.reserve(probs.size());
  for (auto& [label, p] : probs) {
    labels_.push_back(std::move(label));
    probs_.push_back(p);
  }
}

LabelDistribution LabelDistribution::from_counts(std::span<const Label> labels,
                                                 std::span<const std::size_t> counts) {
  if (labels.size() != counts.size())
    throw Error(ErrorCode::LengthMismatch, "labels and counts differ in length");
  std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) throw Error(ErrorCode::EmptyUnit, "no observations to estimate from");
  std::vector<std::pair<Label, double>> probs;
  probs.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    probs.emplace_back(labels[i], static_cast<double>(counts[i]) / static_cast<double>(total));
  }
  return LabelDistribution(std::move(probs), total);
}

double LabelDistribution::prob(const Label& label) const {
  auto i = find_label(labels_, label);
  return i ? probs_[*i] : 0.0;
}

LabelDistribution item_distribution(const AnnotationTable& table, std::size_t unit) {
  if (unit >= table.unit_count()) throw Error(ErrorCode::OutOfRange, "unit index outside the table");
  auto cells = table.cells(unit);
  if (cells.empty())
    throw Error(ErrorCode::EmptyUnit, "unit '" + table.units()[unit] + "' has no ratings");
  std::vector<std::size_t> counts(table.label_count(), 0);
  for (const auto& c : cells) ++counts[c.label];
  return LabelDistribution::from_counts(table.label_set(), counts);
}

LabelDistribution item_distribution(const AnnotationTable& table, std::string_view unit_id) {
  auto u = table.unit_index(unit_id);
  if (!u) throw Error(ErrorCode::InvalidIdentifier, "unknown unit '" + std::string(unit_id) + "'");
  return item_distribution(table, *u);
}

std::optional<Label> majority_label(const LabelDistribution& dist, TieRule tie_rule) {
  auto probs = dist.probs();
  double best = *std::max_element(probs.begin(), probs.end());
  std::optional<std::size_t> winner;
  std::size_t ties = 0;
  // Labels are sorted, so the first maximum is the lexicographically smallest.
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == best) {
      if (!winner) winner = i;
      ++ties;
    }
  }
  if (ties > 1 && tie_rule == TieRule::Unresolved) return std::nullopt;
  return dist.labels()[*winner];
}

DisagreementSplit filter_by_disagreement(const AnnotationTable& table, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(ErrorCode::OutOfRange, "disagreement threshold must lie in [0, 1]");
  std::vector<std::size_t> kept, excluded;
  for (std::size_t u = 0; u < table.unit_count(); ++u) {
    auto dist = item_distribution(table, u);
    // A single-label task has no disagreement to measure.
    double h = table.label_count() >= 2 ? item_entropy(dist, LogBase::Two, true) : 0.0;
    (h > threshold ? excluded : kept).push_back(u);
  }
  return {table.select_units(kept), table.select_units(excluded)};
}

}  // namespace concordia
