#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace concordia {

/// A categorical annotation token. Leading and trailing whitespace is trimmed
/// on construction; case is preserved and comparison is bytewise.
class Label {
 public:
  explicit Label(std::string_view token);

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const Label&, const Label&) = default;
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

/// Trim ASCII whitespace from both ends.
std::string_view trim(std::string_view s) noexcept;

/// One observed rating inside a unit, addressed by indices into the owning
/// table's rater list and label set.
struct Cell {
  std::size_t rater = 0;
  std::size_t label = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Sparse units x raters matrix of categorical labels.
///
/// Missing ratings are represented by absence. The label set is kept sorted
/// so label indices are stable for a given set of tokens. Tables are immutable
/// once built.
class AnnotationTable {
 public:
  struct Entry {
    std::size_t unit = 0;
    std::size_t rater = 0;
    Label label;
  };

  /// Throws InvalidIdentifier on empty or repeated unit/rater ids,
  /// DuplicateCell on a repeated (unit, rater) and UnknownLabel when an entry's
  /// label is outside `label_set`.
  AnnotationTable(std::vector<std::string> units, std::vector<std::string> raters,
                  std::vector<Label> label_set, const std::vector<Entry>& entries);

  std::span<const std::string> units() const noexcept { return units_; }
  std::span<const std::string> raters() const noexcept { return raters_; }
  std::span<const Label> label_set() const noexcept { return label_set_; }

  std::size_t unit_count() const noexcept { return units_.size(); }
  std::size_t rater_count() const noexcept { return raters_.size(); }
  std::size_t label_count() const noexcept { return label_set_.size(); }
  std::size_t cell_count() const noexcept { return cell_count_; }

  /// Cells of one unit, ordered by rater index.
  std::span<const Cell> cells(std::size_t unit) const { return cells_.at(unit); }

  std::optional<std::size_t> unit_index(std::string_view id) const;
  std::optional<std::size_t> rater_index(std::string_view id) const;
  std::optional<std::size_t> label_index(const Label& label) const;

  /// Label index at (unit, rater), or nullopt when missing.
  std::optional<std::size_t> at(std::size_t unit, std::size_t rater) const;

  /// Table restricted to the given units (in the given order). Raters and the
  /// label set are carried over unchanged.
  AnnotationTable select_units(std::span<const std::size_t> unit_indices) const;

  friend bool operator==(const AnnotationTable&, const AnnotationTable&) = default;

 private:
  AnnotationTable() = default;

  std::vector<std::string> units_;
  std::vector<std::string> raters_;
  std::vector<Label> label_set_;
  std::vector<std::vector<Cell>> cells_;
  std::size_t cell_count_ = 0;
};

/// One (unit, rater, label) observation in long format.
struct Record {
  std::string unit;
  std::string rater;
  std::string label;
};

/// Build a table from long-format records. Units and raters are ordered by
/// first appearance. When `label_set` is omitted it is inferred from the
/// observed labels.
AnnotationTable parse_long_records(std::span<const Record> rows,
                                   const std::optional<std::vector<Label>>& label_set = std::nullopt);

/// Two labelings of the same ordered item set. Labels are stored as indices
/// into the sorted label set.
class PairedLabels {
 public:
  PairedLabels(const std::vector<std::pair<Label, Label>>& pairs,
               const std::optional<std::vector<Label>>& label_set = std::nullopt);

  std::span<const Label> label_set() const noexcept { return label_set_; }
  std::span<const std::pair<std::size_t, std::size_t>> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  std::optional<std::size_t> label_index(const Label& label) const;

 private:
  std::vector<Label> label_set_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Pair the ratings of two raters over the table's units. Every unit must be
/// rated by both raters (IncompleteDesign otherwise).
PairedLabels paired_from_table(const AnnotationTable& table, std::size_t rater_a,
                               std::size_t rater_b);

/// Paired binary counts. The first letter is rater A's label and the second is
/// rater B's; `t` denotes the positive label.
class ConfusionTable2x2 {
 public:
  /// Throws EmptyInput when all four counts are zero.
  ConfusionTable2x2(std::uint64_t tt, std::uint64_t tf, std::uint64_t ft, std::uint64_t ff);

  std::uint64_t tt() const noexcept { return tt_; }
  std::uint64_t tf() const noexcept { return tf_; }
  std::uint64_t ft() const noexcept { return ft_; }
  std::uint64_t ff() const noexcept { return ff_; }
  std::uint64_t n() const noexcept { return tt_ + tf_ + ft_ + ff_; }

  friend bool operator==(const ConfusionTable2x2&, const ConfusionTable2x2&) = default;

 private:
  std::uint64_t tt_, tf_, ft_, ff_;
};

/// Count paired binary labels. `positive` must be one of exactly two labels.
ConfusionTable2x2 to_confusion(const PairedLabels& paired, const Label& positive);

/// Empirical probability distribution over a label set.
class LabelDistribution {
 public:
  /// Labels must be distinct. Probabilities must be finite, non-negative and
  /// sum to 1 within 1e-12; support_count must be at least 1.
  LabelDistribution(std::vector<std::pair<Label, double>> probs, std::size_t support_count);

  /// Distribution from raw counts over `labels` (same length, total > 0).
  static LabelDistribution from_counts(std::span<const Label> labels,
                                       std::span<const std::size_t> counts);

  std::span<const Label> labels() const noexcept { return labels_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t support_count() const noexcept { return support_count_; }

  /// Probability of `label`, 0 when it is not part of the label set.
  double prob(const Label& label) const;

  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;

 private:
  std::vector<Label> labels_;
  std::vector<double> probs_;
  std::size_t support_count_ = 0;
};

/// Label distribution of one unit over the table's full label set.
/// Throws EmptyUnit when the unit has no cells.
LabelDistribution item_distribution(const AnnotationTable& table, std::size_t unit);
LabelDistribution item_distribution(const AnnotationTable& table, std::string_view unit_id);

enum class TieRule { Unresolved, Lexicographic };

/// Majority-wins aggregation. Returns nullopt when the maximum is tied and
/// `tie_rule` is Unresolved; otherwise the smallest tied label.
std::optional<Label> majority_label(const LabelDistribution& dist,
                                    TieRule tie_rule = TieRule::Unresolved);

struct DisagreementSplit {
  AnnotationTable kept;
  AnnotationTable excluded;
};

/// Partition units by normalized label entropy: a unit is excluded iff its
/// entropy (over the table's full label set) is strictly above `threshold`.
DisagreementSplit filter_by_disagreement(const AnnotationTable& table, double threshold);

}  // namespace concordia
