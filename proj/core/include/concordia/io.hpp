#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "concordia/annotation.hpp"
#include "concordia/power.hpp"
#include "concordia/soft_metrics.hpp"

namespace concordia {

/// Split one CSV record (RFC 4180 quoting). Line terminators must already be
/// stripped; quoted fields may not span lines.
std::vector<std::string> split_csv_line(std::string_view line);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Long format: header `unit_id,rater_id,label`, one observation per row.
AnnotationTable read_long_csv(std::istream& in,
                              const std::optional<std::vector<Label>>& label_set = std::nullopt);

/// Rows are emitted in an order that reproduces the table's unit and rater
/// orders when read back.
void write_long_csv(std::ostream& out, const AnnotationTable& table);

/// Wide format: header `unit_id,<rater_1>,...,<rater_k>`; empty field = missing.
AnnotationTable read_wide_csv(std::istream& in,
                              const std::optional<std::vector<Label>>& label_set = std::nullopt);
void write_wide_csv(std::ostream& out, const AnnotationTable& table);

/// Object with non-negative integer fields `tt`, `tf`, `ft`, `ff`.
ConfusionTable2x2 read_confusion_json(std::istream& in);
void write_confusion_json(std::ostream& out, const ConfusionTable2x2& confusion);

/// `unit_id,entropy`
void write_entropy_csv(std::ostream& out, const EntropyVector& v);
EntropyVector read_entropy_csv(std::istream& in);

/// `x,density`
void write_density_csv(std::ostream& out, const DensityCurve& curve);

/// `size,mean_jsd,rep_count`
void write_convergence_csv(std::ostream& out, const std::vector<ConvergencePoint>& points);

/// First column of a CSV whose header starts with `score`.
std::vector<double> read_scores_csv(std::istream& in);

/// Read a whole file; IoError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace concordia
