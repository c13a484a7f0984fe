#include "concordia/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "concordia/error.hpp"

namespace concordia {

namespace {

// Reads CSV records line by line, tracking line numbers for error messages.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line_no_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      try {
        fields = split_csv_line(line);
      } catch (const Error& e) {
        fail(e.what());
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no_) + ": " + what);
  }

  std::size_t line() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

void write_field(std::ostream& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void expect_header(CsvReader& reader, std::vector<std::string>& fields,
                   std::initializer_list<std::string_view> names, bool exact) {
  if (!reader.next(fields)) throw Error(ErrorCode::EmptyInput, "CSV input is empty");
  bool ok = exact ? fields.size() == names.size() : fields.size() >= names.size();
  std::size_t i = 0;
  for (auto name : names) {
    if (!ok) break;
    ok = trim(fields[i++]) == name;
  }
  if (!ok) {
    std::string want;
    for (auto name : names) want += (want.empty() ? "" : ",") + std::string(name);
    reader.fail("expected header '" + want + (exact ? "'" : ",...'"));
  }
}

double parse_number(const CsvReader& reader, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    reader.fail("not a number: '" + std::string(text) + "'");
  return v;
}

// Orders cells so that first appearances of units and raters follow the
// table's orders. Returns nullopt when no such ordering exists.
std::optional<std::vector<std::pair<std::size_t, Cell>>> appearance_order(
    const AnnotationTable& table) {
  const std::size_t U = table.unit_count(), R = table.rater_count();
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> min_rater(U, none), min_unit(R, none);
  std::vector<std::vector<std::pair<std::size_t, Cell>>> by_rater(R);
  for (std::size_t u = 0; u < U; ++u) {
    for (const auto& c : table.cells(u)) {
      min_rater[u] = std::min(min_rater[u], c.rater);
      min_unit[c.rater] = std::min(min_unit[c.rater], u);
      by_rater[c.rater].emplace_back(u, c);
    }
  }
  std::vector<std::pair<std::size_t, Cell>> rows;
  rows.reserve(table.cell_count());
  std::size_t nu = 0, nr = 0;
  auto emit_unit = [&](std::size_t u, std::size_t below_rater) {
    for (const auto& c : table.cells(u))
      if (c.rater < below_rater) rows.emplace_back(u, c);
  };
  auto emit_rater = [&](std::size_t r, std::size_t below_unit) {
    for (const auto& [u, c] : by_rater[r])
      if (u < below_unit) rows.emplace_back(u, c);
  };
  while (nu < U || nr < R) {
    if (nu < U && min_rater[nu] != none && min_rater[nu] < nr) {
      emit_unit(nu, nr);
      ++nu;
    } else if (nr < R && min_unit[nr] != none && min_unit[nr] < nu) {
      emit_rater(nr, nu);
      ++nr;
    } else if (nu < U && nr < R && min_rater[nu] == nr && min_unit[nr] == nu) {
      // Unit and rater first appear together; (nu, nr) is their only
      // cell below the frontier.
      ++nu;
      ++nr;
      emit_unit(nu - 1, nr);
    } else {
      return std::nullopt;
    }
  }
  return rows;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && trim(field).empty() && !was_quoted) {
      field.clear();
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------

AnnotationTable read_long_csv(std::istream& in, const std::optional<std::vector<Label>>& label_set) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  expect_header(reader, fields, {"unit_id", "rater_id", "label"}, true);
  std::vector<Record> rows;
  while (reader.next(fields)) {
    if (fields.size() != 3) reader.fail("expected 3 fields, got " + std::to_string(fields.size()));
    rows.push_back({std::move(fields[0]), std::move(fields[1]), std::move(fields[2])});
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "CSV has a header but no observations");
  return parse_long_records(rows, label_set);
}

void write_long_csv(std::ostream& out, const AnnotationTable& table) {
  out << "unit_id,rater_id,label\n";
  auto rows = appearance_order(table);
  if (!rows) {
    rows.emplace();
    for (std::size_t u = 0; u < table.unit_count(); ++u)
      for (const auto& c : table.cells(u)) rows->emplace_back(u, c);
  }
  for (const auto& [u, c] : *rows) {
    write_field(out, table.units()[u]);
    out << ',';
    write_field(out, table.raters()[c.rater]);
    out << ',';
    write_field(out, table.label_set()[c.label].str());
    out << '\n';
  }
}

AnnotationTable read_wide_csv(std::istream& in, const std::optional<std::vector<Label>>& label_set) {
  CsvReader reader(in);
  std::vector<std::string> header;
  expect_header(reader, header, {"unit_id"}, false);
  if (header.size() < 2) reader.fail("wide CSV needs at least one rater column");
  std::vector<std::string> raters(header.begin() + 1, header.end());

  std::vector<std::string> units;
  std::vector<AnnotationTable::Entry> entries;
  std::vector<Label> observed;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != header.size())
      reader.fail("expected " + std::to_string(header.size()) + " fields, got " +
                  std::to_string(fields.size()));
    const std::size_t u = units.size();
    units.push_back(fields[0]);
    for (std::size_t r = 0; r + 1 < fields.size(); ++r) {
      if (trim(fields[r + 1]).empty()) continue;
      Label label(fields[r + 1]);
      if (!label_set) observed.push_back(label);
      entries.push_back({u, r, std::move(label)});
    }
  }
  if (units.empty()) throw Error(ErrorCode::EmptyInput, "CSV has a header but no units");
  std::vector<Label> labels = label_set ? *label_set : std::move(observed);
  return AnnotationTable(std::move(units), std::move(raters), std::move(labels), entries);
}

void write_wide_csv(std::ostream& out, const AnnotationTable& table) {
  out << "unit_id";
  for (const auto& r : table.raters()) {
    out << ',';
    write_field(out, r);
  }
  out << '\n';
  for (std::size_t u = 0; u < table.unit_count(); ++u) {
    write_field(out, table.units()[u]);
    std::size_t next = 0;
    for (const auto& c : table.cells(u)) {
      for (; next < c.rater; ++next) out << ',';
      out << ',';
      write_field(out, table.label_set()[c.label].str());
      ++next;
    }
    for (; next < table.rater_count(); ++next) out << ',';
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

ConfusionTable2x2 read_confusion_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("confusion JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "confusion JSON must be an object");
  auto field = [&](const char* name) -> std::uint64_t {
    auto it = doc.find(name);
    if (it == doc.end()) throw Error(ErrorCode::ParseError, std::string("missing field '") + name + "'");
    if (it->is_number_unsigned()) return it->get<std::uint64_t>();
    if (it->is_number_integer())
      throw Error(ErrorCode::ParseError, std::string("field '") + name + "' is negative");
    throw Error(ErrorCode::ParseError, std::string("field '") + name + "' is not an integer");
  };
  return ConfusionTable2x2(field("tt"), field("tf"), field("ft"), field("ff"));
}

void write_confusion_json(std::ostream& out, const ConfusionTable2x2& c) {
  nlohmann::ordered_json doc;
  doc["tt"] = c.tt();
  doc["tf"] = c.tf();
  doc["ft"] = c.ft();
  doc["ff"] = c.ff();
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

void write_entropy_csv(std::ostream& out, const EntropyVector& v) {
  out << "unit_id,entropy\n";
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    write_field(out, i < v.units.size() ? v.units[i] : std::to_string(i + 1));
    out << ',' << format_double(v.values[i]) << '\n';
  }
}

EntropyVector read_entropy_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  expect_header(reader, fields, {"unit_id", "entropy"}, true);
  EntropyVector v;
  while (reader.next(fields)) {
    if (fields.size() != 2) reader.fail("expected 2 fields");
    v.units.emplace_back(trim(fields[0]));
    const double h = parse_number(reader, fields[1]);
    if (!(h >= 0.0)) reader.fail("entropy must be non-negative");
    v.values.push_back(h);
  }
  if (v.values.empty()) throw Error(ErrorCode::EmptyInput, "entropy CSV has no rows");
  v.normalized = std::all_of(v.values.begin(), v.values.end(), [](double h) { return h <= 1.0; });
  return v;
}

void write_density_csv(std::ostream& out, const DensityCurve& curve) {
  out << "x,density\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    out << format_double(curve.grid[i]) << ',' << format_double(curve.density[i]) << '\n';
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergencePoint>& points) {
  out << "size,mean_jsd,rep_count\n";
  for (const auto& p : points)
    out << p.size << ',' << format_double(p.mean_jsd) << ',' << p.rep_count << '\n';
}

std::vector<double> read_scores_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  expect_header(reader, fields, {"score"}, false);
  std::vector<double> scores;
  while (reader.next(fields)) scores.push_back(parse_number(reader, fields[0]));
  if (scores.empty()) throw Error(ErrorCode::EmptyScores, "score CSV has no rows");
  return scores;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace concordia
