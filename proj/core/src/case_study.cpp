#include "concordia/case_study.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "concordia/agreement.hpp"
#include "concordia/error.hpp"
#include "concordia/io.hpp"
#include "concordia/significance.hpp"

#ifndef CONCORDIA_SOURCE_DATA_DIR
#define CONCORDIA_SOURCE_DATA_DIR ""
#endif
#ifndef CONCORDIA_INSTALL_DATA_DIR
#define CONCORDIA_INSTALL_DATA_DIR ""
#endif

namespace concordia {

std::filesystem::path default_fixture_path() {
  const std::filesystem::path rel = std::filesystem::path("casestudy") / "table2.json";
  std::filesystem::path source = std::filesystem::path(CONCORDIA_SOURCE_DATA_DIR) / rel;
  if (std::filesystem::exists(source)) return source;
  return std::filesystem::path(CONCORDIA_INSTALL_DATA_DIR) / rel;
}

CaseStudyReport reproduce_case_study(const std::filesystem::path& fixture) {
  if (!std::filesystem::is_regular_file(fixture))
    throw Error(ErrorCode::MissingFixture, "case-study fixture not found: '" + fixture.string() + "'");
  std::ifstream in(fixture);
  if (!in) throw Error(ErrorCode::MissingFixture, "cannot open fixture '" + fixture.string() + "'");
  return reproduce_case_study(read_confusion_json(in), fixture.string());
}

CaseStudyReport reproduce_case_study(const ConfusionTable2x2& counts, std::string fixture_name) {
  namespace pub = published;
  CaseStudyReport report;
  report.fixture = std::move(fixture_name);
  report.counts = counts;

  auto add = [&](std::string name, double expected, double computed, double tolerance,
                 std::string criterion, bool pass) {
    report.checks.push_back({std::move(name), expected, computed, tolerance, std::move(criterion), pass});
  };

  add("subjects", static_cast<double>(pub::kSubjects), static_cast<double>(counts.n()), 0.0,
      "exact", counts.n() == pub::kSubjects);

  // Kappa and McNemar are undefined for some tampered inputs; such a check
  // fails rather than aborting the report.
  try {
    const auto kappa = cohen_kappa(counts);
    const bool display_equal = format_fixed(kappa.value, 4) == format_fixed(pub::kKappa, 4);
    add("cohen_kappa", pub::kKappa, kappa.value, pub::kKappaTolerance,
        "|computed - expected| <= tolerance and equal at 4 decimals",
        std::abs(kappa.value - pub::kKappa) <= pub::kKappaTolerance && display_equal);
  } catch (const Error& e) {
    add("cohen_kappa", pub::kKappa, std::nan(""), pub::kKappaTolerance, e.what(), false);
  }

  try {
    const auto test = mcnemar(counts, true);
    add("mcnemar_chi_square", pub::kChiSquare, test.chi_square, pub::kChiSquareTolerance,
        "|computed - expected| <= tolerance (continuity corrected)",
        std::abs(test.chi_square - pub::kChiSquare) <= pub::kChiSquareTolerance);
    add("mcnemar_p_value", pub::kPThreshold, test.p_value, 0.0, "computed < expected",
        test.p_value < pub::kPThreshold);
  } catch (const Error& e) {
    add("mcnemar_chi_square", pub::kChiSquare, std::nan(""), pub::kChiSquareTolerance, e.what(), false);
    add("mcnemar_p_value", pub::kPThreshold, std::nan(""), 0.0, e.what(), false);
  }

  const double agreement = percent_agreement(counts);
  add("percent_agreement", pub::kPercentAgreement, agreement, pub::kPercentTolerance,
      "|computed - expected| <= tolerance",
      std::abs(agreement - pub::kPercentAgreement) <= pub::kPercentTolerance);

  report.notes.push_back("discordant pairs: Model 1 True / Model 2 False = " +
                         std::to_string(counts.tf()) + ", Model 1 False / Model 2 True = " +
                         std::to_string(counts.ft()));
  if (counts.ft() > counts.tf()) {
    report.notes.push_back("Model 2 flags " + std::to_string(counts.ft()) +
                           " items that Model 1 does not: Model 2 is the more conservative model");
  } else if (counts.tf() > counts.ft()) {
    report.notes.push_back("Model 1 flags " + std::to_string(counts.tf()) +
                           " items that Model 2 does not: Model 1 is the more conservative model "
                           "(direction reversed relative to the published diagnosis)");
  } else {
    report.notes.push_back("discordant counts are equal: neither model is more conservative");
  }
  report.notes.push_back(
      "Krippendorff's alpha = " + format_fixed(pub::kParticipantAlpha, 2) +
      " for the participant survey (50 subjects, 80 raters) is NOT checked: the raw survey "
      "responses are not published");

  report.overall = !report.checks.empty();
  for (const auto& c : report.checks) report.overall = report.overall && c.pass;
  return report;
}

std::string render(const CaseStudyReport& report, Format f) {
  switch (f) {
    case Format::Json: {
      nlohmann::ordered_json j;
      j["fixture"] = report.fixture;
      j["counts"] = {{"tt", report.counts.tt()},
                     {"tf", report.counts.tf()},
                     {"ft", report.counts.ft()},
                     {"ff", report.counts.ff()}};
      auto checks = nlohmann::ordered_json::array();
      for (const auto& c : report.checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["expected"] = c.expected;
        cj["computed"] = std::isfinite(c.computed) ? nlohmann::ordered_json(c.computed)
                                                   : nlohmann::ordered_json(nullptr);
        cj["tolerance"] = c.tolerance;
        cj["criterion"] = c.criterion;
        cj["pass"] = c.pass;
        checks.push_back(std::move(cj));
      }
      j["checks"] = std::move(checks);
      j["notes"] = report.notes;
      j["overall"] = report.overall ? "PASS" : "FAIL";
      return j.dump(2) + "\n";
    }
    case Format::Csv: {
      std::ostringstream out;
      out << "name,expected,computed,tolerance,pass\n";
      for (const auto& c : report.checks)
        out << c.name << ',' << format_double(c.expected) << ','
            << (std::isfinite(c.computed) ? format_double(c.computed) : "NA") << ','
            << format_double(c.tolerance) << ',' << (c.pass ? "PASS" : "FAIL") << '\n';
      out << "overall,,,," << (report.overall ? "PASS" : "FAIL") << '\n';
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << "Case study reproduction";
      if (!report.fixture.empty()) out << " (" << report.fixture << ")";
      out << "\ncounts: tt=" << report.counts.tt() << " tf=" << report.counts.tf()
          << " ft=" << report.counts.ft() << " ff=" << report.counts.ff() << "\n\n";
      auto cell = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
      };
      out << cell("check", 20) << cell("expected", 12) << cell("computed", 14) << cell("tolerance", 11)
          << "result\n";
      for (const auto& c : report.checks) {
        std::string expected, computed;
        if (c.name == "mcnemar_p_value") {
          expected = "< .001";
          computed = std::isfinite(c.computed) ? format_p_value(c.computed).substr(2) : "n/a";
        } else if (c.name == "subjects") {
          expected = format_fixed(c.expected, 0);
          computed = format_fixed(c.computed, 0);
        } else {
          const int dp = c.name == "mcnemar_chi_square" ? 2 : 4;
          expected = format_fixed(c.expected, dp);
          computed = std::isfinite(c.computed) ? format_fixed(c.computed, dp + 1) : "n/a";
        }
        char tol[32];
        std::snprintf(tol, sizeof(tol), "%g", c.tolerance);
        out << cell(c.name, 20) << cell(expected, 12) << cell(computed, 14) << cell(tol, 11)
            << (c.pass ? "PASS" : "FAIL") << '\n';
      }
      out << '\n';
      for (const auto& n : report.notes) out << "note: " << n << '\n';
      out << "\noverall: " << (report.overall ? "PASS" : "FAIL") << '\n';
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

}  // namespace concordia
