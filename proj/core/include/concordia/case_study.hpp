#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "concordia/annotation.hpp"
#include "concordia/report.hpp"

namespace concordia {

/// Published values of the two-model guardrail comparison.
namespace published {
inline constexpr std::uint64_t kTT = 64, kTF = 23, kFT = 988, kFF = 6720;
inline constexpr std::uint64_t kSubjects = 7795;
inline constexpr double kKappa = 0.0937;
inline constexpr double kKappaTolerance = 5e-4;
inline constexpr double kChiSquare = 919.18;
inline constexpr double kChiSquareTolerance = 0.01;
inline constexpr double kPThreshold = 0.001;
inline constexpr double kPercentAgreement = 0.8703;
inline constexpr double kPercentTolerance = 5e-4;
inline constexpr double kParticipantAlpha = 0.21;
}  // namespace published

struct CaseStudyCheck {
  std::string name;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  std::string criterion;  // how `computed` is compared with `expected`
  bool pass = false;
};

struct CaseStudyReport {
  std::string fixture;
  ConfusionTable2x2 counts{published::kTT, published::kTF, published::kFT, published::kFF};
  std::vector<CaseStudyCheck> checks;
  std::vector<std::string> notes;
  bool overall = false;
};

/// Fixture shipped with the source tree (data/casestudy/table2.json).
std::filesystem::path default_fixture_path();

/// Recompute kappa, McNemar and percent agreement from the confusion counts
/// and compare them with the published values. MissingFixture when the file
/// does not exist.
CaseStudyReport reproduce_case_study(const std::filesystem::path& fixture = default_fixture_path());
CaseStudyReport reproduce_case_study(const ConfusionTable2x2& counts, std::string fixture_name = "");

std::string render(const CaseStudyReport& report, Format f);

}  // namespace concordia
