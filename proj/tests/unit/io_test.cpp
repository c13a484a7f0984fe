#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "concordia/io.hpp"
#include "concordia/random.hpp"
#include "concordia/soft_metrics.hpp"
#include "expect_error.hpp"

using namespace concordia;

namespace {

// Random long-format table with rows in shuffled order, so unit and rater
// first-appearance orders are arbitrary.
AnnotationTable random_table(Rng& rng) {
  const std::size_t units = 1 + rng.below(8), raters = 1 + rng.below(6);
  std::vector<Record> rows;
  for (std::size_t u = 0; u < units; ++u)
    for (std::size_t r = 0; r < raters; ++r)
      if (rng.uniform() < 0.6 || rows.empty())
        rows.push_back({"unit " + std::to_string(u), "r\"" + std::to_string(r),
                        std::string(1, static_cast<char>('A' + rng.below(4)))});
  for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
  return parse_long_records(rows);
}

}  // namespace

TEST(SplitCsvLine, QuotedFields) {
  auto f = split_csv_line(R"(a,"b,c","d""e",)");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "d\"e");
  EXPECT_EQ(f[3], "");
}

TEST(SplitCsvLine, UnterminatedQuoteRejected) {
  EXPECT_ERROR_CODE(split_csv_line("\"abc"), ErrorCode::ParseError);
}

TEST(FormatDouble, RoundTripsExactly) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(LongCsv, ReadsWithBomAndCrlf) {
  std::istringstream in("\xEF\xBB\xBFunit_id,rater_id,label\r\nu1,r1, Yes \r\nu1,r2,No\r\n");
  auto t = read_long_csv(in);
  EXPECT_EQ(t.cell_count(), 2u);
  EXPECT_EQ(t.label_set()[1].str(), "Yes");
}

TEST(LongCsv, WrongHeaderRejected) {
  std::istringstream in("unit,rater,label\nu1,r1,a\n");
  EXPECT_ERROR_CODE(read_long_csv(in), ErrorCode::ParseError);
}

TEST(LongCsv, DuplicateCellRejected) {
  std::istringstream in("unit_id,rater_id,label\nu1,r1,a\nu1,r1,b\n");
  EXPECT_ERROR_CODE(read_long_csv(in), ErrorCode::DuplicateCell);
}

TEST(LongCsv, WrongFieldCountReportsLine) {
  std::istringstream in("unit_id,rater_id,label\nu1,r1\n");
  try {
    read_long_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(LongCsv, ParseSerializeParseIsIdentity) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = random_table(rng);
    std::ostringstream out;
    write_long_csv(out, t);
    std::istringstream in(out.str());
    auto back = read_long_csv(in);
    ASSERT_EQ(back, t) << out.str();
  }
}

TEST(WideCsv, EmptyFieldIsMissing) {
  std::istringstream in("unit_id,a,b,c\nq1,Yes,,No\nq2,,Maybe,\n");
  auto t = read_wide_csv(in);
  EXPECT_EQ(t.unit_count(), 2u);
  EXPECT_EQ(t.rater_count(), 3u);
  EXPECT_EQ(t.cell_count(), 3u);
  EXPECT_FALSE(t.at(0, 1).has_value());
}

TEST(WideCsv, ParseSerializeParseIsIdentity) {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = random_table(rng);
    std::ostringstream out;
    write_wide_csv(out, t);
    std::istringstream in(out.str());
    auto back = read_wide_csv(in);
    ASSERT_EQ(back.units().size(), t.units().size());
    // Wide layout keeps raters with no ratings, so compare cell by cell.
    for (std::size_t u = 0; u < t.unit_count(); ++u) {
      EXPECT_EQ(back.units()[u], t.units()[u]);
      for (std::size_t r = 0; r < t.rater_count(); ++r) {
        auto rb = back.rater_index(t.raters()[r]);
        ASSERT_TRUE(rb.has_value());
        auto a = t.at(u, r), b = back.at(u, *rb);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) EXPECT_EQ(t.label_set()[*a], back.label_set()[*b]);
      }
    }
  }
}

TEST(ConfusionJson, ReadsAndWrites) {
  std::istringstream in(R"({"tt":64,"tf":23,"ft":988,"ff":6720})");
  auto c = read_confusion_json(in);
  EXPECT_EQ(c, ConfusionTable2x2(64, 23, 988, 6720));
  std::ostringstream out;
  write_confusion_json(out, c);
  std::istringstream back(out.str());
  EXPECT_EQ(read_confusion_json(back), c);
}

TEST(ConfusionJson, RejectsNegativeFractionalOrMissing) {
  for (const char* text : {R"({"tt":-1,"tf":2,"ft":3,"ff":4})", R"({"tt":1.5,"tf":2,"ft":3,"ff":4})",
                           R"({"tt":1,"tf":2,"ft":3})", "not json"}) {
    std::istringstream in(text);
    EXPECT_ERROR_CODE(read_confusion_json(in), ErrorCode::ParseError);
  }
}

TEST(EntropyCsv, RoundTripsBitExactly) {
  EntropyVector v{{"a", "b,c", "d"}, {0.0, 0.918295834054489, 1.0}, LogBase::Two, true};
  std::ostringstream out;
  write_entropy_csv(out, v);
  EXPECT_EQ(out.str().substr(0, 15), "unit_id,entropy");
  std::istringstream in(out.str());
  auto back = read_entropy_csv(in);
  EXPECT_EQ(back.units, v.units);
  EXPECT_EQ(back.values, v.values);
}

TEST(ScoresCsv, ReadsFirstColumn) {
  std::istringstream in("score,extra\n1.5,x\n2,y\n");
  EXPECT_EQ(read_scores_csv(in), (std::vector<double>{1.5, 2.0}));
}

TEST(ReadFile, MissingFileIsIoError) {
  EXPECT_ERROR_CODE(read_file("/nonexistent/definitely/not/here.csv"), ErrorCode::IoError);
}
