#include <gtest/gtest.h>

#include "oilsent/error.hpp"
#include "oilsent/fixtures.hpp"
#include "oilsent/metrics.hpp"

using namespace oilsent;

namespace {

std::vector<int> column(std::string_view name) {
  std::vector<int> out;
  for (const auto& [id, c] : fixtures::simulation_column(name).labels) out.push_back(c);
  return out;
}

ClassificationReport sentiment_report(std::string_view pred) {
  const auto truth = column("true");
  const auto p = column(pred);
  const auto classes = sentiment_classes();
  const auto names = sentiment_names();
  return report(confusion(truth, p, classes, names));
}

}  // namespace

TEST(Confusion, IdentityIsDiagonal) {
  std::vector<int> y{-1, 0, 1, 1, 0, -1, 1};
  const auto classes = sentiment_classes();
  auto m = confusion(y, y, classes);
  EXPECT_EQ(m.diagonal(), y.size());
  EXPECT_EQ(m.total(), y.size());
  EXPECT_EQ(m.names, (std::vector<std::string>{"-1", "0", "1"}));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) {
        EXPECT_EQ(m.counts[i][j], 0u);
      }
    }
}

TEST(Confusion, TrueVersusCb) {
  const auto classes = sentiment_classes();
  auto m = confusion(column("true"), column("cb"), classes);
  EXPECT_EQ(m.diagonal(), 18u);
}

TEST(Confusion, TrueVersusSim1) {
  const auto classes = sentiment_classes();
  const auto names = sentiment_names();
  auto m = confusion(column("true"), column("1"), classes, names);
  // rows/cols: Negative, Neutral, Positive
  EXPECT_EQ(m.counts[2][0], 3u);  // true Positive predicted Negative
  EXPECT_EQ(m.counts[0][2], 3u);  // true Negative predicted Positive
  EXPECT_EQ(m.diagonal(), 12u);
  EXPECT_EQ(m.row_sum(0), 6u);
  EXPECT_EQ(m.col_sum(1), 6u);
}

TEST(Confusion, UnknownLabelNamesIndex) {
  std::vector<int> t{0, 1, 2};
  std::vector<int> p{0, 1, 1};
  const auto classes = sentiment_classes();
  try {
    confusion(t, p, classes);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos) << e.what();
  }
}

TEST(Confusion, LengthMismatch) {
  std::vector<int> t{0, 1};
  std::vector<int> p{0};
  const auto classes = sentiment_classes();
  EXPECT_THROW(confusion(t, p, classes), PreconditionError);
}

TEST(Report, Sim1MacroF1) {
  auto r = sentiment_report("1");
  EXPECT_NEAR(r.macro.f1, 0.67, 0.005);
  EXPECT_NEAR(r.accuracy, 12.0 / 18, 1e-12);
  EXPECT_EQ(r.total, 18u);
}

TEST(Report, Sim9MacroF1) { EXPECT_NEAR(sentiment_report("9").macro.f1, 0.83, 0.01); }

TEST(Report, CbIsPerfect) {
  auto r = sentiment_report("cb");
  EXPECT_DOUBLE_EQ(r.macro.f1, 1.0);
  EXPECT_DOUBLE_EQ(r.weighted.f1, 1.0);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
}

TEST(Report, FinBertMacroF1) { EXPECT_NEAR(sentiment_report("fb").macro.f1, 0.34, 0.01); }

TEST(Report, AllCorrectTwoClass) {
  std::vector<int> y{1, -1, 1, 1, -1};
  std::vector<int> classes{-1, 1};
  auto r = report(confusion(y, y, classes));
  EXPECT_EQ(r.per_class.size(), 2u);
  for (const auto& c : r.per_class) {
    EXPECT_DOUBLE_EQ(c.precision, 1);
    EXPECT_DOUBLE_EQ(c.recall, 1);
    EXPECT_DOUBLE_EQ(c.f1, 1);
  }
  EXPECT_EQ(r.per_class[0].support, 2u);
  EXPECT_EQ(r.per_class[1].support, 3u);
}

TEST(Report, UndefinedCellsAreZeroAndFlagged) {
  std::vector<int> t{1, 1, 1};
  std::vector<int> p{1, 1, -1};
  std::vector<int> classes{-1, 0, 1};
  auto r = report(confusion(t, p, classes));
  const auto& neg = r.per_class[0];
  EXPECT_EQ(neg.precision, 0);
  EXPECT_FALSE(neg.precision_undefined);  // one prediction, zero hits
  EXPECT_TRUE(neg.recall_undefined);      // no negative truths
  const auto& neu = r.per_class[1];
  EXPECT_TRUE(neu.precision_undefined);
  EXPECT_TRUE(neu.recall_undefined);
  EXPECT_TRUE(neu.f1_undefined);
  EXPECT_EQ(neu.f1, 0);
  EXPECT_NEAR(r.per_class[2].precision, 1, 1e-15);
  EXPECT_NEAR(r.per_class[2].recall, 2.0 / 3, 1e-15);
  EXPECT_NEAR(r.per_class[2].f1, 0.8, 1e-15);
  EXPECT_NEAR(r.macro.f1, 0.8 / 3, 1e-15);
  EXPECT_NEAR(r.weighted.f1, 0.8, 1e-15);
}

TEST(Report, EmptyMatrixThrows) {
  std::vector<int> none;
  const auto classes = sentiment_classes();
  EXPECT_THROW(report(confusion(none, none, classes)), EmptyInputError);
}
