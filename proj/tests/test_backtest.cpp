#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oilsent/backtest.hpp"
#include "oilsent/error.hpp"
#include "synthetic.hpp"

using namespace oilsent;

namespace {

Date day(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

AlignedCorpus price_corpus(const std::vector<PriceBar>& prices) {
  return align({}, prices, prices.front().date, prices.back().date);
}

ScoreFile date_scores(const std::vector<PriceBar>& prices, std::uint64_t seed, double a = 1,
                      double b = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0, 1);
  ScoreFile f;
  f.kind = ScoreFile::Kind::ByDate;
  for (const auto& p : prices) f.by_date.emplace_back(p.date, a * dist(rng) + b);
  return f;
}

DailySignal sig(Date d, int call) { return {d, double(call), double(call), false, call, call}; }

std::string backtest_fingerprint(const ScoreFile& scores, const std::vector<PriceBar>& prices) {
  SignalOptions opts;
  opts.mode = DiscretizeMode::Normalized;
  const auto corpus = price_corpus(prices);
  const auto build = signal_from_scores(scores, corpus, opts);
  std::ostringstream out;
  write_signals_csv(out, build.signals);
  // raw column differs by construction; keep the columns after it
  std::string text;
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) {
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 + 1);
    text += line.substr(0, c1) + line.substr(c2) + "\n";
  }
  const auto r = evaluate("m", build.signals, returns(corpus.prices()));
  text += std::to_string(r.correct) + "/" + std::to_string(r.samples);
  return text;
}

}  // namespace

TEST(BinaryCall, Policies) {
  EXPECT_EQ(binary_call(1, NeutralPolicy::Down), kUp);
  EXPECT_EQ(binary_call(-1, NeutralPolicy::Up), kDown);
  EXPECT_EQ(binary_call(0, NeutralPolicy::Down), kDown);
  EXPECT_EQ(binary_call(0, NeutralPolicy::Up), kUp);
  EXPECT_EQ(binary_call(0, NeutralPolicy::Exclude), std::nullopt);
  EXPECT_EQ(binary_call(0, NeutralPolicy::Hold), std::nullopt);
}

TEST(SignalFromScores, ConstantPositiveScoresAreDegenerate) {
  auto prices = testkit::random_walk_prices(20, 3);
  ScoreFile f;
  f.kind = ScoreFile::Kind::ByDate;
  for (const auto& p : prices) f.by_date.emplace_back(p.date, 0.8);
  SignalOptions opts;
  opts.mode = DiscretizeMode::Normalized;
  auto b = signal_from_scores(f, price_corpus(prices), opts);
  EXPECT_TRUE(b.normalized);
  ASSERT_EQ(b.signals.size(), 14u);
  for (const auto& s : b.signals) {
    EXPECT_TRUE(s.degenerate);
    EXPECT_EQ(s.discrete, 0);
    EXPECT_EQ(s.normalized, 0);
    EXPECT_EQ(s.call, kDown);
  }
}

TEST(SignalFromScores, AutoModeKeepsCategoricalScores) {
  auto prices = testkit::random_walk_prices(5, 3);
  ScoreFile f;
  f.kind = ScoreFile::Kind::ByDate;
  const double v[] = {1, -1, 0, 1, 1};
  for (std::size_t i = 0; i < prices.size(); ++i) f.by_date.emplace_back(prices[i].date, v[i]);
  SignalOptions opts;
  opts.neutral = NeutralPolicy::Exclude;
  auto b = signal_from_scores(f, price_corpus(prices), opts);
  EXPECT_FALSE(b.normalized);
  ASSERT_EQ(b.signals.size(), 5u);
  EXPECT_EQ(b.signals[1].call, kDown);
  EXPECT_EQ(b.signals[2].call, std::nullopt);
}

TEST(SignalFromScores, ByIdJoinsHeadlinesAndWarns) {
  auto prices = testkit::random_walk_prices(3, 3);
  std::vector<Headline> hs{{"a", prices[0].date, "x", {}},
                           {"b", prices[0].date, "y", {}},
                           {"c", prices[2].date, "z", {}}};
  auto corpus = align(hs, prices, prices.front().date, prices.back().date);
  ScoreFile f;
  f.by_id = {{"a", 1}, {"b", 0}, {"c", -1}, {"ghost", 1}};
  SignalOptions opts;
  opts.mode = DiscretizeMode::Raw;
  opts.bands.theta = 0.1;
  auto b = signal_from_scores(f, corpus, opts);
  ASSERT_EQ(b.signals.size(), 2u);
  EXPECT_DOUBLE_EQ(b.signals[0].raw, 0.5);
  EXPECT_EQ(b.signals[0].discrete, 1);
  EXPECT_EQ(b.signals[1].discrete, -1);
  ASSERT_EQ(b.warnings.size(), 1u);
  EXPECT_NE(b.warnings[0].find("ghost"), std::string::npos);
}

TEST(SignalFromScores, NothingJoins) {
  auto prices = testkit::random_walk_prices(3, 3);
  ScoreFile f;
  f.by_id = {{"ghost", 1}};
  EXPECT_THROW(signal_from_scores(f, price_corpus(prices), {}), EmptyInputError);
}

TEST(ScoreFileIo, RoundTrip) {
  auto prices = testkit::random_walk_prices(4, 3);
  auto f = date_scores(prices, 1);
  std::stringstream s;
  write_score_file(s, f);
  auto back = read_score_file(s);
  EXPECT_EQ(back.kind, ScoreFile::Kind::ByDate);
  ASSERT_EQ(back.by_date.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(back.by_date[i].first, f.by_date[i].first);
    EXPECT_DOUBLE_EQ(back.by_date[i].second, f.by_date[i].second);
  }
  std::istringstream bad("when,score\n");
  EXPECT_THROW(read_score_file(bad), ParseError);
}

TEST(AlignNextDay, FiveSignalsFourSamples) {
  auto prices = testkit::random_walk_prices(5, 9);
  auto rets = returns(prices);
  std::vector<DailySignal> s;
  for (const auto& p : prices) s.push_back(sig(p.date, kUp));
  auto a = align_next_day(s, rets);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a[i].date, prices[i].date);
    EXPECT_EQ(a[i].next_date, prices[i + 1].date);
    EXPECT_DOUBLE_EQ(a[i].next_return, rets[i].value);
  }
}

TEST(AlignNextDay, FridayPairsWithMonday) {
  std::vector<PriceBar> prices{{day(2021, 1, 7), 50}, {day(2021, 1, 8), 51}, {day(2021, 1, 11), 49}};
  auto rets = returns(prices);
  std::vector<DailySignal> s{sig(day(2021, 1, 8), kDown)};
  auto a = align_next_day(s, rets);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].next_date, day(2021, 1, 11));
  EXPECT_EQ(a[0].realized, kDown);
}

TEST(AlignNextDay, EmptyAndUnpaired) {
  auto prices = testkit::random_walk_prices(3, 9);
  auto rets = returns(prices);
  EXPECT_TRUE(align_next_day({}, rets).empty());
  std::vector<DailySignal> s{sig(prices.back().date, kUp)};
  EXPECT_THROW(align_next_day(s, rets), EmptyInputError);
}

TEST(AlignNextDay, ZeroReturnPolicy) {
  std::vector<PriceBar> prices{{day(2021, 1, 7), 50}, {day(2021, 1, 8), 50}};
  auto rets = returns(prices);
  std::vector<DailySignal> s{sig(day(2021, 1, 7), kUp)};
  EXPECT_EQ(align_next_day(s, rets, ZeroReturnPolicy::Down)[0].realized, kDown);
  EXPECT_EQ(align_next_day(s, rets, ZeroReturnPolicy::Exclude)[0].realized, std::nullopt);
  EvalOptions o{ZeroReturnPolicy::Exclude};
  std::vector<PriceBar> more{{day(2021, 1, 7), 50}, {day(2021, 1, 8), 50}, {day(2021, 1, 11), 52}};
  auto r2 = returns(more);
  std::vector<DailySignal> s2{sig(day(2021, 1, 7), kUp), sig(day(2021, 1, 8), kUp)};
  auto r = evaluate("m", s2, r2, o);
  EXPECT_EQ(r.samples, 1u);
  EXPECT_EQ(r.excluded_zero_return, 1u);
}

TEST(Evaluate, OracleIsPerfectAndInvertedIsWrong) {
  auto prices = testkit::random_walk_prices(500, 21);
  auto rets = returns(prices);
  auto good = evaluate("oracle", oracle(rets), rets);
  EXPECT_DOUBLE_EQ(good.report.accuracy, 1.0);
  EXPECT_EQ(good.samples, rets.size());
  auto bad = evaluate("inverted", oracle(rets, true), rets);
  EXPECT_DOUBLE_EQ(bad.report.accuracy, 0.0);
}

TEST(Evaluate, NeutralExclusionCounted) {
  auto prices = testkit::random_walk_prices(4, 21);
  auto rets = returns(prices);
  std::vector<DailySignal> s{sig(prices[0].date, kUp), sig(prices[1].date, kUp), sig(prices[2].date, kUp)};
  s[1].call.reset();
  s[1].discrete = 0;
  auto r = evaluate("m", s, rets);
  EXPECT_EQ(r.excluded_neutral, 1u);
  EXPECT_EQ(r.samples, 2u);
}

TEST(RandomBaseline, NearHalf) {
  auto prices = testkit::random_walk_prices(10001, 5);
  auto rets = returns(prices);
  std::vector<Date> dates;
  for (const auto& r : rets) dates.push_back(r.prev_date);
  auto coin = random_baseline(dates, 42);
  std::size_t ups = 0;
  for (const auto& s : coin) ups += *s.call == kUp;
  EXPECT_NEAR(double(ups) / coin.size(), 0.5, 0.015);
  auto r = evaluate("random", coin, rets);
  EXPECT_NEAR(r.report.macro.f1, 0.5, 0.03);
  EXPECT_EQ(random_baseline(dates, 42), coin);
  EXPECT_NE(random_baseline(dates, 43), coin);
}

TEST(CompareModels, SampleCounts) {
  auto prices = testkit::random_walk_prices(300, 5);
  auto rets = returns(prices);
  auto a = evaluate("oracle", oracle(rets), rets);
  std::vector<Date> dates;
  for (const auto& r : rets) dates.push_back(r.prev_date);
  auto b = evaluate("random", random_baseline(dates, 1), rets);
  auto c = compare_models(a, b);
  EXPECT_LT(c.p_value, 1e-6);
  const auto all = oracle(rets);
  auto shorter = evaluate("short", std::span(all).first(100), rets);
  EXPECT_THROW(compare_models(a, shorter), PreconditionError);
}

TEST(Cumulative, Examples) {
  std::vector<DailySignal> s{sig(day(2021, 1, 4), kUp), sig(day(2021, 1, 5), kUp),
                             sig(day(2021, 1, 6), kDown)};
  auto c = cumulative_series(s);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].value, 1);
  EXPECT_EQ(c[1].value, 2);
  EXPECT_EQ(c[2].value, 1);

  auto hold = s;
  for (auto& h : hold) h.call.reset();
  for (const auto& p : cumulative_series(hold)) EXPECT_EQ(p.value, 0);

  auto mirror = s;
  for (auto& m : mirror) m.call = -*m.call;
  auto cm = cumulative_series(mirror);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(cm[i].value, -c[i].value);

  std::ostringstream out;
  write_cumulative_csv(out, c);
  EXPECT_EQ(out.str(), "date,cumsum\n2021-01-04,1\n2021-01-05,2\n2021-01-06,1\n");
}

TEST(Invariance, PowerOfTwoScalingIsByteIdentical) {
  auto prices = testkit::random_walk_prices(200, 17);
  EXPECT_EQ(backtest_fingerprint(date_scores(prices, 4), prices),
            backtest_fingerprint(date_scores(prices, 4, 8.0), prices));
}

TEST(Invariance, AffineRescaleKeepsCalls) {
  auto prices = testkit::random_walk_prices(200, 17);
  SignalOptions opts;
  opts.mode = DiscretizeMode::Normalized;
  const auto corpus = price_corpus(prices);
  auto a = signal_from_scores(date_scores(prices, 4), corpus, opts).signals;
  auto b = signal_from_scores(date_scores(prices, 4, 3.0, 5.0), corpus, opts).signals;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].normalized, b[i].normalized, 1e-9);
    EXPECT_EQ(a[i].call, b[i].call) << i;
  }
}

TEST(Invariance, WeekShiftKeepsResults) {
  auto prices = testkit::random_walk_prices(120, 23);
  auto shifted = prices;
  for (auto& p : shifted) p.date = add_days(p.date, 7);
  auto scores = date_scores(prices, 2);
  auto moved = scores;
  for (auto& [d, v] : moved.by_date) d = add_days(d, 7);
  SignalOptions opts;
  opts.mode = DiscretizeMode::Normalized;
  auto sa = signal_from_scores(scores, price_corpus(prices), opts).signals;
  auto sb = signal_from_scores(moved, price_corpus(shifted), opts).signals;
  auto ra = evaluate("a", sa, returns(prices));
  auto rb = evaluate("b", sb, returns(shifted));
  EXPECT_EQ(ra.confusion.counts, rb.confusion.counts);
  EXPECT_EQ(ra.report.macro, rb.report.macro);
}
