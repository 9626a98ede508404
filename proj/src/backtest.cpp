#include "oilsent/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <unordered_map>

#include "oilsent/csv.hpp"
#include "oilsent/error.hpp"

namespace oilsent {

std::string_view to_string(NeutralPolicy p) {
  switch (p) {
    case NeutralPolicy::Down: return "down";
    case NeutralPolicy::Up: return "up";
    case NeutralPolicy::Exclude: return "exclude";
    case NeutralPolicy::Hold: return "hold";
  }
  return "down";
}

std::string_view to_string(ZeroReturnPolicy p) {
  return p == ZeroReturnPolicy::Down ? "down" : "exclude";
}

std::string_view to_string(DiscretizeMode m) {
  switch (m) {
    case DiscretizeMode::Auto: return "auto";
    case DiscretizeMode::Raw: return "raw";
    case DiscretizeMode::Normalized: return "normalized";
  }
  return "auto";
}

std::optional<int> binary_call(int discrete, NeutralPolicy policy) {
  if (discrete > 0) return kUp;
  if (discrete < 0) return kDown;
  switch (policy) {
    case NeutralPolicy::Down: return kDown;
    case NeutralPolicy::Up: return kUp;
    default: return std::nullopt;
  }
}

ScoreFile read_score_file(std::istream& in) {
  CsvReader reader(in);
  ScoreFile out;
  CsvRow row;
  if (!reader.next(row)) throw ParseError("score file is empty");
  if (row.fields == std::vector<std::string>{"id", "score"})
    out.kind = ScoreFile::Kind::ById;
  else if (row.fields == std::vector<std::string>{"date", "score"})
    out.kind = ScoreFile::Kind::ByDate;
  else
    throw ParseError("score file header must be id,score or date,score", row.line);
  while (reader.next(row)) {
    if (row.fields.size() != 2)
      throw ParseError("expected 2 fields, got " + std::to_string(row.fields.size()), row.line);
    const double v = parse_double(row.fields[1], row.line, "score");
    if (out.kind == ScoreFile::Kind::ById) {
      if (row.fields[0].empty()) throw ParseError("empty id", row.line);
      out.by_id.emplace_back(row.fields[0], v);
    } else {
      try {
        out.by_date.emplace_back(parse_iso_date(row.fields[0]), v);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), row.line);
      }
    }
  }
  return out;
}

ScoreFile load_score_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open score file '" + path.string() + "'");
  return read_score_file(in);
}

void write_score_file(std::ostream& out, const ScoreFile& scores) {
  if (scores.kind == ScoreFile::Kind::ById) {
    write_csv_row(out, {"id", "score"});
    for (const auto& [id, v] : scores.by_id) write_csv_row(out, {id, format_double(v)});
  } else {
    write_csv_row(out, {"date", "score"});
    for (const auto& [d, v] : scores.by_date) write_csv_row(out, {format_date(d), format_double(v)});
  }
}

SignalBuild signal_from_scores(const ScoreFile& scores, const AlignedCorpus& corpus,
                               const SignalOptions& options) {
  SignalBuild build;
  std::vector<ScoredHeadline> joined;
  if (scores.kind == ScoreFile::Kind::ById) {
    std::unordered_map<std::string, Date> day_of;
    for (const auto& [day, hs] : corpus.headlines_by_day)
      for (const auto& h : hs) day_of.emplace(h.id, day);
    for (const auto& [id, v] : scores.by_id) {
      auto it = day_of.find(id);
      if (it == day_of.end())
        build.warnings.push_back("score for unknown headline '" + id + "'");
      else
        joined.push_back({id, it->second, v});
    }
  } else {
    std::map<Date, std::size_t> seen;
    for (const auto& [d, v] : scores.by_date) {
      if (!corpus.prices_by_day.contains(d)) {
        build.warnings.push_back("score on " + format_date(d) + " is not a trading day in range");
        continue;
      }
      if (seen[d]++) throw ValidationError("duplicate score date " + format_date(d));
      joined.push_back({format_date(d), d, v});
    }
  }
  if (joined.empty()) throw EmptyInputError("no scores join the corpus");

  auto categorical = [](double v) { return v == -1.0 || v == 0.0 || v == 1.0; };
  build.normalized =
      options.mode == DiscretizeMode::Normalized ||
      (options.mode == DiscretizeMode::Auto &&
       !std::all_of(joined.begin(), joined.end(), [&](const auto& s) { return categorical(s.value); }));

  const ScoreSeries daily = aggregate_daily(joined, options.aggregation);
  std::vector<double> values;
  std::size_t offset = 0;
  ScoreSeries z;
  if (build.normalized) {
    if (daily.size() < options.window)
      throw EmptyInputError("only " + std::to_string(daily.size()) + " scored days for a window of " +
                            std::to_string(options.window));
    z = znorm(daily, options.window);
    offset = options.window - 1;
    for (const auto& p : z) values.push_back(p.value);
  } else {
    for (const auto& p : daily) values.push_back(p.value);
  }
  const auto discrete = discretize(values, options.bands);
  for (std::size_t i = 0; i < values.size(); ++i) {
    DailySignal s;
    s.date = daily[i + offset].date;
    s.raw = daily[i + offset].value;
    s.normalized = values[i];
    s.degenerate = build.normalized && z[i].degenerate;
    s.discrete = discrete[i];
    s.call = binary_call(s.discrete, options.neutral);
    build.signals.push_back(s);
  }
  return build;
}

std::vector<AlignedSample> align_next_day(std::span<const DailySignal> signals,
                                          std::span<const ReturnPoint> rets,
                                          ZeroReturnPolicy zero) {
  std::vector<AlignedSample> out;
  if (signals.empty()) return out;
  std::map<Date, const ReturnPoint*> by_prev;
  for (const auto& r : rets) by_prev.emplace(r.prev_date, &r);
  for (const auto& s : signals) {
    auto it = by_prev.find(s.date);
    if (it == by_prev.end()) continue;
    const ReturnPoint& r = *it->second;
    AlignedSample a{s.date, s, r.date, r.value, std::nullopt};
    if (r.value > 0)
      a.realized = kUp;
    else if (r.value < 0 || zero == ZeroReturnPolicy::Down)
      a.realized = kDown;
    out.push_back(std::move(a));
  }
  if (out.empty()) throw EmptyInputError("no signal day has a next-day return");
  return out;
}

BacktestResult evaluate(std::string classifier, std::span<const DailySignal> signals,
                        std::span<const ReturnPoint> rets, const EvalOptions& options) {
  BacktestResult r;
  r.classifier = std::move(classifier);
  const auto samples = align_next_day(signals, rets, options.zero_return);
  if (samples.empty()) throw EmptyInputError("no aligned samples");
  std::vector<int> truth, pred;
  for (const auto& s : samples) {
    if (!s.signal.call) {
      ++r.excluded_neutral;
      continue;
    }
    if (!s.realized) {
      ++r.excluded_zero_return;
      continue;
    }
    truth.push_back(*s.realized);
    pred.push_back(*s.signal.call);
  }
  if (truth.empty()) throw EmptyInputError("every aligned sample was excluded");
  const std::vector<int> classes{kDown, kUp};
  const std::vector<std::string> names{"Price down", "Price up"};
  r.confusion = confusion(truth, pred, classes, names);
  r.report = report(r.confusion);
  r.correct = r.confusion.diagonal();
  r.samples = truth.size();
  r.cumulative = cumulative_series(signals);
  return r;
}

std::vector<DailySignal> random_baseline(std::span<const Date> dates, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<DailySignal> out;
  out.reserve(dates.size());
  for (const auto& d : dates) {
    const int c = (rng() >> 63) ? kUp : kDown;
    out.push_back({d, double(c), double(c), false, c, c});
  }
  return out;
}

std::vector<DailySignal> oracle(std::span<const ReturnPoint> rets, bool inverted) {
  std::vector<DailySignal> out;
  out.reserve(rets.size());
  for (const auto& r : rets) {
    int c = r.value > 0 ? kUp : kDown;
    if (inverted) c = -c;
    out.push_back({r.prev_date, double(c), double(c), false, c, c});
  }
  return out;
}

ChiSquareResult compare_models(const BacktestResult& a, const BacktestResult& b,
                               Correction correction, Sidedness sidedness) {
  if (a.samples != b.samples)
    throw PreconditionError("models were evaluated on different sample counts (" +
                            std::to_string(a.samples) + " vs " + std::to_string(b.samples) + ")");
  return chi_square_2x2(a.correct, a.samples, b.correct, b.samples, correction, sidedness);
}

ScoreSeries cumulative_series(std::span<const DailySignal> signals) {
  ScoreSeries out;
  out.reserve(signals.size());
  double sum = 0;
  for (const auto& s : signals) {
    sum += s.call.value_or(0);
    out.push_back({s.date, sum, false});
  }
  return out;
}

void write_signals_csv(std::ostream& out, std::span<const DailySignal> signals) {
  write_csv_row(out, {"date", "raw", "normalized", "degenerate", "discrete", "call"});
  for (const auto& s : signals)
    write_csv_row(out, {format_date(s.date), format_double(s.raw), format_double(s.normalized),
                        s.degenerate ? "1" : "0", std::to_string(s.discrete),
                        s.call ? (*s.call > 0 ? "up" : "down") : "none"});
}

void write_cumulative_csv(std::ostream& out, std::span<const SeriesPoint> series) {
  write_csv_row(out, {"date", "cumsum"});
  for (const auto& p : series) write_csv_row(out, {format_date(p.date), format_double(p.value)});
}

}  // namespace oilsent
