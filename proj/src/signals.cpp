#include "oilsent/signals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "oilsent/csv.hpp"
#include "oilsent/error.hpp"
#include "oilsent/kernels.hpp"

namespace oilsent {

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::Mean: return "mean";
    case Aggregation::Median: return "median";
    case Aggregation::Sum: return "sum";
  }
  return "mean";
}

ScoreSeries aggregate_daily(std::span<const ScoredHeadline> scores, Aggregation method) {
  std::map<Date, std::vector<double>> by_day;
  for (const auto& s : scores) {
    if (!std::isfinite(s.value))
      throw ValidationError("non-finite score for headline '" + s.id + "'");
    by_day[s.date].push_back(s.value);
  }
  ScoreSeries out;
  out.reserve(by_day.size());
  for (auto& [day, v] : by_day) {
    double sum = 0;
    for (double x : v) sum += x;
    double value = sum;
    if (method == Aggregation::Mean) {
      value = sum / static_cast<double>(v.size());
    } else if (method == Aggregation::Median) {
      std::sort(v.begin(), v.end());
      const std::size_t m = v.size() / 2;
      value = v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
    }
    out.push_back({day, value, false});
  }
  return out;
}

void validate_series(std::span<const SeriesPoint> series) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!std::isfinite(series[i].value))
      throw ValidationError("non-finite value on " + format_date(series[i].date));
    if (i && !(series[i - 1].date < series[i].date))
      throw ValidationError("series dates not strictly increasing at " +
                            format_date(series[i].date));
  }
}

ScoreSeries znorm(std::span<const SeriesPoint> series, std::size_t w) {
  if (w < 2) throw PreconditionError("window must be at least 2");
  if (series.size() < w)
    throw PreconditionError("series has " + std::to_string(series.size()) +
                            " observations, window needs " + std::to_string(w));
  validate_series(series);
  std::vector<double> x(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) x[i] = series[i].value;
  const std::size_t n = series.size() - w + 1;
  std::vector<double> z(n);
  std::vector<std::uint8_t> flat(n);
  kernels::active().rolling_zscore(x.data(), x.size(), w, z.data(), flat.data());
  ScoreSeries out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {series[i + w - 1].date, z[i], flat[i] != 0};
  return out;
}

int discretize(double value, Bands bands) {
  if (!std::isfinite(value)) throw ValidationError("cannot discretize a non-finite value");
  return value > bands.theta ? 1 : value < -bands.theta ? -1 : 0;
}

std::vector<int> discretize(std::span<const double> values, Bands bands) {
  if (!std::isfinite(bands.theta) || bands.theta < 0)
    throw PreconditionError("band half-width must be finite and non-negative");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("cannot discretize a non-finite value");
  std::vector<std::int8_t> raw(values.size());
  kernels::active().discretize(values.data(), values.size(), bands.theta, raw.data());
  return {raw.begin(), raw.end()};
}

ReturnSeries returns(std::span<const PriceBar> prices) {
  if (prices.size() < 2) throw PreconditionError("returns need at least two prices");
  std::vector<double> p(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!std::isfinite(prices[i].close))
      throw ValidationError("non-finite close on " + format_date(prices[i].date));
    if (i && !(prices[i - 1].date < prices[i].date))
      throw ValidationError("price dates not strictly increasing at " +
                            format_date(prices[i].date));
    if (i + 1 < prices.size() && prices[i].close == 0)
      throw ValidationError("zero close on " + format_date(prices[i].date) +
                            " makes the next return undefined");
    p[i] = prices[i].close;
  }
  std::vector<double> r(p.size() - 1);
  kernels::active().simple_returns(p.data(), p.size(), r.data());
  ReturnSeries out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = {prices[i + 1].date, prices[i].date, r[i]};
  return out;
}

std::vector<PriceBar> cumulate(const PriceBar& first, std::span<const ReturnPoint> rets) {
  std::vector<PriceBar> out{first};
  out.reserve(rets.size() + 1);
  for (const auto& r : rets) out.push_back({r.date, out.back().close * (1 + r.value)});
  return out;
}

void write_series_csv(std::ostream& out, std::span<const SeriesPoint> series) {
  write_csv_row(out, {"date", "value", "flag"});
  for (const auto& p : series)
    write_csv_row(out, {format_date(p.date), format_double(p.value), p.degenerate ? "1" : "0"});
}

ScoreSeries read_series_csv(std::istream& in) {
  CsvReader reader(in);
  ScoreSeries out;
  CsvRow row;
  if (!reader.next(row)) return out;
  const bool flagged = row.fields == std::vector<std::string>{"date", "value", "flag"};
  if (!flagged && row.fields != std::vector<std::string>{"date", "value"})
    throw ParseError("series header must be date,value[,flag]", row.line);
  const std::size_t width = flagged ? 3 : 2;
  while (reader.next(row)) {
    if (row.fields.size() != width)
      throw ParseError("expected " + std::to_string(width) + " fields", row.line);
    SeriesPoint p;
    try {
      p.date = parse_iso_date(row.fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), row.line);
    }
    p.value = parse_double(row.fields[1], row.line, "value");
    if (flagged) {
      if (row.fields[2] != "0" && row.fields[2] != "1")
        throw ParseError("flag must be 0 or 1", row.line);
      p.degenerate = row.fields[2] == "1";
    }
    out.push_back(p);
  }
  validate_series(out);
  return out;
}

}  // namespace oilsent
