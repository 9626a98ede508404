#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "oilsent/corpus.hpp"
#include "oilsent/date.hpp"

namespace oilsent {

struct SeriesPoint {
  Date date;
  double value = 0;
  /// Set by znorm when the window had no spread.
  bool degenerate = false;

  bool operator==(const SeriesPoint&) const = default;
};

/// Dates strictly increasing, values finite.
using ScoreSeries = std::vector<SeriesPoint>;

struct ScoredHeadline {
  std::string id;
  Date date;
  double value = 0;
};

enum class Aggregation { Mean, Median, Sum };

std::string_view to_string(Aggregation a);

/// One point per distinct date, ascending. Throws ValidationError on a
/// non-finite value.
ScoreSeries aggregate_daily(std::span<const ScoredHeadline> scores, Aggregation method);

inline constexpr std::size_t kDefaultWindow = 7;

/// Trailing z-score over the last `w` observations including t, population
/// standard deviation. The output starts at the w-th observation. Windows
/// with no spread yield 0 and are flagged.
ScoreSeries znorm(std::span<const SeriesPoint> series, std::size_t w = kDefaultWindow);

struct Bands {
  double theta = 0.1;
};

/// +1 above theta, -1 below -theta, 0 on the closed band [-theta, theta].
int discretize(double value, Bands bands = {});
std::vector<int> discretize(std::span<const double> values, Bands bands = {});

struct ReturnPoint {
  Date date;       // day of the close the return ends on
  Date prev_date;  // day of the prior close
  double value = 0;

  bool operator==(const ReturnPoint&) const = default;
};

using ReturnSeries = std::vector<ReturnPoint>;

/// Simple returns between consecutive bars. Throws on a zero prior close.
ReturnSeries returns(std::span<const PriceBar> prices);

/// Rebuilds closes from the first bar and the returns that follow it.
std::vector<PriceBar> cumulate(const PriceBar& first, std::span<const ReturnPoint> rets);

/// Checks ordering and finiteness; throws ValidationError.
void validate_series(std::span<const SeriesPoint> series);

/// `date,value` plus `flag` (1 for degenerate windows).
void write_series_csv(std::ostream& out, std::span<const SeriesPoint> series);
/// Accepts `date,value` or `date,value,flag`.
ScoreSeries read_series_csv(std::istream& in);

}  // namespace oilsent
