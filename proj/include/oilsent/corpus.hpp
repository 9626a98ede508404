#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "oilsent/date.hpp"

namespace oilsent {

struct Headline {
  std::string id;
  Date date;
  std::string text;
  std::optional<std::string> source;

  bool operator==(const Headline&) const = default;
};

struct PriceBar {
  Date date;
  double close = 0;  // USD per barrel

  bool operator==(const PriceBar&) const = default;
};

enum class HeadlineFormat { CanonicalCsv, CanonicalJsonl };
enum class PriceFormat { CanonicalCsv, VendorCsv };

struct PriceLoadOptions {
  /// Admit negative closes (the April 2020 WTI print). Zero is always rejected
  /// since returns divide by the prior close.
  bool allow_negative = false;
};

std::vector<Headline> load_headlines(const std::filesystem::path& path, HeadlineFormat format);
std::vector<Headline> read_headlines_csv(std::istream& in);
std::vector<Headline> read_headlines_jsonl(std::istream& in);
void write_headlines_csv(std::ostream& out, std::span<const Headline> headlines);

std::vector<PriceBar> load_prices(const std::filesystem::path& path, PriceFormat format,
                                  PriceLoadOptions options = {});
std::vector<PriceBar> read_prices_csv(std::istream& in, PriceLoadOptions options = {});
std::vector<PriceBar> read_prices_vendor_csv(std::istream& in, PriceLoadOptions options = {});
void write_prices_csv(std::ostream& out, std::span<const PriceBar> prices);

/// What happens to headlines dated on a day without a price.
enum class WeekendPolicy { NextDay, Drop };

struct AlignStats {
  std::size_t headlines_in = 0;
  std::size_t headlines_kept = 0;  // includes shifted
  std::size_t headlines_shifted = 0;
  std::size_t headlines_dropped = 0;
  std::size_t prices_in = 0;
  std::size_t prices_kept = 0;
  std::size_t prices_dropped = 0;
};

struct AlignedCorpus {
  Date start;
  Date end;
  std::vector<Date> trading_days;  // ascending, every one has a price
  std::map<Date, std::vector<Headline>> headlines_by_day;
  std::map<Date, PriceBar> prices_by_day;
  AlignStats stats;

  /// Headlines re-dated to their trading day, in day order.
  std::vector<Headline> headlines() const;
  std::vector<PriceBar> prices() const;
  std::size_t headline_count() const;
};

/// Restricts both datasets to [start, end] and to days that have a price.
/// Throws EmptyInputError when no trading day survives.
AlignedCorpus align(std::span<const Headline> headlines, std::span<const PriceBar> prices,
                    Date start, Date end, WeekendPolicy policy = WeekendPolicy::NextDay);

}  // namespace oilsent
