#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace oilsent {

/// Exchange-local calendar day. No intra-day time is modelled.
using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`; throws ParseError on malformed or out-of-range input.
Date parse_iso_date(std::string_view text);

/// Parses vendor export dates such as `Apr 01, 2021`.
Date parse_vendor_date(std::string_view text);

std::string format_date(Date d);

/// Accepted range for dataset dates: [1900-01-01, 2100-01-01].
bool in_supported_range(Date d);

Date add_days(Date d, int days);

/// Monday..Friday.
bool is_weekday(Date d);

}  // namespace oilsent
