#include "oilsent/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "oilsent/csv.hpp"
#include "oilsent/error.hpp"

namespace oilsent {
namespace {

constexpr std::array<std::string_view, 4> kHeadlineHeader{"id", "date", "text", "source"};
constexpr std::array<std::string_view, 2> kPriceHeader{"date", "close"};
constexpr std::array<std::string_view, 7> kVendorHeader{"Date", "Price", "Open", "High",
                                                       "Low",  "Vol.",  "Change %"};

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

Headline make_headline(std::string id, std::string_view date, std::string text,
                       std::optional<std::string> source, std::size_t line) {
  if (blank(id)) throw ParseError("empty headline id", line);
  if (blank(text)) throw ParseError("empty headline text", line);
  Date d;
  try {
    d = parse_iso_date(date);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
  return Headline{std::move(id), d, std::move(text), std::move(source)};
}

void check_unique(const std::vector<Headline>& hs) {
  std::unordered_set<std::string> seen;
  for (const auto& h : hs)
    if (!seen.insert(h.id).second) throw ValidationError("duplicate headline id '" + h.id + "'");
}

void check_close(double close, Date d, const PriceLoadOptions& opt, std::size_t line) {
  if (close == 0.0 || (close < 0 && !opt.allow_negative))
    throw ValidationError("non-positive close " + format_double(close) + " on " + format_date(d) +
                          " (line " + std::to_string(line) + ")");
}

void check_increasing(const std::vector<PriceBar>& bars) {
  for (std::size_t i = 1; i < bars.size(); ++i)
    if (!(bars[i - 1].date < bars[i].date))
      throw ValidationError("price dates not strictly increasing at " +
                            format_date(bars[i].date));
}

}  // namespace

std::vector<Headline> read_headlines_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<Headline> out;
  if (!expect_header(reader, kHeadlineHeader, "headlines")) return out;
  CsvRow row;
  while (reader.next(row)) {
    if (row.fields.size() != 4)
      throw ParseError("expected 4 fields, got " + std::to_string(row.fields.size()), row.line);
    std::optional<std::string> source;
    if (!row.fields[3].empty()) source = row.fields[3];
    out.push_back(make_headline(row.fields[0], row.fields[1], row.fields[2], source, row.line));
  }
  check_unique(out);
  return out;
}

std::vector<Headline> read_headlines_jsonl(std::istream& in) {
  std::vector<Headline> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (blank(line)) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), n);
    }
    auto get = [&](const char* key) -> std::string {
      if (!j.is_object() || !j.contains(key) || !j[key].is_string())
        throw ParseError(std::string("missing string field '") + key + "'", n);
      return j[key].get<std::string>();
    };
    std::optional<std::string> source;
    if (j.is_object() && j.contains("source") && j["source"].is_string())
      source = j["source"].get<std::string>();
    out.push_back(make_headline(get("id"), get("date"), get("text"), source, n));
  }
  check_unique(out);
  return out;
}

std::vector<Headline> load_headlines(const std::filesystem::path& path, HeadlineFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open headlines file '" + path.string() + "'");
  return format == HeadlineFormat::CanonicalCsv ? read_headlines_csv(in)
                                                : read_headlines_jsonl(in);
}

void write_headlines_csv(std::ostream& out, std::span<const Headline> headlines) {
  write_csv_row(out, {"id", "date", "text", "source"});
  for (const auto& h : headlines)
    write_csv_row(out, {h.id, format_date(h.date), h.text, h.source.value_or("")});
}

std::vector<PriceBar> read_prices_csv(std::istream& in, PriceLoadOptions options) {
  CsvReader reader(in);
  std::vector<PriceBar> out;
  if (!expect_header(reader, kPriceHeader, "prices")) return out;
  CsvRow row;
  while (reader.next(row)) {
    if (row.fields.size() != 2)
      throw ParseError("expected 2 fields, got " + std::to_string(row.fields.size()), row.line);
    Date d;
    try {
      d = parse_iso_date(row.fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), row.line);
    }
    double close = parse_double(row.fields[1], row.line, "close");
    check_close(close, d, options, row.line);
    out.push_back({d, close});
  }
  check_increasing(out);
  return out;
}

std::vector<PriceBar> read_prices_vendor_csv(std::istream& in, PriceLoadOptions options) {
  CsvReader reader(in);
  std::vector<PriceBar> out;
  if (!expect_header(reader, kVendorHeader, "vendor prices")) return out;
  CsvRow row;
  while (reader.next(row)) {
    if (row.fields.size() < 2) throw ParseError("missing Date/Price fields", row.line);
    Date d;
    try {
      d = parse_vendor_date(row.fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), row.line);
    }
    std::string price = row.fields[1];
    std::erase(price, ',');
    double close = parse_double(price, row.line, "price");
    check_close(close, d, options, row.line);
    out.push_back({d, close});
  }
  // Vendor exports are newest first.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  check_increasing(out);
  return out;
}

std::vector<PriceBar> load_prices(const std::filesystem::path& path, PriceFormat format,
                                  PriceLoadOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open prices file '" + path.string() + "'");
  return format == PriceFormat::CanonicalCsv ? read_prices_csv(in, options)
                                             : read_prices_vendor_csv(in, options);
}

void write_prices_csv(std::ostream& out, std::span<const PriceBar> prices) {
  write_csv_row(out, {"date", "close"});
  for (const auto& p : prices) write_csv_row(out, {format_date(p.date), format_double(p.close)});
}

std::vector<Headline> AlignedCorpus::headlines() const {
  std::vector<Headline> out;
  for (const auto& [day, hs] : headlines_by_day)
    for (const auto& h : hs) {
      out.push_back(h);
      out.back().date = day;
    }
  return out;
}

std::vector<PriceBar> AlignedCorpus::prices() const {
  std::vector<PriceBar> out;
  out.reserve(prices_by_day.size());
  for (const auto& [day, bar] : prices_by_day) out.push_back(bar);
  return out;
}

std::size_t AlignedCorpus::headline_count() const {
  std::size_t n = 0;
  for (const auto& [day, hs] : headlines_by_day) n += hs.size();
  return n;
}

AlignedCorpus align(std::span<const Headline> headlines, std::span<const PriceBar> prices,
                    Date start, Date end, WeekendPolicy policy) {
  if (end < start) throw PreconditionError("align: start after end");

  AlignedCorpus c;
  c.start = start;
  c.end = end;
  c.stats.headlines_in = headlines.size();
  c.stats.prices_in = prices.size();

  for (const auto& p : prices) {
    if (p.date < start || end < p.date) continue;
    if (!c.prices_by_day.emplace(p.date, p).second)
      throw ValidationError("duplicate price date " + format_date(p.date));
  }
  c.stats.prices_kept = c.prices_by_day.size();
  c.stats.prices_dropped = prices.size() - c.stats.prices_kept;
  if (c.prices_by_day.empty())
    throw EmptyInputError("no trading days between " + format_date(start) + " and " +
                          format_date(end));

  for (const auto& [day, bar] : c.prices_by_day) c.trading_days.push_back(day);

  for (const auto& h : headlines) {
    if (h.date < start || end < h.date) {
      ++c.stats.headlines_dropped;
      continue;
    }
    Date day = h.date;
    if (!c.prices_by_day.contains(day)) {
      if (policy == WeekendPolicy::Drop) {
        ++c.stats.headlines_dropped;
        continue;
      }
      auto it = std::upper_bound(c.trading_days.begin(), c.trading_days.end(), day);
      if (it == c.trading_days.end()) {
        ++c.stats.headlines_dropped;
        continue;
      }
      day = *it;
      ++c.stats.headlines_shifted;
    }
    c.headlines_by_day[day].push_back(h);
    ++c.stats.headlines_kept;
  }
  return c;
}

}  // namespace oilsent
