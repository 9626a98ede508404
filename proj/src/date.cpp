#include "oilsent/date.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "oilsent/error.hpp"

namespace oilsent {
namespace {

using namespace std::chrono;

int parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ParseError("invalid date '" + std::string(whole) + "'");
  int v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("invalid date '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

Date make_checked(int y, int m, int d, std::string_view whole) {
  Date out{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!out.ok()) throw ParseError("invalid date '" + std::string(whole) + "'");
  if (!in_supported_range(out))
    throw ParseError("date out of range '" + std::string(whole) + "'");
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

bool in_supported_range(Date d) {
  static constexpr Date lo{year{1900}, January, day{1}};
  static constexpr Date hi{year{2100}, January, day{1}};
  return d.ok() && d >= lo && d <= hi;
}

Date parse_iso_date(std::string_view text) {
  auto s = trim(text);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw ParseError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  return make_checked(parse_digits(s.substr(0, 4), text), parse_digits(s.substr(5, 2), text),
                      parse_digits(s.substr(8, 2), text), text);
}

Date parse_vendor_date(std::string_view text) {
  static constexpr std::array<std::string_view, 12> names{
      "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
  auto s = trim(text);
  // "Apr 01, 2021"
  auto sp = s.find(' ');
  auto comma = s.find(',');
  if (sp == std::string_view::npos || comma == std::string_view::npos || comma < sp)
    throw ParseError("invalid vendor date '" + std::string(text) + "'");
  std::string mon(s.substr(0, sp));
  if (mon.size() < 3) throw ParseError("invalid vendor date '" + std::string(text) + "'");
  for (auto& c : mon) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  int m = 0;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (mon.substr(0, 3) == names[i]) m = static_cast<int>(i) + 1;
  if (m == 0) throw ParseError("invalid vendor date '" + std::string(text) + "'");
  int d = parse_digits(trim(s.substr(sp + 1, comma - sp - 1)), text);
  int y = parse_digits(trim(s.substr(comma + 1)), text);
  return make_checked(y, m, d, text);
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date add_days(Date d, int days) { return Date{sys_days{d} + std::chrono::days{days}}; }

bool is_weekday(Date d) {
  weekday wd{sys_days{d}};
  return wd != Saturday && wd != Sunday;
}

}  // namespace oilsent
