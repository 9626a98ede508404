#include "oilsent/labels.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace oilsent {

std::string_view class_name(int cls) {
  return cls < 0 ? "Negative" : cls > 0 ? "Positive" : "Neutral";
}

std::optional<int> parse_class(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "negative" || s == "-1") return kNegative;
  if (s == "neutral" || s == "0") return kNeutral;
  if (s == "positive" || s == "1" || s == "+1") return kPositive;
  return std::nullopt;
}

}  // namespace oilsent
