#pragma once

#include <optional>
#include <string_view>

namespace oilsent {

/// Three-way sentiment classes: -1 Negative, 0 Neutral, +1 Positive.
inline constexpr int kNegative = -1;
inline constexpr int kNeutral = 0;
inline constexpr int kPositive = 1;

std::string_view class_name(int cls);
/// Accepts Negative/Neutral/Positive in any case, or -1/0/1 (with optional +).
std::optional<int> parse_class(std::string_view text);

}  // namespace oilsent
