#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oilsent/corpus.hpp"
#include "oilsent/error.hpp"
#include "oilsent/fixtures.hpp"

namespace oilsent {

struct PromptSpec {
  int sim = 1;
  std::string_view template_text;
  bool needs_training = false;
};

inline constexpr std::string_view kTestPlaceholder = "{{unlabeled_test_set}}";
inline constexpr std::string_view kTrainingPlaceholder = "{{labeled_training_set}}";

/// Throws PreconditionError unless 1 <= sim <= 9.
PromptSpec prompt_spec(int sim);

/// "Unlabeled Test Dataset:" followed by "<id>. <text>" lines.
std::string render_test_block(std::span<const Headline> test);
/// "Labeled Training Dataset:" followed by "<id>. <Label>: <text>" lines.
std::string render_training_block(std::span<const fixtures::LabeledText> train);

/// The training set must be given for simulations 6 and 7 and only for them.
std::string build_prompt(int sim, std::span<const Headline> test,
                         std::optional<std::span<const fixtures::LabeledText>> train = std::nullopt);

/// Headline id -> class in {-1, 0, 1}.
using Predictions = std::map<std::string, int>;

enum class ParseMode {
  /// The reply is a single mapping literal, optionally `name = {...}`, with
  /// quoted labels and no trailing comma.
  Strict,
  /// Also accepts surrounding prose or code fences, bare labels, trailing
  /// commas, and `id: label` / `id. label` lines without braces.
  Lax,
};

class ResponseParseError : public ParseError {
public:
  ResponseParseError(const std::string& what, std::vector<std::string> missing,
                     std::vector<std::string> duplicates, std::vector<std::string> unexpected,
                     std::vector<std::string> bad_labels);

  const std::vector<std::string>& missing() const { return missing_; }
  const std::vector<std::string>& duplicates() const { return duplicates_; }
  const std::vector<std::string>& unexpected() const { return unexpected_; }
  const std::vector<std::string>& bad_labels() const { return bad_labels_; }

private:
  std::vector<std::string> missing_, duplicates_, unexpected_, bad_labels_;
};

/// Every expected id must appear exactly once with a recognizable label.
Predictions parse_response(std::string_view text, std::span<const std::string> expected_ids,
                           ParseMode mode = ParseMode::Lax);

/// The canonical reply shape: {"1": "Positive", ...} in the given id order.
std::string format_response(std::span<const std::pair<std::string, int>> labels);

}  // namespace oilsent
