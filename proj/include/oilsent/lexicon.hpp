#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oilsent {

enum class Direction { Rise, Fall, Stagnant, None };

std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view s);

// ---------------------------------------------------------------------------
// Tokens and patterns
//
// Text is split into words (ASCII letters), numbers (digits with inner `.` or
// `,` groups) and single-character symbols; whitespace separates tokens and is
// otherwise ignored. A pattern is a token sequence that must match contiguous
// text tokens. Pattern syntax:
//
//   word      whole token (case folded unless the lexicon is case sensitive)
//   word*     token starting with `word`
//   <num>     any number token
//   <percent> number followed by `%`, `percent` or `pct`
//   + - % ... literal symbols
// ---------------------------------------------------------------------------

enum class TokenKind { Word, Number, Symbol };

struct Token {
  TokenKind kind;
  std::string text;  // folded per options
  std::size_t begin;  // byte offsets into the original text
  std::size_t end;
};

std::vector<Token> tokenize(std::string_view text, bool fold_case = true);

class Pattern {
public:
  enum class Kind { Literal, Prefix, Number, Percent };
  struct Element {
    Kind kind;
    TokenKind token_kind = TokenKind::Word;
    std::string text;
  };

  /// Throws SchemaError on malformed placeholders or an empty pattern.
  static Pattern compile(std::string_view source, bool case_sensitive = false);

  const std::string& source() const { return source_; }
  const std::vector<Element>& elements() const { return elements_; }
  bool has_percent() const;

  /// Number of tokens matched starting at `pos`, or 0.
  std::size_t match_at(const std::vector<Token>& tokens, std::size_t pos,
                       bool implicit_prefix) const;

private:
  std::string source_;
  std::vector<Element> elements_;
};

// ---------------------------------------------------------------------------
// Lexicon model
// ---------------------------------------------------------------------------

enum class Boundary {
  Token,   // literal words must equal whole tokens
  Prefix,  // every literal word behaves as `word*`
};

struct MatchOptions {
  bool case_sensitive = false;
  Boundary boundary = Boundary::Token;

  bool operator==(const MatchOptions&) const = default;
};

struct Topic {
  std::string name;
  std::vector<std::string> keywords;
  /// Set for event topics whose class does not depend on a direction cue.
  std::optional<int> fixed_class;
  /// Class for a rise on directional topics outside the built-in ten.
  std::optional<int> rise_class;
  /// Patterns that veto this topic when labelling (match_topics ignores them).
  std::vector<std::string> guards;

  bool directional() const { return !fixed_class.has_value(); }
  bool operator==(const Topic&) const = default;
};

struct DirectionCue {
  Direction direction;
  std::string pattern;

  bool operator==(const DirectionCue&) const = default;
};

struct TopicMatch {
  std::string topic;
  std::string keyword;
  std::size_t begin;
  std::size_t end;

  bool operator==(const TopicMatch&) const = default;
};

/// Immutable once built; compiled patterns are shared read-only.
class Lexicon {
public:
  Lexicon(std::vector<Topic> topics, std::vector<DirectionCue> cues, MatchOptions options = {},
          std::vector<std::string> priority = {});

  const std::vector<Topic>& topics() const { return topics_; }
  const std::vector<DirectionCue>& cues() const { return cues_; }
  const MatchOptions& options() const { return options_; }
  /// Explicit priority list as configured (may be partial).
  const std::vector<std::string>& priority() const { return priority_; }

  const Topic* find(std::string_view name) const;
  /// 0 = highest. Topics missing from the priority list rank after it, in file order.
  std::size_t rank(std::string_view name) const;

  std::vector<TopicMatch> match_topics(std::string_view text) const;
  Direction detect_direction(std::string_view text) const;
  /// The cue that decided detect_direction, if any.
  std::optional<DirectionCue> matching_cue(std::string_view text) const;
  /// True when one of the topic's guard patterns occurs in `text`.
  bool guarded(const Topic& topic, std::string_view text) const;

  bool operator==(const Lexicon& other) const {
    return topics_ == other.topics_ && cues_ == other.cues_ && options_ == other.options_ &&
           priority_ == other.priority_;
  }

private:
  struct CompiledTopic {
    std::vector<Pattern> keywords;
    std::vector<Pattern> guards;
  };
  struct CompiledCue {
    Direction direction;
    Pattern pattern;
  };

  bool any_match(const std::vector<Token>& tokens, const Pattern& p) const;

  std::vector<Topic> topics_;
  std::vector<DirectionCue> cues_;
  MatchOptions options_;
  std::vector<std::string> priority_;
  std::vector<CompiledTopic> compiled_topics_;
  std::vector<CompiledCue> ordered_cues_;  // signed-percent cues first
  std::vector<std::size_t> rank_;
};

/// The shipped lexicon covering the ten supply/demand topics.
const Lexicon& default_lexicon();
std::string_view default_lexicon_text();

Lexicon parse_lexicon(std::istream& in, std::string_view source_name = "<lexicon>");
Lexicon parse_lexicon(std::string_view text, std::string_view source_name = "<lexicon>");
Lexicon load_lexicon(const std::filesystem::path& path);
std::string serialize_lexicon(const Lexicon& lexicon);
void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);

inline std::vector<TopicMatch> match_topics(std::string_view text, const Lexicon& lexicon) {
  return lexicon.match_topics(text);
}
inline Direction detect_direction(std::string_view text, const Lexicon& lexicon) {
  return lexicon.detect_direction(text);
}

}  // namespace oilsent
