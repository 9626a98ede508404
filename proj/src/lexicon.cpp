#include "oilsent/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "oilsent/csv.hpp"
#include "oilsent/error.hpp"

namespace oilsent {
namespace {

bool is_alpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

char fold(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = fold(c);
  return out;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

// Shared scanner for text and pattern sources. Returns the end of the token
// starting at `i` and its kind.
std::size_t scan_token(std::string_view s, std::size_t i, TokenKind& kind) {
  auto c = static_cast<unsigned char>(s[i]);
  std::size_t j = i + 1;
  if (is_alpha(c)) {
    kind = TokenKind::Word;
    while (j < s.size() && is_alpha(static_cast<unsigned char>(s[j]))) ++j;
  } else if (is_digit(c)) {
    kind = TokenKind::Number;
    while (j < s.size()) {
      auto d = static_cast<unsigned char>(s[j]);
      if (is_digit(d)) {
        ++j;
      } else if ((d == '.' || d == ',') && j + 1 < s.size() &&
                 is_digit(static_cast<unsigned char>(s[j + 1]))) {
        j += 2;
      } else {
        break;
      }
    }
  } else {
    kind = TokenKind::Symbol;
    if (c >= 0x80) j = std::min(s.size(), i + utf8_length(c));
  }
  return j;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || is_digit(c) || c == '_';
  });
}

}  // namespace

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Rise: return "rise";
    case Direction::Fall: return "fall";
    case Direction::Stagnant: return "stagnant";
    case Direction::None: return "none";
  }
  return "none";
}

std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "rise") return Direction::Rise;
  if (s == "fall") return Direction::Fall;
  if (s == "stagnant") return Direction::Stagnant;
  if (s == "none") return Direction::None;
  return std::nullopt;
}

std::vector<Token> tokenize(std::string_view text, bool fold_case) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    TokenKind kind;
    std::size_t j = scan_token(text, i, kind);
    std::string t(text.substr(i, j - i));
    if (fold_case && kind == TokenKind::Word) t = lower(t);
    out.push_back({kind, std::move(t), i, j});
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------

Pattern Pattern::compile(std::string_view source, bool case_sensitive) {
  Pattern p;
  p.source_ = std::string(trim(source));
  std::string_view s = p.source_;
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_space(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (s[i] == '<') {
      auto close = s.find('>', i);
      if (close == std::string_view::npos)
        throw SchemaError("unterminated placeholder in pattern '" + p.source_ + "'");
      auto name = s.substr(i + 1, close - i - 1);
      if (name == "num") p.elements_.push_back({Kind::Number, TokenKind::Number, {}});
      else if (name == "percent") p.elements_.push_back({Kind::Percent, TokenKind::Number, {}});
      else throw SchemaError("unknown placeholder <" + std::string(name) + "> in pattern '" +
                             p.source_ + "'");
      i = close + 1;
      continue;
    }
    TokenKind kind;
    std::size_t j = scan_token(s, i, kind);
    std::string text(s.substr(i, j - i));
    if (kind == TokenKind::Word && !case_sensitive) text = lower(text);
    if (kind == TokenKind::Word && j < s.size() && s[j] == '*') {
      p.elements_.push_back({Kind::Prefix, kind, std::move(text)});
      j += 1;
    } else {
      p.elements_.push_back({Kind::Literal, kind, std::move(text)});
    }
    i = j;
  }
  if (p.elements_.empty()) throw SchemaError("empty pattern");
  return p;
}

bool Pattern::has_percent() const {
  return std::any_of(elements_.begin(), elements_.end(),
                     [](const Element& e) { return e.kind == Kind::Percent; });
}

std::size_t Pattern::match_at(const std::vector<Token>& tokens, std::size_t pos,
                              bool implicit_prefix) const {
  std::size_t j = pos;
  for (const auto& el : elements_) {
    if (j >= tokens.size()) return 0;
    const Token& t = tokens[j];
    switch (el.kind) {
      case Kind::Literal:
        if (t.kind != el.token_kind) return 0;
        if (t.text != el.text &&
            !(implicit_prefix && t.kind == TokenKind::Word && t.text.starts_with(el.text)))
          return 0;
        ++j;
        break;
      case Kind::Prefix:
        if (t.kind != TokenKind::Word || !t.text.starts_with(el.text)) return 0;
        ++j;
        break;
      case Kind::Number:
        if (t.kind != TokenKind::Number) return 0;
        ++j;
        break;
      case Kind::Percent: {
        if (t.kind != TokenKind::Number || j + 1 >= tokens.size()) return 0;
        const Token& unit = tokens[j + 1];
        std::string u = lower(unit.text);
        if (!(unit.kind == TokenKind::Symbol && u == "%") &&
            !(unit.kind == TokenKind::Word && (u == "percent" || u == "pct")))
          return 0;
        j += 2;
        break;
      }
    }
  }
  return j - pos;
}

// ---------------------------------------------------------------------------

Lexicon::Lexicon(std::vector<Topic> topics, std::vector<DirectionCue> cues, MatchOptions options,
                 std::vector<std::string> priority)
    : topics_(std::move(topics)),
      cues_(std::move(cues)),
      options_(options),
      priority_(std::move(priority)) {
  if (topics_.empty()) throw SchemaError("lexicon has no topics");
  std::set<std::string> names;
  for (const auto& t : topics_) {
    if (!valid_name(t.name)) throw SchemaError("invalid topic name '" + t.name + "'");
    if (!names.insert(t.name).second) throw SchemaError("duplicate topic '" + t.name + "'");
    if (t.keywords.empty()) throw SchemaError("topic '" + t.name + "' has no keywords");
    if (t.fixed_class && (*t.fixed_class < -1 || *t.fixed_class > 1))
      throw SchemaError("topic '" + t.name + "': fixed class must be -1, 0 or +1");
    if (t.rise_class && *t.rise_class != 1 && *t.rise_class != -1)
      throw SchemaError("topic '" + t.name + "': rise class must be -1 or +1");
    if (t.rise_class && t.fixed_class)
      throw SchemaError("topic '" + t.name + "': rise= only applies to directional topics");
  }
  std::set<std::string> seen;
  for (const auto& p : priority_) {
    if (!names.contains(p)) throw SchemaError("priority names unknown topic '" + p + "'");
    if (!seen.insert(p).second) throw SchemaError("priority lists '" + p + "' twice");
  }

  const bool cs = options_.case_sensitive;
  for (const auto& t : topics_) {
    CompiledTopic ct;
    for (const auto& k : t.keywords) ct.keywords.push_back(Pattern::compile(k, cs));
    for (const auto& g : t.guards) ct.guards.push_back(Pattern::compile(g, cs));
    compiled_topics_.push_back(std::move(ct));
  }
  for (const auto& c : cues_) {
    if (c.direction == Direction::None) throw SchemaError("cue direction cannot be 'none'");
    auto p = Pattern::compile(c.pattern, cs);
    if (p.has_percent()) ordered_cues_.push_back({c.direction, std::move(p)});
  }
  for (const auto& c : cues_) {
    auto p = Pattern::compile(c.pattern, cs);
    if (!p.has_percent()) ordered_cues_.push_back({c.direction, std::move(p)});
  }

  rank_.resize(topics_.size());
  std::size_t next = priority_.size();
  for (std::size_t i = 0; i < topics_.size(); ++i) {
    auto it = std::find(priority_.begin(), priority_.end(), topics_[i].name);
    rank_[i] = it != priority_.end() ? static_cast<std::size_t>(it - priority_.begin()) : next++;
  }
}

const Topic* Lexicon::find(std::string_view name) const {
  for (const auto& t : topics_)
    if (t.name == name) return &t;
  return nullptr;
}

std::size_t Lexicon::rank(std::string_view name) const {
  for (std::size_t i = 0; i < topics_.size(); ++i)
    if (topics_[i].name == name) return rank_[i];
  return topics_.size();
}

bool Lexicon::any_match(const std::vector<Token>& tokens, const Pattern& p) const {
  const bool prefix = options_.boundary == Boundary::Prefix;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (p.match_at(tokens, i, prefix)) return true;
  return false;
}

std::vector<TopicMatch> Lexicon::match_topics(std::string_view text) const {
  const auto tokens = tokenize(text, !options_.case_sensitive);
  const bool prefix = options_.boundary == Boundary::Prefix;
  std::vector<TopicMatch> out;
  for (std::size_t t = 0; t < topics_.size(); ++t) {
    const auto& ct = compiled_topics_[t];
    for (const auto& kw : ct.keywords) {
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::size_t n = kw.match_at(tokens, i, prefix);
        if (n) out.push_back({topics_[t].name, kw.source(), tokens[i].begin, tokens[i + n - 1].end});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const TopicMatch& a, const TopicMatch& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
  });
  return out;
}

Direction Lexicon::detect_direction(std::string_view text) const {
  auto cue = matching_cue(text);
  return cue ? cue->direction : Direction::None;
}

std::optional<DirectionCue> Lexicon::matching_cue(std::string_view text) const {
  const auto tokens = tokenize(text, !options_.case_sensitive);
  for (const auto& c : ordered_cues_)
    if (any_match(tokens, c.pattern)) return DirectionCue{c.direction, c.pattern.source()};
  return std::nullopt;
}

bool Lexicon::guarded(const Topic& topic, std::string_view text) const {
  for (std::size_t t = 0; t < topics_.size(); ++t) {
    if (topics_[t].name != topic.name) continue;
    if (compiled_topics_[t].guards.empty()) return false;
    const auto tokens = tokenize(text, !options_.case_sensitive);
    for (const auto& g : compiled_topics_[t].guards)
      if (any_match(tokens, g)) return true;
    return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// File format

namespace {

std::string class_text(int c) { return c > 0 ? "+1" : c < 0 ? "-1" : "0"; }

[[noreturn]] void schema_fail(std::string_view src, std::size_t line, const std::string& msg) {
  throw SchemaError(std::string(src) + ":" + std::to_string(line) + ": " + msg);
}

std::pair<std::string_view, std::string_view> split_word(std::string_view s) {
  s = trim(s);
  auto sp = s.find_first_of(" \t");
  if (sp == std::string_view::npos) return {s, {}};
  return {s.substr(0, sp), trim(s.substr(sp + 1))};
}

}  // namespace

Lexicon parse_lexicon(std::istream& in, std::string_view source_name) {
  std::vector<Topic> topics;
  std::vector<DirectionCue> cues;
  MatchOptions options;
  std::vector<std::string> priority;
  std::vector<std::size_t> topic_lines;

  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto [kind, rest] = split_word(line);

    if (kind == "option") {
      auto [key, value] = split_word(rest);
      if (key == "case_sensitive") {
        if (value == "true") options.case_sensitive = true;
        else if (value == "false") options.case_sensitive = false;
        else schema_fail(source_name, n, "case_sensitive must be true or false");
      } else if (key == "boundary") {
        if (value == "token") options.boundary = Boundary::Token;
        else if (value == "prefix") options.boundary = Boundary::Prefix;
        else schema_fail(source_name, n, "boundary must be token or prefix");
      } else if (key == "priority") {
        priority.clear();
        std::string v(value);
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
          auto t = trim(item);
          if (t.empty()) schema_fail(source_name, n, "empty entry in priority list");
          priority.emplace_back(t);
        }
      } else {
        schema_fail(source_name, n, "unknown option '" + std::string(key) + "'");
      }
    } else if (kind == "topic") {
      auto [name, attrs] = split_word(rest);
      if (!valid_name(name)) schema_fail(source_name, n, "invalid topic name '" + std::string(name) + "'");
      for (const auto& t : topics)
        if (t.name == name) schema_fail(source_name, n, "duplicate topic '" + std::string(name) + "'");
      Topic topic;
      topic.name = std::string(name);
      bool saw_fixed = false;
      while (!attrs.empty()) {
        auto [attr, more] = split_word(attrs);
        attrs = more;
        auto eq = attr.find('=');
        if (eq == std::string_view::npos)
          schema_fail(source_name, n, "malformed topic field '" + std::string(attr) + "'");
        auto key = attr.substr(0, eq);
        auto val = attr.substr(eq + 1);
        if (key == "fixed") {
          saw_fixed = true;
          if (val == "+1") topic.fixed_class = 1;
          else if (val == "-1") topic.fixed_class = -1;
          else if (val == "0") topic.fixed_class = 0;
          else if (val != "none") schema_fail(source_name, n, "fixed must be +1, -1, 0 or none");
        } else if (key == "rise") {
          if (val == "+1") topic.rise_class = 1;
          else if (val == "-1") topic.rise_class = -1;
          else schema_fail(source_name, n, "rise must be +1 or -1");
        } else {
          schema_fail(source_name, n, "unknown topic field '" + std::string(key) + "'");
        }
      }
      if (!saw_fixed) schema_fail(source_name, n, "topic needs fixed=<+1|-1|none>");
      topics.push_back(std::move(topic));
      topic_lines.push_back(n);
    } else if (kind == "kw" || kind == "not") {
      if (topics.empty()) schema_fail(source_name, n, std::string(kind) + " outside a topic");
      if (rest.empty()) schema_fail(source_name, n, "empty pattern");
      try {
        Pattern::compile(rest);
      } catch (const SchemaError& e) {
        schema_fail(source_name, n, e.what());
      }
      (kind == "kw" ? topics.back().keywords : topics.back().guards).emplace_back(rest);
    } else if (kind == "cue") {
      auto [dir, pattern] = split_word(rest);
      auto d = parse_direction(dir);
      if (!d || *d == Direction::None)
        schema_fail(source_name, n, "cue direction must be rise, fall or stagnant");
      if (pattern.empty()) schema_fail(source_name, n, "empty cue pattern");
      try {
        Pattern::compile(pattern);
      } catch (const SchemaError& e) {
        schema_fail(source_name, n, e.what());
      }
      cues.push_back({*d, std::string(pattern)});
    } else {
      schema_fail(source_name, n, "unknown record '" + std::string(kind) + "'");
    }
  }

  for (std::size_t i = 0; i < topics.size(); ++i)
    if (topics[i].keywords.empty())
      schema_fail(source_name, topic_lines[i], "topic '" + topics[i].name + "' has no keywords");
  try {
    return Lexicon(std::move(topics), std::move(cues), options, std::move(priority));
  } catch (const SchemaError& e) {
    throw SchemaError(std::string(source_name) + ": " + e.what());
  }
}

Lexicon parse_lexicon(std::string_view text, std::string_view source_name) {
  std::istringstream in{std::string(text)};
  return parse_lexicon(in, source_name);
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon '" + path.string() + "'");
  return parse_lexicon(in, path.string());
}

std::string serialize_lexicon(const Lexicon& lexicon) {
  std::ostringstream out;
  const auto& o = lexicon.options();
  out << "option case_sensitive " << (o.case_sensitive ? "true" : "false") << '\n';
  out << "option boundary " << (o.boundary == Boundary::Token ? "token" : "prefix") << '\n';
  if (!lexicon.priority().empty()) {
    out << "option priority ";
    for (std::size_t i = 0; i < lexicon.priority().size(); ++i)
      out << (i ? "," : "") << lexicon.priority()[i];
    out << '\n';
  }
  for (const auto& t : lexicon.topics()) {
    out << "\ntopic " << t.name << " fixed=" << (t.fixed_class ? class_text(*t.fixed_class) : "none");
    if (t.rise_class) out << " rise=" << class_text(*t.rise_class);
    out << '\n';
    for (const auto& k : t.keywords) out << "  kw " << k << '\n';
    for (const auto& g : t.guards) out << "  not " << g << '\n';
  }
  if (!lexicon.cues().empty()) out << '\n';
  for (const auto& c : lexicon.cues()) out << "cue " << to_string(c.direction) << ' ' << c.pattern << '\n';
  return out.str();
}

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_lexicon(lexicon));
}

}  // namespace oilsent
