#include "oilsent/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "oilsent/labels.hpp"

namespace oilsent {
namespace {

void replace_once(std::string& s, std::string_view from, std::string_view to) {
  auto pos = s.find(from);
  if (pos == std::string::npos)
    throw Error("prompt template lacks placeholder " + std::string(from));
  s.replace(pos, from.size(), to);
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct Item {
  std::string key;
  std::string value;
};

// Scanner over a `{key: value, ...}` literal.
class MappingScanner {
public:
  MappingScanner(std::string_view s, bool lax) : s_(s), lax_(lax) {}

  std::vector<Item> parse() {
    skip();
    expect('{');
    std::vector<Item> items;
    skip();
    if (peek() == '}') {
      ++pos_;
      return items;
    }
    for (;;) {
      Item it;
      it.key = scalar(false);
      skip();
      expect(':');
      it.value = scalar(true);
      items.push_back(std::move(it));
      skip();
      if (peek() == '}') {
        ++pos_;
        return items;
      }
      expect(',');
      skip();
      if (peek() == '}') {
        if (!lax_) fail("trailing comma");
        ++pos_;
        return items;
      }
    }
  }

  std::size_t pos() const { return pos_; }

private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && space(s_[pos_])) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("malformed mapping: " + msg + " at offset " + std::to_string(pos_));
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string scalar(bool is_value) {
    skip();
    const char q = peek();
    if (q == '"' || q == '\'') {
      ++pos_;
      std::string out;
      while (pos_ < s_.size() && s_[pos_] != q) {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) fail("unterminated string");
      ++pos_;
      return out;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '_' || s_[pos_] == '-' || s_[pos_] == '+'))
      ++pos_;
    if (start == pos_) fail(is_value ? "expected a label" : "expected a key");
    std::string bare(s_.substr(start, pos_ - start));
    const bool numeric =
        std::all_of(bare.begin(), bare.end(), [](unsigned char c) { return std::isdigit(c); });
    if (is_value && !lax_) fail("unquoted label '" + bare + "'");
    if (!is_value && !numeric && !lax_) fail("unquoted key '" + bare + "'");
    return bare;
  }

  std::string_view s_;
  bool lax_;
  std::size_t pos_ = 0;
};

std::vector<Item> parse_strict(std::string_view text) {
  auto b = text.find_first_not_of(" \t\r\n");
  auto e = text.find_last_not_of(" \t\r\n");
  if (b == std::string_view::npos) throw ParseError("empty response");
  std::string_view t = text.substr(b, e - b + 1);
  // Optional `name =` prefix.
  std::size_t i = 0;
  while (i < t.size() && (std::isalnum(static_cast<unsigned char>(t[i])) || t[i] == '_')) ++i;
  std::size_t j = i;
  while (j < t.size() && space(t[j])) ++j;
  if (i > 0 && j < t.size() && t[j] == '=') t = t.substr(j + 1);
  MappingScanner sc(t, false);
  auto items = sc.parse();
  if (t.find_first_not_of(" \t\r\n", sc.pos()) != std::string_view::npos)
    throw ParseError("unexpected text after the mapping");
  return items;
}

std::vector<Item> parse_lines(std::string_view text) {
  std::vector<Item> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    std::size_t i = line.find_first_not_of(" \t\r\"'");
    if (i == std::string::npos) continue;
    std::size_t k = i;
    while (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) ++k;
    if (k == i) continue;
    std::string key = line.substr(i, k - i);
    while (k < line.size() && (line[k] == '"' || line[k] == '\'' || space(line[k]))) ++k;
    if (k >= line.size() || (line[k] != ':' && line[k] != '.' && line[k] != ')' && line[k] != '-'))
      continue;
    ++k;
    std::string value;
    for (; k < line.size(); ++k)
      if (std::isalnum(static_cast<unsigned char>(line[k])) || line[k] == '-' || line[k] == '+')
        value += line[k];
      else if (!value.empty())
        break;
    items.push_back({key, value});
    if (end == text.size()) break;
  }
  if (items.empty()) throw ParseError("no id/label pairs found in response");
  return items;
}

std::vector<Item> parse_lax(std::string_view text) {
  auto open = text.find('{');
  if (open != std::string_view::npos) {
    MappingScanner sc(text.substr(open), true);
    return sc.parse();
  }
  return parse_lines(text);
}

}  // namespace

ResponseParseError::ResponseParseError(const std::string& what, std::vector<std::string> missing,
                                       std::vector<std::string> duplicates,
                                       std::vector<std::string> unexpected,
                                       std::vector<std::string> bad_labels)
    : ParseError(what),
      missing_(std::move(missing)),
      duplicates_(std::move(duplicates)),
      unexpected_(std::move(unexpected)),
      bad_labels_(std::move(bad_labels)) {}

PromptSpec prompt_spec(int sim) {
  return {sim, fixtures::prompt_template(sim), sim == 6 || sim == 7};
}

std::string render_test_block(std::span<const Headline> test) {
  std::string out = "Unlabeled Test Dataset:\n";
  for (const auto& h : test) out += h.id + ". " + h.text + "\n";
  return out;
}

std::string render_training_block(std::span<const fixtures::LabeledText> train) {
  std::string out = "Labeled Training Dataset:\n";
  for (const auto& t : train)
    out += t.id + ". " + std::string(class_name(t.label)) + ": " + t.text + "\n";
  return out;
}

std::string build_prompt(int sim, std::span<const Headline> test,
                         std::optional<std::span<const fixtures::LabeledText>> train) {
  const PromptSpec spec = prompt_spec(sim);
  if (spec.needs_training && !train)
    throw PreconditionError("simulation " + std::to_string(sim) + " needs the training set");
  if (!spec.needs_training && train)
    throw PreconditionError("simulation " + std::to_string(sim) + " takes no training set");
  std::string out(spec.template_text);
  auto test_block = render_test_block(test);
  test_block.pop_back();
  if (train) {
    auto train_block = render_training_block(*train);
    train_block.pop_back();
    replace_once(out, kTrainingPlaceholder, train_block);
  }
  replace_once(out, kTestPlaceholder, test_block);
  return out;
}

Predictions parse_response(std::string_view text, std::span<const std::string> expected_ids,
                           ParseMode mode) {
  const auto items = mode == ParseMode::Strict ? parse_strict(text) : parse_lax(text);
  const std::set<std::string> expected(expected_ids.begin(), expected_ids.end());
  Predictions out;
  std::vector<std::string> duplicates, unexpected, bad_labels, missing;
  for (const auto& it : items) {
    if (!expected.contains(it.key)) {
      unexpected.push_back(it.key);
      continue;
    }
    auto cls = parse_class(it.value);
    if (!cls || it.value == "0" || it.value == "1" || it.value == "-1" || it.value == "+1") {
      // Only the three label words count as labels here.
      bad_labels.push_back(it.key + "=" + it.value);
      continue;
    }
    if (!out.emplace(it.key, *cls).second) duplicates.push_back(it.key);
  }
  for (const auto& id : expected_ids)
    if (!out.contains(id) &&
        std::none_of(bad_labels.begin(), bad_labels.end(),
                     [&](const std::string& b) { return b.starts_with(id + "="); }))
      missing.push_back(id);
  if (missing.empty() && duplicates.empty() && unexpected.empty() && bad_labels.empty())
    return out;
  std::string msg = "response does not cover the test set:";
  if (!missing.empty()) msg += " missing ids [" + join(missing) + "]";
  if (!duplicates.empty()) msg += " duplicate ids [" + join(duplicates) + "]";
  if (!unexpected.empty()) msg += " unexpected ids [" + join(unexpected) + "]";
  if (!bad_labels.empty()) msg += " unrecognized labels [" + join(bad_labels) + "]";
  throw ResponseParseError(msg, missing, duplicates, unexpected, bad_labels);
}

std::string format_response(std::span<const std::pair<std::string, int>> labels) {
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + labels[i].first + "\": \"" + std::string(class_name(labels[i].second)) + "\"";
  }
  return out + "}";
}

}  // namespace oilsent
