#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>

#include "oilsent/error.hpp"
#include "oilsent/fixtures.hpp"
#include "oilsent/lexicon.hpp"
#include "oilsent/silver.hpp"
#include "synthetic.hpp"

using namespace oilsent;

namespace {

std::vector<std::string> topic_names(const std::vector<TopicMatch>& ms) {
  std::vector<std::string> out;
  for (const auto& m : ms)
    if (std::find(out.begin(), out.end(), m.topic) == out.end()) out.push_back(m.topic);
  return out;
}

bool has_cue(const Lexicon& lex, Direction d, const std::string& pattern) {
  for (const auto& c : lex.cues())
    if (c.direction == d && c.pattern == pattern) return true;
  return false;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

const char* kMini =
    "topic supply_change fixed=none\n"
    "  kw output\n"
    "topic accidents fixed=+1\n"
    "  kw blast\n"
    "cue rise rose\n"
    "cue fall fell\n"
    "cue stagnant flat\n";

}  // namespace

TEST(DefaultLexicon, HasTenTopics) {
  const auto& lex = default_lexicon();
  EXPECT_EQ(lex.topics().size(), 10u);
  for (const char* name : {"accidents", "oil_discoveries", "exports_change", "imports_change",
                           "demand_change", "pricing", "supply_change", "pipeline_limitations",
                           "drilling", "spillage"})
    EXPECT_NE(lex.find(name), nullptr) << name;
}

TEST(DefaultLexicon, FixedAndDirectionalTopics) {
  const auto& lex = default_lexicon();
  for (const char* name : {"accidents", "spillage", "pipeline_limitations"})
    EXPECT_EQ(lex.find(name)->fixed_class, 1) << name;
  for (const char* name : {"oil_discoveries", "drilling"})
    EXPECT_EQ(lex.find(name)->fixed_class, -1) << name;
  for (const char* name :
       {"exports_change", "imports_change", "demand_change", "pricing", "supply_change"})
    EXPECT_TRUE(lex.find(name)->directional()) << name;
}

TEST(DefaultLexicon, ContainsCues) {
  const auto& lex = default_lexicon();
  EXPECT_TRUE(has_cue(lex, Direction::Stagnant, "flat"));
  EXPECT_TRUE(has_cue(lex, Direction::Rise, "+<percent>"));
  EXPECT_TRUE(has_cue(lex, Direction::Fall, "-<percent>"));
  EXPECT_TRUE(has_cue(lex, Direction::Rise, "up <percent>"));
  EXPECT_TRUE(has_cue(lex, Direction::Fall, "down <percent>"));
}

TEST(DefaultLexicon, PriorityOrder) {
  const auto& lex = default_lexicon();
  const std::vector<std::string> want{"accidents",      "spillage",       "pipeline_limitations",
                                      "oil_discoveries", "drilling",      "imports_change",
                                      "exports_change",  "demand_change", "supply_change",
                                      "pricing"};
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(lex.rank(want[i]), i);
}

TEST(DefaultLexicon, ShippedFileMatchesBuiltIn) {
  EXPECT_EQ(load_lexicon(std::string(OILSENT_DATA_DIR) + "/default.lex"), default_lexicon());
}

TEST(LexiconFile, SaveLoadRoundTrip) {
  testkit::TempDir dir;
  const auto path = dir.path() / "lex.lex";
  save_lexicon(default_lexicon(), path);
  const auto back = load_lexicon(path);
  EXPECT_EQ(back, default_lexicon());
  for (const auto& h : fixtures::gold_test_set()) {
    EXPECT_EQ(back.match_topics(h.text), default_lexicon().match_topics(h.text));
    EXPECT_EQ(back.detect_direction(h.text), default_lexicon().detect_direction(h.text));
  }
  for (const auto& t : fixtures::gold_training_set())
    EXPECT_EQ(label_headline(t.text, back), label_headline(t.text, default_lexicon()));
}

TEST(LexiconFile, DuplicateTopicIsSchemaError) {
  try {
    parse_lexicon(std::string(kMini) + "topic accidents fixed=+1\n  kw fire\n", "mini.lex");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("mini.lex:8"), std::string::npos) << e.what();
  }
}

TEST(LexiconFile, SchemaErrors) {
  EXPECT_THROW(parse_lexicon("topic a fixed=none\n"), SchemaError);               // no keywords
  EXPECT_THROW(parse_lexicon("topic a fixed=none colour=red\n kw x\n"), SchemaError);
  EXPECT_THROW(parse_lexicon("topic a fixed=2\n kw x\n"), SchemaError);
  EXPECT_THROW(parse_lexicon("kw x\n"), SchemaError);
  EXPECT_THROW(parse_lexicon("frob x\n"), SchemaError);
  EXPECT_THROW(parse_lexicon("topic a fixed=none\n kw x\ncue sideways x\n"), SchemaError);
  EXPECT_THROW(parse_lexicon("topic a fixed=none\n kw <bogus>\n"), SchemaError);
  EXPECT_THROW(parse_lexicon("option priority b\ntopic a fixed=none\n kw x\n"), SchemaError);
  EXPECT_THROW(parse_lexicon("option colour red\ntopic a fixed=none\n kw x\n"), SchemaError);
  EXPECT_THROW(parse_lexicon(""), SchemaError);
}

TEST(LexiconFile, CustomEleventhTopic) {
  std::string text(default_lexicon_text());
  text += "\ntopic sanctions fixed=none rise=+1\n  kw sanctions\n";
  const auto lex = parse_lexicon(text);
  EXPECT_EQ(lex.topics().size(), 11u);
  EXPECT_EQ(lex.rank("sanctions"), 10u);
  auto l = label_headline("US sanctions on Venezuela rise", lex);
  ASSERT_TRUE(l);
  EXPECT_EQ(l->topic, "sanctions");
  EXPECT_EQ(l->cls, 1);
}

TEST(LexiconFile, CustomDirectionalTopicNeedsRiseClass) {
  const auto lex = parse_lexicon("topic tariffs fixed=none\n kw tariffs\ncue rise rise\n");
  EXPECT_THROW(label_headline("Tariffs rise", lex), SchemaError);
}

TEST(MatchTopics, Examples) {
  const auto& lex = default_lexicon();
  EXPECT_EQ(topic_names(match_topics("Turkey finds oil near Syria, Iraq border", lex)),
            std::vector<std::string>{"oil_discoveries"});
  EXPECT_TRUE(match_topics("The weather is sunny", lex).empty());
  EXPECT_EQ(topic_names(match_topics("Basra Oil Exports Unaffected By Iraq Pipeline Fire", lex)),
            (std::vector<std::string>{"exports_change", "pipeline_limitations"}));
}

TEST(MatchTopics, SpansInTextOrder) {
  const std::string text = "Pipeline leak cuts exports";
  const auto ms = default_lexicon().match_topics(text);
  ASSERT_GE(ms.size(), 3u);
  for (std::size_t i = 1; i < ms.size(); ++i) EXPECT_LE(ms[i - 1].begin, ms[i].begin);
  EXPECT_EQ(text.substr(ms[0].begin, ms[0].end - ms[0].begin), "Pipeline");
}

TEST(MatchTopics, TokenBoundaries) {
  const auto& lex = default_lexicon();
  EXPECT_TRUE(lex.match_topics("Surgut output").size() == 1);  // no "surge" topic spill-over
  EXPECT_TRUE(lex.match_topics("Imported goods").size() == 1);
  EXPECT_TRUE(lex.match_topics("reimports").empty());
  auto prefix = parse_lexicon("option boundary prefix\ntopic a fixed=none\n kw import\n");
  EXPECT_EQ(prefix.match_topics("imports surge").size(), 1u);
  auto token = parse_lexicon("topic a fixed=none\n kw import\n");
  EXPECT_TRUE(token.match_topics("imports surge").empty());
}

TEST(MatchTopics, CaseSensitiveOption) {
  auto lex = parse_lexicon("option case_sensitive true\ntopic a fixed=none\n kw OPEC\n");
  EXPECT_EQ(lex.match_topics("OPEC meets").size(), 1u);
  EXPECT_TRUE(lex.match_topics("opec meets").empty());
}

TEST(DetectDirection, Examples) {
  const auto& lex = default_lexicon();
  EXPECT_EQ(detect_direction("China February Crude Imports -16.0% On Year", lex), Direction::Fall);
  EXPECT_EQ(detect_direction("Malaysia Oil Production Steady This Year", lex), Direction::Stagnant);
  EXPECT_EQ(detect_direction("PETROLEOS confirms Gulf of Mexico oil platform accident", lex),
            Direction::None);
}

TEST(DetectDirection, SignedPercentages) {
  const auto& lex = default_lexicon();
  EXPECT_EQ(lex.detect_direction("Imports +98.5% To 57.9M MT"), Direction::Rise);
  EXPECT_EQ(lex.detect_direction("imports up 78.30% in February"), Direction::Rise);
  EXPECT_EQ(lex.detect_direction("imports down 11.0 percent"), Direction::Fall);
  EXPECT_EQ(lex.detect_direction("imports at 12% of total"), Direction::None);
  // Percent cues outrank word cues.
  EXPECT_EQ(lex.detect_direction("Output fell, exports +3%"), Direction::Rise);
}

TEST(DetectDirection, MatchingCueReported) {
  auto cue = default_lexicon().matching_cue("Oil Output Flat In 2005");
  ASSERT_TRUE(cue);
  EXPECT_EQ(cue->pattern, "flat");
  EXPECT_FALSE(default_lexicon().matching_cue("nothing here"));
}

TEST(Matching, CaseInsensitiveByDefault) {
  const auto& lex = default_lexicon();
  std::vector<std::string> texts;
  for (const auto& h : fixtures::gold_test_set()) texts.push_back(h.text);
  for (const auto& t : fixtures::gold_training_set()) texts.push_back(t.text);
  for (const auto& t : texts) {
    EXPECT_EQ(topic_names(lex.match_topics(t)), topic_names(lex.match_topics(upper(t)))) << t;
    EXPECT_EQ(lex.detect_direction(t), lex.detect_direction(upper(t))) << t;
  }
}

TEST(Matching, EveryKeywordTriggersItsTopic) {
  const auto& lex = default_lexicon();
  for (const auto& t : lex.topics())
    for (const auto& k : t.keywords) {
      std::string word = k;
      if (!word.empty() && word.back() == '*') word.back() = 's';
      const auto names = topic_names(lex.match_topics("Acme " + word + " report"));
      EXPECT_NE(std::find(names.begin(), names.end(), t.name), names.end())
          << t.name << " / " << k;
    }
}

TEST(Tokenize, Kinds) {
  const auto toks = tokenize("China’s imports +1,234.5% m/m");
  ASSERT_GE(toks.size(), 6u);
  EXPECT_EQ(toks[0].text, "china");
  EXPECT_EQ(toks[1].kind, TokenKind::Symbol);  // ’ is one symbol
  bool number = false;
  for (const auto& t : toks) number = number || (t.kind == TokenKind::Number && t.text == "1,234.5");
  EXPECT_TRUE(number);
}
