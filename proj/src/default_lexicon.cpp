#include "oilsent/lexicon.hpp"

namespace oilsent {

std::string_view default_lexicon_text() {
  static constexpr std::string_view text =
#include "default_lexicon.inc"
      ;
  return text;
}

const Lexicon& default_lexicon() {
  static const Lexicon lexicon = parse_lexicon(default_lexicon_text(), "default.lex");
  return lexicon;
}

}  // namespace oilsent
