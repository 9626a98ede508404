#include "oilsent/fixtures.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "oilsent/csv.hpp"
#include "oilsent/error.hpp"
#include "oilsent/labels.hpp"

namespace oilsent::fixtures {
namespace {

constexpr std::string_view kTest =
#include "gold_test.inc"
    ;
constexpr std::string_view kTrain =
#include "gold_train.inc"
    ;
constexpr std::string_view kSimulationLabels =
#include "simulation_labels.inc"
    ;
constexpr std::array<std::string_view, 9> kPrompts{
#include "prompt_sim1.inc"
    ,
#include "prompt_sim2.inc"
    ,
#include "prompt_sim3.inc"
    ,
#include "prompt_sim4.inc"
    ,
#include "prompt_sim5.inc"
    ,
#include "prompt_sim6.inc"
    ,
#include "prompt_sim7.inc"
    ,
#include "prompt_sim8.inc"
    ,
#include "prompt_sim9.inc"
};

constexpr std::array<std::string_view, 3> kLabeledHeader{"id", "label", "text"};
constexpr std::array<std::string_view, 3> kTableHeader{"sim", "headline_id", "label"};

int label_at(const std::string& text, std::size_t line) {
  auto c = parse_class(text);
  if (!c) throw ParseError("unknown label '" + text + "'", line);
  return *c;
}

}  // namespace

std::string_view gold_test_csv() { return kTest; }
std::string_view gold_train_csv() { return kTrain; }
std::string_view simulation_labels_csv() { return kSimulationLabels; }

std::string_view prompt_template(int sim) {
  if (sim < 1 || sim > 9)
    throw PreconditionError("simulation id must be 1..9, got " + std::to_string(sim));
  return kPrompts[static_cast<std::size_t>(sim - 1)];
}

std::vector<Headline> gold_test_set() {
  std::istringstream in{std::string(kTest)};
  return read_headlines_csv(in);
}

std::vector<LabeledText> gold_training_set() {
  std::istringstream in{std::string(kTrain)};
  return read_labeled_texts(in);
}

std::vector<LabelColumn> simulation_labels() {
  std::istringstream in{std::string(kSimulationLabels)};
  return read_label_table(in);
}

LabelColumn simulation_column(std::string_view name) {
  for (auto& c : simulation_labels())
    if (c.name == name) return c;
  throw ValidationError("no label column '" + std::string(name) + "'");
}

std::vector<LabeledText> read_labeled_texts(std::istream& in) {
  CsvReader reader(in);
  std::vector<LabeledText> out;
  if (!expect_header(reader, kLabeledHeader, "labeled texts")) return out;
  CsvRow row;
  while (reader.next(row)) {
    if (row.fields.size() != 3)
      throw ParseError("expected 3 fields, got " + std::to_string(row.fields.size()), row.line);
    out.push_back({row.fields[0], label_at(row.fields[1], row.line), row.fields[2]});
  }
  return out;
}

std::vector<LabelColumn> read_label_table(std::istream& in) {
  CsvReader reader(in);
  std::vector<LabelColumn> out;
  if (!expect_header(reader, kTableHeader, "label table")) return out;
  std::set<std::pair<std::string, std::string>> seen;
  CsvRow row;
  while (reader.next(row)) {
    if (row.fields.size() != 3)
      throw ParseError("expected 3 fields, got " + std::to_string(row.fields.size()), row.line);
    const auto& sim = row.fields[0];
    const auto& id = row.fields[1];
    if (!seen.insert({sim, id}).second)
      throw ValidationError("duplicate entry for " + sim + "/" + id + " (line " +
                            std::to_string(row.line) + ")");
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& c) { return c.name == sim; });
    if (it == out.end()) it = out.insert(out.end(), LabelColumn{sim, {}});
    it->labels.emplace_back(id, label_at(row.fields[2], row.line));
  }
  return out;
}

}  // namespace oilsent::fixtures
