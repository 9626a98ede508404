#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oilsent/corpus.hpp"

// Bundled copies of the reference datasets: the 18-headline test set, the
// 48-headline labeled training set, the per-simulation label table and the
// nine prompt templates.
namespace oilsent::fixtures {

struct LabeledText {
  std::string id;
  int label = 0;
  std::string text;

  bool operator==(const LabeledText&) const = default;
};

/// One column of the simulation label table ("true", "1".."9", "fb", "cb").
struct LabelColumn {
  std::string name;
  std::vector<std::pair<std::string, int>> labels;  // headline id -> class, in file order

  bool operator==(const LabelColumn&) const = default;
};

std::string_view gold_test_csv();
std::string_view gold_train_csv();
std::string_view simulation_labels_csv();
/// Template text for simulation 1..9. Throws PreconditionError otherwise.
std::string_view prompt_template(int sim);

/// Test headlines dated on consecutive weekdays from 2021-01-04.
std::vector<Headline> gold_test_set();
std::vector<LabeledText> gold_training_set();
std::vector<LabelColumn> simulation_labels();
/// Throws ValidationError for an unknown column.
LabelColumn simulation_column(std::string_view name);

/// Reads `id,label,text`.
std::vector<LabeledText> read_labeled_texts(std::istream& in);
/// Reads `sim,headline_id,label`; columns keep first-appearance order.
std::vector<LabelColumn> read_label_table(std::istream& in);

}  // namespace oilsent::fixtures
