#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oilsent/corpus.hpp"
#include "oilsent/lexicon.hpp"

namespace oilsent {

struct SilverLabel {
  int cls = 0;  // -1, 0, +1
  std::string topic;
  /// Direction that set the class; None for fixed topics.
  Direction direction = Direction::None;
  std::string rationale;

  bool operator==(const SilverLabel&) const = default;
};

/// Class a directional topic gets for `d`, or nullopt for Direction::None.
/// Fixed topics return their fixed class. Throws SchemaError for a custom
/// directional topic that does not declare `rise=`.
std::optional<int> topic_class(const Topic& topic, Direction d);

/// nullopt means unmatched: no unguarded topic, or the winning directional
/// topic has no direction cue.
std::optional<SilverLabel> label_headline(std::string_view text, const Lexicon& lexicon);

struct SilverEntry {
  Headline headline;
  SilverLabel label;

  bool operator==(const SilverEntry&) const = default;
};

struct ClassCounts {
  std::size_t negative = 0;
  std::size_t neutral = 0;
  std::size_t positive = 0;

  std::size_t total() const { return negative + neutral + positive; }
  void add(int cls) { (cls < 0 ? negative : cls > 0 ? positive : neutral)++; }
  bool operator==(const ClassCounts&) const = default;
};

struct SilverDataset {
  std::vector<SilverEntry> labeled;
  std::vector<Headline> unmatched;
  /// One row per lexicon topic, in lexicon order.
  std::vector<std::pair<std::string, ClassCounts>> histogram;
};

SilverDataset build_silver_dataset(std::span<const Headline> headlines, const Lexicon& lexicon);

struct SplitRatios {
  double train = 0.6;
  double test = 0.2;
  double validation = 0.2;
};

struct DatasetSplit {
  std::vector<SilverEntry> train;
  std::vector<SilverEntry> test;
  std::vector<SilverEntry> validation;
  SplitRatios ratios;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

/// Stratified by class. Each class is shuffled with the seed and cut with
/// cumulative rounding; entries keep dataset order inside every split.
DatasetSplit split_dataset(std::span<const SilverEntry> entries, SplitRatios ratios,
                           std::uint64_t seed);

struct TrainingRow {
  std::string text;
  int label = 0;

  bool operator==(const TrainingRow&) const = default;
};

/// `text,label` with label in {-1,0,1}.
void write_training_csv(std::ostream& out, std::span<const SilverEntry> entries);
void export_training_file(std::span<const SilverEntry> entries, const std::filesystem::path& path);
std::vector<TrainingRow> read_training_csv(std::istream& in);

/// `id,date,text,topic,direction,label`.
void write_silver_csv(std::ostream& out, std::span<const SilverEntry> entries);
std::vector<SilverEntry> read_silver_csv(std::istream& in);

/// `topic,negative,neutral,positive`.
void write_histogram_csv(std::ostream& out,
                         std::span<const std::pair<std::string, ClassCounts>> histogram);
std::vector<std::pair<std::string, ClassCounts>> read_histogram_csv(std::istream& in);

}  // namespace oilsent
