#include "oilsent/silver.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "oilsent/csv.hpp"
#include "oilsent/error.hpp"
#include "oilsent/labels.hpp"

namespace oilsent {
namespace {

// Class on a rise for the built-in flow topics.
std::optional<int> builtin_rise_class(std::string_view name) {
  if (name == "supply_change" || name == "exports_change") return -1;
  if (name == "demand_change" || name == "imports_change" || name == "pricing") return 1;
  return std::nullopt;
}

std::string signed_class(int c) { return c > 0 ? "+1" : c < 0 ? "-1" : "0"; }

constexpr std::array<std::string_view, 2> kTrainingHeader{"text", "label"};
constexpr std::array<std::string_view, 6> kSilverHeader{"id",    "date",      "text",
                                                        "topic", "direction", "label"};
constexpr std::array<std::string_view, 4> kHistogramHeader{"topic", "negative", "neutral",
                                                           "positive"};

int parse_label(const std::string& s, std::size_t line) {
  auto c = parse_class(s);
  if (!c) throw ParseError("bad label '" + s + "'", line);
  return *c;
}

std::size_t parse_count(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("bad count '" + s + "'", line);
  return v;
}

// Fisher-Yates with an explicit draw so results do not depend on the
// standard library's shuffle.
template <class T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::optional<int> topic_class(const Topic& topic, Direction d) {
  if (topic.fixed_class) return topic.fixed_class;
  if (d == Direction::None) return std::nullopt;
  if (d == Direction::Stagnant) return 0;
  auto rise = topic.rise_class ? topic.rise_class : builtin_rise_class(topic.name);
  if (!rise) throw SchemaError("directional topic '" + topic.name + "' needs rise=+1 or rise=-1");
  return d == Direction::Rise ? *rise : -*rise;
}

std::optional<SilverLabel> label_headline(std::string_view text, const Lexicon& lexicon) {
  const Topic* best = nullptr;
  std::string keyword;
  for (const auto& m : lexicon.match_topics(text)) {
    const Topic* t = lexicon.find(m.topic);
    if (best && lexicon.rank(t->name) >= lexicon.rank(best->name)) continue;
    if (lexicon.guarded(*t, text)) continue;
    best = t;
    keyword = m.keyword;
  }
  if (!best) return std::nullopt;

  SilverLabel out;
  out.topic = best->name;
  if (best->fixed_class) {
    out.cls = *best->fixed_class;
    out.rationale = best->name + " '" + keyword + "' fixed " + signed_class(out.cls);
    return out;
  }
  auto cue = lexicon.matching_cue(text);
  if (!cue) return std::nullopt;
  out.direction = cue->direction;
  out.cls = *topic_class(*best, cue->direction);
  out.rationale = best->name + " '" + keyword + "' " + std::string(to_string(cue->direction)) +
                  " '" + cue->pattern + "' -> " + signed_class(out.cls);
  return out;
}

SilverDataset build_silver_dataset(std::span<const Headline> headlines, const Lexicon& lexicon) {
  SilverDataset ds;
  std::map<std::string, ClassCounts, std::less<>> counts;
  for (const auto& h : headlines) {
    if (auto l = label_headline(h.text, lexicon)) {
      counts[l->topic].add(l->cls);
      ds.labeled.push_back({h, std::move(*l)});
    } else {
      ds.unmatched.push_back(h);
    }
  }
  for (const auto& t : lexicon.topics()) ds.histogram.emplace_back(t.name, counts[t.name]);
  return ds;
}

DatasetSplit split_dataset(std::span<const SilverEntry> entries, SplitRatios ratios,
                           std::uint64_t seed) {
  const std::array<double, 3> r{ratios.train, ratios.test, ratios.validation};
  for (double x : r)
    if (!std::isfinite(x) || x < 0) throw PreconditionError("split ratios must be non-negative");
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9)
    throw PreconditionError("split ratios must sum to 1");

  DatasetSplit split;
  split.ratios = ratios;
  split.seed = seed;

  std::array<std::vector<std::size_t>, 3> by_class;
  for (std::size_t i = 0; i < entries.size(); ++i)
    by_class[static_cast<std::size_t>(entries[i].label.cls + 1)].push_back(i);
  const std::size_t parts = static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](double x) { return x > 0; }));

  std::mt19937_64 rng(seed);
  std::array<std::vector<std::size_t>, 3> picked;
  for (int c = -1; c <= 1; ++c) {
    auto& idx = by_class[static_cast<std::size_t>(c + 1)];
    if (idx.empty())
      throw PreconditionError("class " + std::string(class_name(c)) + " has no entries");
    if (idx.size() < parts)
      split.warnings.push_back("class " + std::string(class_name(c)) + " has " +
                               std::to_string(idx.size()) + " entries for " +
                               std::to_string(parts) + " splits; some splits get none");
    seeded_shuffle(idx, rng);
    const double n = static_cast<double>(idx.size());
    const auto cut1 = static_cast<std::size_t>(std::llround(n * r[0]));
    const auto cut2 = std::max(cut1, static_cast<std::size_t>(std::llround(n * (r[0] + r[1]))));
    const auto end2 = std::min(cut2, idx.size());
    picked[0].insert(picked[0].end(), idx.begin(), idx.begin() + static_cast<long>(std::min(cut1, idx.size())));
    picked[1].insert(picked[1].end(), idx.begin() + static_cast<long>(std::min(cut1, idx.size())),
                     idx.begin() + static_cast<long>(end2));
    picked[2].insert(picked[2].end(), idx.begin() + static_cast<long>(end2), idx.end());
  }
  std::array<std::vector<SilverEntry>*, 3> dst{&split.train, &split.test, &split.validation};
  for (std::size_t s = 0; s < 3; ++s) {
    std::sort(picked[s].begin(), picked[s].end());
    for (auto i : picked[s]) dst[s]->push_back(entries[i]);
  }
  return split;
}

void write_training_csv(std::ostream& out, std::span<const SilverEntry> entries) {
  write_csv_row(out, {"text", "label"});
  for (const auto& e : entries) write_csv_row(out, {e.headline.text, std::to_string(e.label.cls)});
}

void export_training_file(std::span<const SilverEntry> entries, const std::filesystem::path& path) {
  std::ostringstream out;
  write_training_csv(out, entries);
  write_file_atomic(path, out.str());
}

std::vector<TrainingRow> read_training_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<TrainingRow> out;
  if (!expect_header(reader, kTrainingHeader, "training file")) return out;
  CsvRow row;
  while (reader.next(row)) {
    if (row.fields.size() != 2)
      throw ParseError("expected 2 fields, got " + std::to_string(row.fields.size()), row.line);
    out.push_back({row.fields[0], parse_label(row.fields[1], row.line)});
  }
  return out;
}

void write_silver_csv(std::ostream& out, std::span<const SilverEntry> entries) {
  write_csv_row(out, {"id", "date", "text", "topic", "direction", "label"});
  for (const auto& e : entries)
    write_csv_row(out, {e.headline.id, format_date(e.headline.date), e.headline.text, e.label.topic,
                        std::string(to_string(e.label.direction)), std::to_string(e.label.cls)});
}

std::vector<SilverEntry> read_silver_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<SilverEntry> out;
  if (!expect_header(reader, kSilverHeader, "silver dataset")) return out;
  CsvRow row;
  while (reader.next(row)) {
    if (row.fields.size() != 6)
      throw ParseError("expected 6 fields, got " + std::to_string(row.fields.size()), row.line);
    SilverEntry e;
    e.headline.id = row.fields[0];
    try {
      e.headline.date = parse_iso_date(row.fields[1]);
    } catch (const ParseError& err) {
      throw ParseError(err.what(), row.line);
    }
    e.headline.text = row.fields[2];
    e.label.topic = row.fields[3];
    auto d = parse_direction(row.fields[4]);
    if (!d) throw ParseError("bad direction '" + row.fields[4] + "'", row.line);
    e.label.direction = *d;
    e.label.cls = parse_label(row.fields[5], row.line);
    out.push_back(std::move(e));
  }
  return out;
}

void write_histogram_csv(std::ostream& out,
                         std::span<const std::pair<std::string, ClassCounts>> histogram) {
  write_csv_row(out, {"topic", "negative", "neutral", "positive"});
  for (const auto& [topic, c] : histogram)
    write_csv_row(out, {topic, std::to_string(c.negative), std::to_string(c.neutral),
                        std::to_string(c.positive)});
}

std::vector<std::pair<std::string, ClassCounts>> read_histogram_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::pair<std::string, ClassCounts>> out;
  if (!expect_header(reader, kHistogramHeader, "histogram")) return out;
  CsvRow row;
  while (reader.next(row)) {
    if (row.fields.size() != 4)
      throw ParseError("expected 4 fields, got " + std::to_string(row.fields.size()), row.line);
    out.emplace_back(row.fields[0],
                     ClassCounts{parse_count(row.fields[1], row.line),
                                 parse_count(row.fields[2], row.line),
                                 parse_count(row.fields[3], row.line)});
  }
  return out;
}

}  // namespace oilsent
