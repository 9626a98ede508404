#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oilsent/corpus.hpp"
#include "oilsent/metrics.hpp"
#include "oilsent/signals.hpp"

namespace oilsent {

/// How a discrete 0 becomes a binary call. Exclude and Hold both leave the
/// day out of evaluation; in the cumulative series both contribute 0.
enum class NeutralPolicy { Down, Up, Exclude, Hold };
/// How a zero next-day return is classed.
enum class ZeroReturnPolicy { Down, Exclude };
/// Auto normalizes unless every input score is already in {-1, 0, 1}.
enum class DiscretizeMode { Auto, Raw, Normalized };

std::string_view to_string(NeutralPolicy p);
std::string_view to_string(ZeroReturnPolicy p);
std::string_view to_string(DiscretizeMode m);

inline constexpr int kUp = 1;
inline constexpr int kDown = -1;

struct DailySignal {
  Date date;
  double raw = 0;         // aggregated score
  double normalized = 0;  // equals raw when normalization is skipped
  bool degenerate = false;
  int discrete = 0;
  /// kUp / kDown, or nullopt when the neutral policy leaves the day out.
  std::optional<int> call;

  bool operator==(const DailySignal&) const = default;
};

std::optional<int> binary_call(int discrete, NeutralPolicy policy);

/// A classifier's output: per-headline (`id,score`) or per-day (`date,score`).
struct ScoreFile {
  enum class Kind { ById, ByDate };
  Kind kind = Kind::ById;
  std::vector<std::pair<std::string, double>> by_id;
  std::vector<std::pair<Date, double>> by_date;
};

ScoreFile read_score_file(std::istream& in);
ScoreFile load_score_file(const std::filesystem::path& path);
void write_score_file(std::ostream& out, const ScoreFile& scores);

struct SignalOptions {
  std::size_t window = kDefaultWindow;
  Bands bands;
  Aggregation aggregation = Aggregation::Mean;
  DiscretizeMode mode = DiscretizeMode::Auto;
  NeutralPolicy neutral = NeutralPolicy::Down;
};

struct SignalBuild {
  std::vector<DailySignal> signals;
  bool normalized = false;
  std::vector<std::string> warnings;  // unjoinable ids or dates
};

/// One signal per trading day that has a score (and, when normalizing, a
/// full window). Throws EmptyInputError when nothing joins the corpus.
SignalBuild signal_from_scores(const ScoreFile& scores, const AlignedCorpus& corpus,
                               const SignalOptions& options);

struct AlignedSample {
  Date date;
  DailySignal signal;
  Date next_date;
  double next_return = 0;
  /// kUp / kDown, or nullopt for a zero return under ZeroReturnPolicy::Exclude.
  std::optional<int> realized;
};

/// Pairs the signal on day t with the return from t to the next trading day.
/// Empty signals give no samples; non-empty signals with no pair throw.
std::vector<AlignedSample> align_next_day(std::span<const DailySignal> signals,
                                          std::span<const ReturnPoint> rets,
                                          ZeroReturnPolicy zero = ZeroReturnPolicy::Down);

struct EvalOptions {
  ZeroReturnPolicy zero_return = ZeroReturnPolicy::Down;
};

struct BacktestResult {
  std::string classifier;
  ClassificationReport report;
  ConfusionMatrix confusion;  // classes -1 "Price down", +1 "Price up"
  std::size_t correct = 0;
  std::size_t samples = 0;
  std::size_t excluded_neutral = 0;
  std::size_t excluded_zero_return = 0;
  ScoreSeries cumulative;
};

BacktestResult evaluate(std::string classifier, std::span<const DailySignal> signals,
                        std::span<const ReturnPoint> rets, const EvalOptions& options = {});

/// Fair coin per date from mt19937_64(seed).
std::vector<DailySignal> random_baseline(std::span<const Date> dates, std::uint64_t seed);

/// Calls the realized next-day direction (zero returns call down).
std::vector<DailySignal> oracle(std::span<const ReturnPoint> rets, bool inverted = false);

/// Chi-square on the correct counts. Throws PreconditionError when the
/// sample counts differ.
ChiSquareResult compare_models(const BacktestResult& a, const BacktestResult& b,
                               Correction correction = Correction::None,
                               Sidedness sidedness = Sidedness::Two);

/// Running sum of calls, up = +1, down = -1, no call = 0.
ScoreSeries cumulative_series(std::span<const DailySignal> signals);

void write_signals_csv(std::ostream& out, std::span<const DailySignal> signals);
void write_cumulative_csv(std::ostream& out, std::span<const SeriesPoint> series);

}  // namespace oilsent
