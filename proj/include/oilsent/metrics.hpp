#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace oilsent {

struct ConfusionMatrix {
  std::vector<int> classes;
  std::vector<std::string> names;
  /// counts[i][j]: truth classes[i] predicted as classes[j].
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  std::size_t row_sum(std::size_t i) const;
  std::size_t col_sum(std::size_t j) const;
  std::size_t diagonal() const;
  bool operator==(const ConfusionMatrix&) const = default;
};

/// Three-way sentiment labels with names Negative/Neutral/Positive.
std::vector<int> sentiment_classes();
std::vector<std::string> sentiment_names();

/// `names` defaults to the class values as text. Throws ValidationError
/// naming the first index whose label is not in `classes`.
ConfusionMatrix confusion(std::span<const int> truths, std::span<const int> predictions,
                          std::span<const int> classes, std::span<const std::string> names = {});

struct ClassMetrics {
  int cls = 0;
  std::string name;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;
  /// 0/0 cells are reported as 0 and flagged here.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;

  bool operator==(const ClassMetrics&) const = default;
};

struct Averages {
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  bool operator==(const Averages&) const = default;
};

struct ClassificationReport {
  std::vector<ClassMetrics> per_class;
  Averages macro;
  /// Support-weighted means.
  Averages weighted;
  double accuracy = 0;
  std::size_t total = 0;

  bool operator==(const ClassificationReport&) const = default;
};

/// Throws EmptyInputError for a matrix with no classes or no samples.
ClassificationReport report(const ConfusionMatrix& matrix);

enum class Correction { None, Continuity };
enum class Sidedness { Two, One };

std::string_view to_string(Correction c);
std::string_view to_string(Sidedness s);

struct ChiSquareResult {
  double statistic = 0;
  int dof = 1;
  double p_value = 1;
  Correction correction = Correction::None;
  Sidedness sidedness = Sidedness::Two;
};

/// Pearson test on [[correct_a, total_a - correct_a], [correct_b, total_b - correct_b]].
/// The continuity correction moves each cell up to 0.5 towards its expected
/// count. One-sided p tests the alternative that a's rate exceeds b's.
/// Throws PreconditionError on bad counts, ValidationError on a zero marginal.
ChiSquareResult chi_square_2x2(std::size_t correct_a, std::size_t total_a, std::size_t correct_b,
                               std::size_t total_b, Correction correction = Correction::None,
                               Sidedness sidedness = Sidedness::Two);

/// Upper tail of the chi-square distribution, Q(dof/2, x/2).
double chi_square_tail(double x, double dof);

/// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
double gamma_q(double a, double x);

}  // namespace oilsent
