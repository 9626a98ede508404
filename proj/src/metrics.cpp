#include "oilsent/metrics.hpp"

#include <algorithm>

#include "oilsent/error.hpp"

namespace oilsent {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts)
    for (auto c : row) n += c;
  return n;
}

std::size_t ConfusionMatrix::row_sum(std::size_t i) const {
  std::size_t n = 0;
  for (auto c : counts[i]) n += c;
  return n;
}

std::size_t ConfusionMatrix::col_sum(std::size_t j) const {
  std::size_t n = 0;
  for (const auto& row : counts) n += row[j];
  return n;
}

std::size_t ConfusionMatrix::diagonal() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) n += counts[i][i];
  return n;
}

std::vector<int> sentiment_classes() { return {-1, 0, 1}; }
std::vector<std::string> sentiment_names() { return {"Negative", "Neutral", "Positive"}; }

ConfusionMatrix confusion(std::span<const int> truths, std::span<const int> predictions,
                          std::span<const int> classes, std::span<const std::string> names) {
  if (truths.size() != predictions.size())
    throw PreconditionError("truths and predictions differ in length (" +
                            std::to_string(truths.size()) + " vs " +
                            std::to_string(predictions.size()) + ")");
  if (!names.empty() && names.size() != classes.size())
    throw PreconditionError("one name per class required");
  ConfusionMatrix m;
  m.classes.assign(classes.begin(), classes.end());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (std::count(classes.begin(), classes.end(), classes[i]) > 1)
      throw PreconditionError("duplicate class " + std::to_string(classes[i]));
    m.names.push_back(names.empty() ? std::to_string(classes[i]) : names[i]);
  }
  m.counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  auto index = [&](int label, std::size_t at, const char* what) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end())
      throw ValidationError(std::string("unknown ") + what + " label " + std::to_string(label) +
                            " at index " + std::to_string(at));
    return static_cast<std::size_t>(it - classes.begin());
  };
  for (std::size_t k = 0; k < truths.size(); ++k)
    ++m.counts[index(truths[k], k, "truth")][index(predictions[k], k, "predicted")];
  return m;
}

ClassificationReport report(const ConfusionMatrix& m) {
  const std::size_t total = m.total();
  if (m.classes.empty() || total == 0) throw EmptyInputError("confusion matrix is empty");
  ClassificationReport r;
  r.total = total;
  const double n = static_cast<double>(total);
  for (std::size_t i = 0; i < m.classes.size(); ++i) {
    ClassMetrics c;
    c.cls = m.classes[i];
    c.name = m.names[i];
    const auto tp = static_cast<double>(m.counts[i][i]);
    const auto predicted = static_cast<double>(m.col_sum(i));
    c.support = m.row_sum(i);
    const auto support = static_cast<double>(c.support);
    if (predicted > 0) c.precision = tp / predicted; else c.precision_undefined = true;
    if (support > 0) c.recall = tp / support; else c.recall_undefined = true;
    if (c.precision + c.recall > 0)
      c.f1 = 2 * c.precision * c.recall / (c.precision + c.recall);
    else
      c.f1_undefined = true;
    const double k = static_cast<double>(m.classes.size());
    r.macro.precision += c.precision / k;
    r.macro.recall += c.recall / k;
    r.macro.f1 += c.f1 / k;
    r.weighted.precision += c.precision * support / n;
    r.weighted.recall += c.recall * support / n;
    r.weighted.f1 += c.f1 * support / n;
    r.per_class.push_back(std::move(c));
  }
  r.accuracy = static_cast<double>(m.diagonal()) / n;
  return r;
}

}  // namespace oilsent
