#include "oilsent/report_io.hpp"

#include <cstdio>
#include <set>

namespace oilsent {
namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace

nlohmann::json metrics_table_json(const ClassificationReport& r) {
  nlohmann::json p, rc, f;
  for (const auto& c : r.per_class) {
    p[c.name] = c.precision;
    rc[c.name] = c.recall;
    f[c.name] = c.f1;
  }
  p["Macro"] = r.macro.precision;
  rc["Macro"] = r.macro.recall;
  f["Macro"] = r.macro.f1;
  return {{"Precision", p}, {"Recall", rc}, {"F1-Score", f}};
}

nlohmann::json report_json(const ClassificationReport& r) {
  nlohmann::json support = nlohmann::json::object();
  nlohmann::json undefined = nlohmann::json::array();
  for (const auto& c : r.per_class) {
    support[c.name] = c.support;
    if (c.precision_undefined) undefined.push_back(c.name + "/precision");
    if (c.recall_undefined) undefined.push_back(c.name + "/recall");
    if (c.f1_undefined) undefined.push_back(c.name + "/f1");
  }
  return {{"table", metrics_table_json(r)},
          {"support", support},
          {"weighted",
           {{"Precision", r.weighted.precision},
            {"Recall", r.weighted.recall},
            {"F1-Score", r.weighted.f1}}},
          {"accuracy", r.accuracy},
          {"total", r.total},
          {"undefined_cells", undefined}};
}

nlohmann::json confusion_json(const ConfusionMatrix& m) {
  return {{"classes", m.classes}, {"names", m.names}, {"counts", m.counts}};
}

nlohmann::json chi_square_json(const ChiSquareResult& c) {
  return {{"statistic", c.statistic},
          {"dof", c.dof},
          {"p_value", c.p_value},
          {"correction", std::string(to_string(c.correction))},
          {"sidedness", std::string(to_string(c.sidedness))}};
}

nlohmann::json backtest_json(const BacktestResult& r) {
  return {{"classifier", r.classifier},
          {"report", report_json(r.report)},
          {"confusion", confusion_json(r.confusion)},
          {"correct", r.correct},
          {"samples", r.samples},
          {"excluded_neutral", r.excluded_neutral},
          {"excluded_zero_return", r.excluded_zero_return}};
}

bool is_backtest_table(const nlohmann::json& t) {
  if (!t.is_object() || t.size() != 3) return false;
  const std::set<std::string> cols{"Price down", "Price up", "Macro"};
  for (const char* metric : {"Precision", "Recall", "F1-Score"}) {
    if (!t.contains(metric)) return false;
    const auto& row = t.at(metric);
    if (!row.is_object() || row.size() != cols.size()) return false;
    for (const auto& c : cols)
      if (!row.contains(c) || !row.at(c).is_number()) return false;
  }
  return true;
}

std::string format_report_text(const ClassificationReport& r, std::string_view title) {
  std::size_t w = 12;
  for (const auto& c : r.per_class) w = std::max(w, c.name.size() + 2);
  std::string out(title);
  out += "\n" + pad("", w, true) + pad("Precision", 11) + pad("Recall", 9) + pad("F1-Score", 10) +
         pad("Support", 9) + "\n";
  for (const auto& c : r.per_class)
    out += pad(c.name, w, true) + pad(fixed(c.precision), 11) + pad(fixed(c.recall), 9) +
           pad(fixed(c.f1), 10) + pad(std::to_string(c.support), 9) + "\n";
  out += pad("Macro", w, true) + pad(fixed(r.macro.precision), 11) + pad(fixed(r.macro.recall), 9) +
         pad(fixed(r.macro.f1), 10) + pad(std::to_string(r.total), 9) + "\n";
  out += pad("Weighted", w, true) + pad(fixed(r.weighted.precision), 11) +
         pad(fixed(r.weighted.recall), 9) + pad(fixed(r.weighted.f1), 10) +
         pad(std::to_string(r.total), 9) + "\n";
  out += pad("Accuracy", w, true) + pad(fixed(r.accuracy), 30) + pad(std::to_string(r.total), 9) +
         "\n";
  return out;
}

std::string format_confusion_text(const ConfusionMatrix& m) {
  std::size_t w = 8;
  for (const auto& n : m.names) w = std::max(w, n.size() + 2);
  std::string out = pad("truth \\ predicted", w + 6, true);
  for (const auto& n : m.names) out += pad(n, w);
  out += "\n";
  for (std::size_t i = 0; i < m.counts.size(); ++i) {
    out += pad(m.names[i], w + 6, true);
    for (auto c : m.counts[i]) out += pad(std::to_string(c), w);
    out += "\n";
  }
  return out;
}

std::string format_backtest_text(const BacktestResult& r) {
  std::string out = "Classifier: " + r.classifier + "\n";
  out += pad("", 12, true) + pad("Price down", 12) + pad("Price up", 12) + pad("Macro", 12) + "\n";
  const auto& pc = r.report.per_class;
  auto row = [&](const char* name, auto get, double macro) {
    out += pad(name, 12, true);
    for (const auto& c : pc) out += pad(fixed(get(c), 2), 12);
    out += pad(fixed(macro, 2), 12) + "\n";
  };
  row("Precision", [](const ClassMetrics& c) { return c.precision; }, r.report.macro.precision);
  row("Recall", [](const ClassMetrics& c) { return c.recall; }, r.report.macro.recall);
  row("F1-Score", [](const ClassMetrics& c) { return c.f1; }, r.report.macro.f1);
  out += "Correct: " + std::to_string(r.correct) + " of " + std::to_string(r.samples) + "\n";
  out += format_confusion_text(r.confusion);
  return out;
}

}  // namespace oilsent
