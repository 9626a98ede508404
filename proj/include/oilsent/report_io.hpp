#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "oilsent/backtest.hpp"
#include "oilsent/metrics.hpp"

namespace oilsent {

/// {"Precision": {<class>: v, ..., "Macro": v}, "Recall": {...}, "F1-Score": {...}}
nlohmann::json metrics_table_json(const ClassificationReport& report);
/// Full report: metrics table plus support, weighted averages, accuracy and
/// undefined-cell flags.
nlohmann::json report_json(const ClassificationReport& report);
nlohmann::json confusion_json(const ConfusionMatrix& matrix);
nlohmann::json chi_square_json(const ChiSquareResult& result);
nlohmann::json backtest_json(const BacktestResult& result);

/// True when `table` has exactly the two-class backtest layout:
/// Precision/Recall/F1-Score, each over Price down/Price up/Macro.
bool is_backtest_table(const nlohmann::json& table);

/// Fixed-width rendering of a report, one row per class plus Macro and
/// Weighted rows.
std::string format_report_text(const ClassificationReport& report, std::string_view title);
std::string format_confusion_text(const ConfusionMatrix& matrix);
/// Metric rows by class columns, as in a side-by-side classifier table.
std::string format_backtest_text(const BacktestResult& result);

}  // namespace oilsent
