#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtrack/metrics.hpp"
#include "qtrack/solver.hpp"

#include "json.hpp"

namespace qtrack {

/// Write-temp-then-rename so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// 5 significant digits (the reporting default).
std::string format_sig(double value);

/// 5 decimal places (epsilon_CTE column style, e.g. "0.00012").
std::string format_cte(double value);

/// Percent with two decimals and a trailing %, e.g. "-3.00%".
std::string format_percent(double fraction);

/// One JSON object per solution: assignment-derived fields plus the metric
/// suite when available.  Infinite scores serialize as the string "inf".
nlohmann::ordered_json solution_to_json(const Solution& solution,
                                        const std::vector<std::string>& asset_ids,
                                        const TrackingReport* report);

nlohmann::ordered_json report_to_json(const TrackingReport& report);

/// `report.csv` row block: header `C,K,e_cte,mre,mdre,vol_error` and one row
/// per entry, mirroring the best-portfolio table layout.
std::string tracking_report_csv(
    const std::vector<std::tuple<int, int, TrackingReport>>& rows);

}  // namespace qtrack
