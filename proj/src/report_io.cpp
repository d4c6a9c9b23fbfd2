#include "qtrack/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qtrack {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string format_sig(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5g", value);
    return buf;
}

std::string format_cte(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", value);
    return buf;
}

std::string format_percent(double fraction) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
    return buf;
}

namespace {

nlohmann::ordered_json json_number_or_inf(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
}

}  // namespace

nlohmann::ordered_json report_to_json(const TrackingReport& report) {
    nlohmann::ordered_json j;
    j["te"] = report.te;
    j["cte"] = report.cte;
    j["mre"] = report.mre;
    j["mdre"] = report.mdre;
    j["vol_error"] = report.vol_error;
    j["correlation"] = report.correlation;
    j["mdrse"] = report.mdrse;
    j["enhancement_score"] = json_number_or_inf(report.enhancement_score);
    j["success_rate"] = report.success_rate;
    j["relative_error_skips"] = report.relative_error_skips;
    j["sharpe_error_skips"] = report.sharpe_error_skips;
    return j;
}

nlohmann::ordered_json solution_to_json(const Solution& solution,
                                        const std::vector<std::string>& asset_ids,
                                        const TrackingReport* report) {
    nlohmann::ordered_json j;
    j["sample_index"] = solution.sample_index;
    j["seed_used"] = solution.seed_used;
    j["energy"] = solution.energy;
    j["feasible"] = solution.verdict.feasible;
    j["violations"] = solution.verdict.violations;
    nlohmann::ordered_json weights = nlohmann::ordered_json::object();
    for (Eigen::Index i = 0; i < solution.weights.size(); ++i)
        if (solution.weights(i) != 0.0 || solution.selected(i) != 0)
            weights[asset_ids[static_cast<std::size_t>(i)]] = solution.weights(i);
    j["weights"] = weights;
    if (report) j["metrics"] = report_to_json(*report);
    return j;
}

std::string tracking_report_csv(
    const std::vector<std::tuple<int, int, TrackingReport>>& rows) {
    std::ostringstream out;
    out << "C,K,e_cte,mre,mdre,vol_error\n";
    for (const auto& [c, k, report] : rows)
        out << c << ',' << k << ',' << format_cte(report.cte) << ',' << format_sig(report.mre)
            << ',' << format_sig(report.mdre) << ',' << format_sig(report.vol_error) << '\n';
    return out.str();
}

}  // namespace qtrack
