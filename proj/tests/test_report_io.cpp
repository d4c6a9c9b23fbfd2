#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qtrack/report_io.hpp"

using namespace qtrack;

TEST_CASE("formatters match the published table styles") {
    CHECK(format_cte(0.000123456) == "0.00012");
    CHECK(format_cte(0.0) == "0.00000");
    CHECK(format_sig(0.28012345) == "0.28012");
    CHECK(format_sig(1234567.0) == "1.2346e+06");
    CHECK(format_percent(-0.03) == "-3.00%");
    CHECK(format_percent(0.7) == "70.00%");
    CHECK(format_sig(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("atomic_write leaves no temp file behind") {
    const auto dir = std::filesystem::temp_directory_path() / "qtrack_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.txt";
    atomic_write(path, "hello\n");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content == "hello\n");
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("report csv uses the fixed column order") {
    TrackingReport report;
    report.cte = 0.000115;
    report.mre = 0.205;
    report.mdre = 0.071;
    report.vol_error = 0.02;
    const std::string csv = tracking_report_csv({{25, 63, report}});
    CHECK(csv == "C,K,e_cte,mre,mdre,vol_error\n25,63,0.00012,0.205,0.071,0.02\n");
}

TEST_CASE("solution json reports infinity as a string") {
    Solution sol;
    sol.sample_index = 3;
    sol.energy = -0.5;
    sol.verdict.feasible = true;
    sol.weights = Eigen::VectorXd::Zero(2);
    sol.weights(0) = 0.75;
    sol.selected = Eigen::VectorXi::Zero(2);
    sol.selected(0) = 1;
    TrackingReport report;
    report.cte = 0.0;
    report.mdrse = 0.2;
    report.enhancement_score = std::numeric_limits<double>::infinity();
    const auto j = solution_to_json(sol, {"AAA", "BBB"}, &report);
    CHECK(j["metrics"]["enhancement_score"] == "inf");
    CHECK(j["weights"].contains("AAA"));
    CHECK_FALSE(j["weights"].contains("BBB"));
    CHECK(j["feasible"] == true);
}
