#include "qtrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qtrack {
namespace {

constexpr double kDenomFloor = 1e-12;

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Running cumulative log-return gap series g_t = cumlog(portfolio) - cumlog(index).
Eigen::VectorXd cumulative_log_gap(const Eigen::VectorXd& weights, const ReturnsPanel& panel,
                                   Eigen::VectorXd* index_cumlog_out = nullptr) {
    const Eigen::VectorXd port = panel.portfolio_returns(weights);
    const Eigen::Index t_periods = panel.n_periods();
    Eigen::VectorXd gap(t_periods);
    if (index_cumlog_out) index_cumlog_out->resize(t_periods);
    double cum_port = 0.0, cum_index = 0.0;
    for (Eigen::Index t = 0; t < t_periods; ++t) {
        if (port(t) <= -1.0)
            throw DomainError("cumulative log return undefined: portfolio return <= -100%");
        if (panel.index_returns(t) <= -1.0)
            throw DomainError("cumulative log return undefined: index return <= -100%");
        cum_port += std::log1p(port(t));
        cum_index += std::log1p(panel.index_returns(t));
        gap(t) = cum_port - cum_index;
        if (index_cumlog_out) (*index_cumlog_out)(t) = cum_index;
    }
    return gap;
}

double sample_stdev(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

}  // namespace

double tracking_error(const Eigen::VectorXd& weights, const ReturnsPanel& panel) {
    return (panel.portfolio_returns(weights) - panel.index_returns).squaredNorm();
}

double cumulative_tracking_error(const Eigen::VectorXd& weights, const ReturnsPanel& panel) {
    return cumulative_log_gap(weights, panel).squaredNorm();
}

RelativeErrorSummary relative_error_summary(const Eigen::VectorXd& weights,
                                            const ReturnsPanel& panel) {
    Eigen::VectorXd index_cumlog;
    const Eigen::VectorXd gap = cumulative_log_gap(weights, panel, &index_cumlog);
    std::vector<double> rel;
    RelativeErrorSummary out;
    for (Eigen::Index t = 0; t < gap.size(); ++t) {
        if (std::abs(index_cumlog(t)) < kDenomFloor) {
            ++out.skipped;
            continue;
        }
        rel.push_back(std::abs(gap(t)) / std::abs(index_cumlog(t)));
    }
    if (rel.empty())
        throw UndefinedMetricError("relative_error_summary: index cumulative return is ~0 "
                                   "at every period");
    out.mre = 0.0;
    for (double r : rel) out.mre += r;
    out.mre /= static_cast<double>(rel.size());
    out.mdre = median(rel);
    return out;
}

double vol_error(const Eigen::VectorXd& weights, const ReturnsPanel& panel) {
    if (panel.n_periods() < 2)
        throw InsufficientDataError("vol_error: need at least 2 periods");
    const double index_sd = sample_stdev(panel.index_returns);
    if (index_sd < kDenomFloor)
        throw UndefinedMetricError("vol_error: index volatility is zero");
    return (sample_stdev(panel.portfolio_returns(weights)) - index_sd) / index_sd;
}

double return_correlation(const Eigen::VectorXd& weights, const ReturnsPanel& panel) {
    const Eigen::VectorXd port = panel.portfolio_returns(weights);
    const Eigen::ArrayXd a = port.array() - port.mean();
    const Eigen::ArrayXd b = panel.index_returns.array() - panel.index_returns.mean();
    const double denom = std::sqrt(a.square().sum() * b.square().sum());
    if (denom < kDenomFloor)
        throw UndefinedMetricError("return_correlation: a return series is constant");
    return (a * b).sum() / denom;
}

Eigen::VectorXd sharpe_series(const Eigen::VectorXd& weights, const ReturnsPanel& panel,
                              const CovarianceSet& covset) {
    const Eigen::VectorXd port = panel.portfolio_returns(weights);
    Eigen::VectorXd out(panel.n_periods());
    for (Eigen::Index t = 0; t < panel.n_periods(); ++t) {
        const double var = weights.dot(covset.aligned(t) * weights);
        if (!(var > 0.0))
            throw DegenerateRiskError("sharpe_series: nonpositive portfolio variance at t=" +
                                      std::to_string(t));
        out(t) = port(t) / std::sqrt(var);
    }
    return out;
}

Eigen::VectorXd index_sharpe_series(const ReturnsPanel& panel, int window) {
    const Eigen::VectorXd sd = rolling_index_stdev(panel, window);
    Eigen::VectorXd out(panel.n_periods());
    for (Eigen::Index t = 0; t < panel.n_periods(); ++t) {
        if (!(sd(t) > 0.0))
            throw DegenerateRiskError("index_sharpe_series: zero index volatility at t=" +
                                      std::to_string(t));
        out(t) = panel.index_returns(t) / sd(t);
    }
    return out;
}

MdrseResult mdrse(const Eigen::VectorXd& portfolio_sharpe,
                  const Eigen::VectorXd& index_sharpe) {
    if (portfolio_sharpe.size() != index_sharpe.size())
        throw ShapeError("mdrse: series length mismatch");
    std::vector<double> rel;
    MdrseResult out;
    for (Eigen::Index t = 0; t < index_sharpe.size(); ++t) {
        if (std::abs(index_sharpe(t)) < kDenomFloor) {
            ++out.skipped;
            continue;
        }
        rel.push_back((portfolio_sharpe(t) - index_sharpe(t)) / std::abs(index_sharpe(t)));
    }
    if (rel.empty())
        throw UndefinedMetricError("mdrse: index Sharpe is ~0 at every period");
    out.value = median(rel);
    return out;
}

double enhancement_score(double mdrse_value, double cte) {
    if (cte < 0.0) throw ValidationError("enhancement_score: cte must be >= 0");
    if (cte == 0.0) {
        if (mdrse_value == 0.0) return 0.0;
        return std::copysign(std::numeric_limits<double>::infinity(), mdrse_value);
    }
    return mdrse_value / cte;
}

TrackingReport make_report(const Eigen::VectorXd& weights, const ReturnsPanel& panel,
                           const CovarianceSet& covset) {
    TrackingReport report;
    report.te = tracking_error(weights, panel);
    report.cte = cumulative_tracking_error(weights, panel);
    const RelativeErrorSummary rel = relative_error_summary(weights, panel);
    report.mre = rel.mre;
    report.mdre = rel.mdre;
    report.relative_error_skips = rel.skipped;
    report.vol_error = qtrack::vol_error(weights, panel);
    report.correlation = return_correlation(weights, panel);
    report.sharpe_series = sharpe_series(weights, panel, covset);
    const MdrseResult m = mdrse(report.sharpe_series,
                                index_sharpe_series(panel, covset.window));
    report.mdrse = m.value;
    report.sharpe_error_skips = m.skipped;
    report.enhancement_score = enhancement_score(report.mdrse, report.cte);
    return report;
}

}  // namespace qtrack
