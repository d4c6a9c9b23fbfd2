#pragma once

#include <Eigen/Dense>

#include "qtrack/market_data.hpp"

namespace qtrack {

/// Full metric suite for one portfolio against the target index.
struct TrackingReport {
    double te = 0.0;          // sum of squared per-period return deviations
    double cte = 0.0;         // sum of squared cumulative log-return gaps
    double mre = 0.0;         // mean relative cumulative error
    double mdre = 0.0;        // median relative cumulative error
    double vol_error = 0.0;   // signed stdev gap vs index, as a fraction
    double correlation = 0.0; // Pearson on per-period returns
    Eigen::VectorXd sharpe_series;        // per-period portfolio Sharpe
    double mdrse = 0.0;       // median relative Sharpe error vs index
    double enhancement_score = 0.0;       // mdrse / cte, +-inf when cte = 0
    double success_rate = 0.0;            // filled by the caller from samples
    int relative_error_skips = 0;         // periods dropped for ~0 denominators
    int sharpe_error_skips = 0;
};

/// epsilon_TE = sum_t (w.r_t - ri_t)^2.
double tracking_error(const Eigen::VectorXd& weights, const ReturnsPanel& panel);

/// epsilon_CTE: squared gap of running cumulative log returns, summed over t.
/// Throws DomainError if any period return is <= -1.
double cumulative_tracking_error(const Eigen::VectorXd& weights, const ReturnsPanel& panel);

struct RelativeErrorSummary {
    double mre = 0.0;
    double mdre = 0.0;
    int skipped = 0;  // periods with |index cumulative log return| < 1e-12
};

/// Per-period relative cumulative error |gap_t| / |index cumlog_t|;
/// mean and median over the non-degenerate periods.
RelativeErrorSummary relative_error_summary(const Eigen::VectorXd& weights,
                                            const ReturnsPanel& panel);

/// (stdev(portfolio returns) - stdev(index returns)) / stdev(index returns).
double vol_error(const Eigen::VectorXd& weights, const ReturnsPanel& panel);

/// Pearson correlation of per-period portfolio and index returns.
double return_correlation(const Eigen::VectorXd& weights, const ReturnsPanel& panel);

/// Per-period Sharpe w.r_t / sqrt(w^T Sigma_t w), risk-free rate 0.
Eigen::VectorXd sharpe_series(const Eigen::VectorXd& weights, const ReturnsPanel& panel,
                              const CovarianceSet& covset);

/// Index per-period Sharpe ri_t / rolling stdev, same window alignment.
Eigen::VectorXd index_sharpe_series(const ReturnsPanel& panel, int window);

struct MdrseResult {
    double value = 0.0;
    int skipped = 0;  // periods with |index Sharpe| < 1e-12
};

/// Median over t of (S_p,t - S_i,t) / |S_i,t|, signed.
MdrseResult mdrse(const Eigen::VectorXd& portfolio_sharpe,
                  const Eigen::VectorXd& index_sharpe);

/// mdrse / cte; +-infinity sentinel when cte = 0 (serialized as "inf").
double enhancement_score(double mdrse_value, double cte);

/// Assemble every metric for one portfolio.  success_rate is left at 0 for
/// the caller to fill from its sample set.
TrackingReport make_report(const Eigen::VectorXd& weights, const ReturnsPanel& panel,
                           const CovarianceSet& covset);

}  // namespace qtrack
