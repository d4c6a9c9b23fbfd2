#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qtrack/errors.hpp"

namespace qtrack {

/// Raw price history: T+1 dated rows, N asset columns, optional index column
/// split out of the asset block.
struct PricePanel {
    std::vector<std::string> dates;      // ascending, unique
    std::vector<std::string> asset_ids;  // unique tickers, index excluded
    Eigen::MatrixXd prices;              // (T+1) x N, strictly positive
    Eigen::VectorXd index_prices;        // size T+1 when present, else 0

    bool has_index() const { return index_prices.size() > 0; }
    Eigen::Index rows() const { return prices.rows(); }
    Eigen::Index n_assets() const { return prices.cols(); }
};

/// Per-period simple returns for N assets plus the target index series.
struct ReturnsPanel {
    std::vector<std::string> dates;      // length T, label of each period end
    std::vector<std::string> asset_ids;  // length N
    Eigen::MatrixXd returns;             // T x N, every entry > -1
    Eigen::VectorXd index_returns;       // length T (zeros when no index)
    bool has_index = false;

    Eigen::Index n_periods() const { return returns.rows(); }
    Eigen::Index n_assets() const { return returns.cols(); }

    /// Per-period portfolio return series w^T r_t.
    Eigen::VectorXd portfolio_returns(const Eigen::VectorXd& weights) const {
        if (weights.size() != n_assets())
            throw ShapeError("portfolio_returns: weight vector length mismatch");
        return returns * weights;
    }
};

/// Full-sample covariance plus trailing-window rolling covariances.
///
/// rolling[k] covers return rows [k, k+window).  aligned(t) maps period t to
/// the trailing-complete window ending at t; periods before the first
/// complete window reuse rolling[0].
struct CovarianceSet {
    Eigen::MatrixXd full;                 // N x N
    std::vector<Eigen::MatrixXd> rolling; // T - window + 1 matrices
    int window = 0;

    const Eigen::MatrixXd& aligned(Eigen::Index t) const {
        if (rolling.empty()) throw InsufficientDataError("no rolling covariances");
        const Eigen::Index k = t - (window - 1);
        if (k <= 0) return rolling.front();
        if (static_cast<std::size_t>(k) >= rolling.size()) return rolling.back();
        return rolling[static_cast<std::size_t>(k)];
    }
};

/// Parse a wide CSV (`date,<tickers...>[,INDEX]`) into a PricePanel.
/// Rows are sorted ascending by date; malformed cells, non-positive prices
/// and duplicate dates are rejected.
PricePanel load_prices(const std::string& path, const std::string& index_column = "INDEX");

/// Same parser over in-memory CSV text (used by tests and fixtures).
PricePanel parse_prices_csv(const std::string& csv_text, const std::string& index_column,
                            const std::string& origin = "<memory>");

/// Simple-return transform: returns[t][i] = prices[t+1][i] / prices[t][i] - 1.
ReturnsPanel to_returns(const PricePanel& prices);

/// Full-sample and rolling sample covariances (unbiased, window >= 2).
CovarianceSet covariances(const ReturnsPanel& panel, int window);

/// Rolling sample standard deviation of the index return series with the same
/// trailing-complete alignment as CovarianceSet::aligned.
Eigen::VectorXd rolling_index_stdev(const ReturnsPanel& panel, int window);

}  // namespace qtrack
