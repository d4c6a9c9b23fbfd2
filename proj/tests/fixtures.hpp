#pragma once

#include <random>
#include <vector>

#include "qtrack/encoding.hpp"
#include "qtrack/market_data.hpp"
#include "qtrack/objectives.hpp"

namespace qtrack::testing {

inline ReturnsPanel make_panel(const Eigen::MatrixXd& returns,
                               const Eigen::VectorXd& index_returns) {
    ReturnsPanel panel;
    panel.returns = returns;
    panel.index_returns = index_returns;
    panel.has_index = true;
    for (Eigen::Index i = 0; i < returns.cols(); ++i)
        panel.asset_ids.push_back("A" + std::to_string(i));
    for (Eigen::Index t = 0; t < returns.rows(); ++t)
        panel.dates.push_back("2021-06-" + std::string(t + 1 < 10 ? "0" : "") +
                              std::to_string(t + 1));
    return panel;
}

inline Eigen::MatrixXd random_returns(std::mt19937_64& rng, Eigen::Index t_periods,
                                      Eigen::Index n_assets, double vol = 0.01) {
    std::normal_distribution<double> gauss(0.0005, vol);
    Eigen::MatrixXd r(t_periods, n_assets);
    for (Eigen::Index t = 0; t < t_periods; ++t)
        for (Eigen::Index i = 0; i < n_assets; ++i) r(t, i) = gauss(rng);
    return r;
}

/// Panel whose index is an exact weighted mix of the first assets, so a
/// perfectly tracking feasible portfolio exists by construction.
inline ReturnsPanel synthetic_index_panel(std::mt19937_64& rng, Eigen::Index t_periods,
                                          Eigen::Index n_assets,
                                          const Eigen::VectorXd& true_weights,
                                          double vol = 0.01) {
    const Eigen::MatrixXd r = random_returns(rng, t_periods, n_assets, vol);
    return make_panel(r, r * true_weights);
}

/// Real-arithmetic evaluation of the tracking objective at one assignment:
/// the dual route that never touches the QUBO expansion.
inline double tracking_energy_reference(const std::vector<std::uint8_t>& assignment,
                                        const EncodingScheme& scheme,
                                        const ReturnsPanel& panel,
                                        const ObjectiveConfig& config,
                                        const CovarianceSet* covset = nullptr) {
    const DecodedPortfolio p = decode(assignment, scheme);
    const VariableRegistry reg = registry_for(scheme);
    const double lambda = config.mode == ObjectiveMode::enhanced ? config.lambda : 0.0;
    const double track_w =
        config.mode == ObjectiveMode::enhanced ? 1.0 - lambda : config.tracking_weight;

    double energy = 0.0;
    for (Eigen::Index t = 0; t < panel.n_periods(); ++t) {
        const double port = p.weights.dot(panel.returns.row(t).transpose());
        const double dev = port - panel.index_returns(t);
        energy += track_w * dev * dev;
        if (lambda != 0.0)
            energy += lambda * (-port + config.gamma *
                                            p.weights.dot(covset->aligned(t) * p.weights));
    }
    const double budget_gap = p.weights.sum() - 1.0;
    energy += config.budget_weight * budget_gap * budget_gap;
    const double card_gap = static_cast<double>(p.selected.sum()) - scheme.cardinality;
    energy += config.cardinality_weight * card_gap * card_gap;
    for (int i = 0; i < scheme.n_assets; ++i)
        for (int d = 0; d < scheme.depth(); ++d)
            if (assignment[static_cast<std::size_t>(reg.holding_index(i, d))] &&
                !assignment[static_cast<std::size_t>(reg.indicator_index(i))])
                energy += config.indicator_weight;
    return energy;
}

/// Markowitz objective evaluated in portfolio space.
inline double markowitz_energy_reference(const std::vector<std::uint8_t>& assignment,
                                         const EncodingScheme& scheme,
                                         const ReturnsPanel& panel,
                                         const ObjectiveConfig& config) {
    const DecodedPortfolio p = decode(assignment, scheme);
    const Eigen::VectorXd mean = panel.returns.colwise().mean().transpose();
    double energy = -p.weights.dot(mean);
    if (config.gamma != 0.0 && panel.n_periods() >= 2) {
        const CovarianceSet cov = covariances(panel, static_cast<int>(panel.n_periods()));
        energy += config.gamma * p.weights.dot(cov.full * p.weights);
    }
    const double budget_gap = p.weights.sum() - 1.0;
    energy += config.budget_weight * budget_gap * budget_gap;
    return energy;
}

inline std::vector<std::uint8_t> random_assignment(std::mt19937_64& rng, int n_vars) {
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<std::uint8_t> a(static_cast<std::size_t>(n_vars));
    for (auto& v : a) v = static_cast<std::uint8_t>(bit(rng));
    return a;
}

}  // namespace qtrack::testing
