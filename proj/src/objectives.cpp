#include "qtrack/objectives.hpp"

#include <cmath>

namespace qtrack {
namespace {

void check_shapes(const ReturnsPanel& panel, const EncodingScheme& scheme) {
    if (panel.n_assets() != scheme.n_assets)
        throw ShapeError("objective: panel has " + std::to_string(panel.n_assets()) +
                         " assets, scheme expects " + std::to_string(scheme.n_assets));
}

// Adds weight * w^T Q w with w_i = sum_d c_d x_{i,d} / K.  Q must be
// symmetric; same-bit diagonal contributions fold into linear terms.
void add_portfolio_quadratic(QuboModel& model, const EncodingScheme& scheme,
                             const Eigen::MatrixXd& q, double weight) {
    if (weight == 0.0) return;
    const VariableRegistry reg = registry_for(scheme);
    const double inv_k2 = 1.0 / (static_cast<double>(scheme.resolution) *
                                 static_cast<double>(scheme.resolution));
    const int depth = scheme.depth();
    const int n_bits = scheme.n_assets * depth;
    for (int p = 0; p < n_bits; ++p) {
        const int i = p / depth, d = p % depth;
        const double cp = scheme.coefficients[static_cast<std::size_t>(d)];
        model.add_linear(reg.holding_index(i, d), weight * q(i, i) * cp * cp * inv_k2);
        for (int r = p + 1; r < n_bits; ++r) {
            const int j = r / depth, e = r % depth;
            const double cr = scheme.coefficients[static_cast<std::size_t>(e)];
            model.add_quadratic(reg.holding_index(i, d), reg.holding_index(j, e),
                                2.0 * weight * q(i, j) * cp * cr * inv_k2);
        }
    }
}

// Adds weight * v^T w over the holding bits.
void add_portfolio_linear(QuboModel& model, const EncodingScheme& scheme,
                          const Eigen::VectorXd& v, double weight) {
    if (weight == 0.0) return;
    const VariableRegistry reg = registry_for(scheme);
    const double inv_k = 1.0 / static_cast<double>(scheme.resolution);
    for (int i = 0; i < scheme.n_assets; ++i)
        for (int d = 0; d < scheme.depth(); ++d)
            model.add_linear(reg.holding_index(i, d),
                             weight * v(i) * scheme.coefficients[static_cast<std::size_t>(d)] *
                                 inv_k);
}

// Auto-scaling balance factors.  The budget term's smallest violation is one
// unit, (1/K)^2 in weight space, so it gets an extra K^2 to cost the same
// order as the largest objective coefficient; it is then deliberately kept
// low (1/8) so single-flip barriers between budget-respecting states stay
// crossable during annealing.  Cardinality and indicator terms carry no such
// barrier role and are set high (8x) to pin the selection count.
constexpr double kBudgetBalance = 0.125;
constexpr double kSelectionBalance = 8.0;

// Budget, cardinality and indicator-coupling penalties, each scaled by
// `scale` on top of its configured weight.
void add_constraints(QuboModel& model, const EncodingScheme& scheme,
                     const ObjectiveConfig& config, double scale, bool with_indicators) {
    const VariableRegistry reg = registry_for(scheme);
    const double inv_k = 1.0 / static_cast<double>(scheme.resolution);
    const double k2 = static_cast<double>(scheme.resolution) *
                      static_cast<double>(scheme.resolution);
    const double budget_scale =
        config.auto_scale_penalties ? scale * k2 * kBudgetBalance : scale;
    const double selection_scale =
        config.auto_scale_penalties ? scale * kSelectionBalance : scale;

    std::vector<int> holding_bits;
    std::vector<double> holding_coeffs;
    for (int i = 0; i < scheme.n_assets; ++i)
        for (int d = 0; d < scheme.depth(); ++d) {
            holding_bits.push_back(reg.holding_index(i, d));
            holding_coeffs.push_back(scheme.coefficients[static_cast<std::size_t>(d)] * inv_k);
        }
    model.add_squared_linear(holding_bits, holding_coeffs, 1.0,
                             config.budget_weight * budget_scale);

    if (!with_indicators) return;

    std::vector<int> indicator_bits;
    std::vector<double> ones(static_cast<std::size_t>(scheme.n_assets), 1.0);
    for (int i = 0; i < scheme.n_assets; ++i) indicator_bits.push_back(reg.indicator_index(i));
    model.add_squared_linear(indicator_bits, ones, static_cast<double>(scheme.cardinality),
                             config.cardinality_weight * selection_scale);

    // One-sided coupling x_{i,d}(1 - z_i): holdings without an indicator are
    // penalized; phantom indicators are rejected at decode instead.
    const double az = config.indicator_weight * selection_scale;
    if (az != 0.0)
        for (int i = 0; i < scheme.n_assets; ++i)
            for (int d = 0; d < scheme.depth(); ++d) {
                model.add_linear(reg.holding_index(i, d), az);
                model.add_quadratic(reg.holding_index(i, d), reg.indicator_index(i), -az);
            }
}

double penalty_scale(const QuboModel& objective_part, const ObjectiveConfig& config) {
    if (!config.auto_scale_penalties) return 1.0;
    const double m = objective_part.max_abs_coefficient();
    return m > 0.0 ? 2.0 * m : 1.0;
}

// Shared tracking/enhanced compiler.  `covset` is null in pure tracking
// mode; `tracking_factor` is A_tr for tracking and (1 - lambda) for
// enhanced builds.
QuboModel build_tracking_like(const ReturnsPanel& panel, const EncodingScheme& scheme,
                              const CovarianceSet* covset, const ObjectiveConfig& config,
                              double tracking_factor, double lambda) {
    check_shapes(panel, scheme);
    const VariableRegistry reg = registry_for(scheme);
    QuboModel model(reg.num_vars());

    const Eigen::Index t_periods = panel.n_periods();
    const Eigen::Index n = panel.n_assets();

    // Aggregate the per-period sums once:
    //   sum_t (w.r_t - ri_t)^2 = w^T G w - 2 b^T w + sum_t ri_t^2
    Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd lin = Eigen::VectorXd::Zero(n);
    double offset = 0.0;
    for (Eigen::Index t = 0; t < t_periods; ++t) {
        const Eigen::VectorXd r = panel.returns.row(t).transpose();
        quad.noalias() += tracking_factor * (r * r.transpose());
        lin.noalias() += (-2.0 * tracking_factor * panel.index_returns(t)) * r;
        offset += tracking_factor * panel.index_returns(t) * panel.index_returns(t);
        if (lambda != 0.0) {
            lin.noalias() += -lambda * r;
            quad.noalias() += (lambda * config.gamma) * covset->aligned(t);
        }
    }
    model.offset += offset;
    add_portfolio_linear(model, scheme, lin, 1.0);
    add_portfolio_quadratic(model, scheme, quad, 1.0);

    const double scale = penalty_scale(model, config);
    add_constraints(model, scheme, config, scale, /*with_indicators=*/true);
    return model;
}

}  // namespace

QuboModel build_markowitz(const ReturnsPanel& panel, const EncodingScheme& scheme,
                          const ObjectiveConfig& config) {
    check_shapes(panel, scheme);
    if (panel.n_periods() < 1)
        throw InsufficientDataError("build_markowitz: need at least one return period");
    const VariableRegistry reg = registry_for(scheme);
    QuboModel model(reg.num_vars());

    const Eigen::VectorXd mean = panel.returns.colwise().mean().transpose();
    add_portfolio_linear(model, scheme, mean, -1.0);
    if (config.gamma != 0.0 && panel.n_periods() >= 2) {
        const CovarianceSet covset =
            covariances(panel, static_cast<int>(panel.n_periods()));
        add_portfolio_quadratic(model, scheme, covset.full, config.gamma);
    }

    const double scale = penalty_scale(model, config);
    add_constraints(model, scheme, config, scale, /*with_indicators=*/false);
    return model;
}

QuboModel build_tracking(const ReturnsPanel& panel, const EncodingScheme& scheme,
                         const ObjectiveConfig& config) {
    return build_tracking_like(panel, scheme, nullptr, config, config.tracking_weight, 0.0);
}

QuboModel build_enhanced(const ReturnsPanel& panel, const EncodingScheme& scheme,
                         const CovarianceSet& covset, const ObjectiveConfig& config) {
    if (config.lambda < 0.0 || config.lambda > 1.0)
        throw ValidationError("build_enhanced: lambda must be in [0, 1]");
    if (config.lambda != 0.0 && covset.rolling.empty())
        throw InsufficientDataError("build_enhanced: rolling covariances required");
    return build_tracking_like(panel, scheme, &covset, config, 1.0 - config.lambda,
                               config.lambda);
}

}  // namespace qtrack
