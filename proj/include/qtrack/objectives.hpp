#pragma once

#include "qtrack/encoding.hpp"
#include "qtrack/market_data.hpp"
#include "qtrack/qubo.hpp"

namespace qtrack {

enum class ObjectiveMode { markowitz, tracking, enhanced };

struct ObjectiveConfig {
    ObjectiveMode mode = ObjectiveMode::tracking;
    double gamma = 1.0;             // risk aversion
    double lambda = 0.0;            // risk ratio, enhanced mode only, in [0,1]
    double tracking_weight = 1.0;   // A_tr
    double budget_weight = 1.0;     // A_b
    double cardinality_weight = 1.0;  // A_c
    double indicator_weight = 1.0;  // A_z
    // When set, constraint weights are rescaled against the largest absolute
    // coefficient of the compiled objective part (budget additionally by K^2
    // for its 1/K^2 violation quantum), balanced so constraints bind without
    // freezing the annealer out of unit-transfer moves.
    bool auto_scale_penalties = false;
};

/// Markowitz mean-variance model:
///   -w^T r + gamma w^T Sigma w + A_b (1.w - 1)^2
/// with r the mean per-period return and Sigma the full-sample covariance.
QuboModel build_markowitz(const ReturnsPanel& panel, const EncodingScheme& scheme,
                          const ObjectiveConfig& config);

/// Cardinality-constrained index tracking:
///   A_tr sum_t (w^T r_t - ri_t)^2 + A_b (1.w - 1)^2 + A_c (1.z - C)^2
///   + A_z sum_{i,d} x_{i,d} (1 - z_i)
QuboModel build_tracking(const ReturnsPanel& panel, const EncodingScheme& scheme,
                         const ObjectiveConfig& config);

/// Lambda-blended enhanced tracking:
///   sum_t [ (1-lambda)(w^T r_t - ri_t)^2
///           + lambda(-w^T r_t + gamma w^T Sigma_t w) ] + constraint terms.
/// At lambda = 0 the output is bit-identical to build_tracking with A_tr = 1.
QuboModel build_enhanced(const ReturnsPanel& panel, const EncodingScheme& scheme,
                         const CovarianceSet& covset, const ObjectiveConfig& config);

}  // namespace qtrack
