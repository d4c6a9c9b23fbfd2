#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qtrack/errors.hpp"

namespace qtrack {

/// Bounded integer encoding of asset holdings.
///
/// Each asset gets D holding bits with coefficients 1, 2, ..., 2^(D-2) and a
/// final residual of K_max - (2^(D-1) - 1), so every unit count in
/// [0, K_max] is a subset sum.  K_max is the per-asset holding cap in units:
/// the smaller of the max-holding cap and K - C + 1.
struct EncodingScheme {
    int resolution = 0;               // K, units of investment
    int cardinality = 0;              // C, required number of invested assets
    double max_holding_fraction = 1.0;
    int k_max = 0;                    // per-asset cap in units
    std::vector<int> coefficients;    // length D, sums to k_max
    int n_assets = 0;                 // N

    int depth() const { return static_cast<int>(coefficients.size()); }
};

/// Flat variable layout: asset i's holding bits occupy [i*D, (i+1)*D), the
/// N indicator bits follow at N*D + i.  Total M = N*(D+1).
struct VariableRegistry {
    int n_assets = 0;
    int depth = 0;

    int num_vars() const { return n_assets * (depth + 1); }
    int holding_index(int asset, int bit) const { return asset * depth + bit; }
    int indicator_index(int asset) const { return n_assets * depth + asset; }
};

inline VariableRegistry registry_for(const EncodingScheme& scheme) {
    return VariableRegistry{scheme.n_assets, scheme.depth()};
}

struct DecodedPortfolio {
    Eigen::VectorXd weights;   // length N, units / K
    Eigen::VectorXi selected;  // length N, indicator bits
    std::vector<int> units;    // length N, integer unit counts
};

struct FeasibilityVerdict {
    bool feasible = false;
    std::vector<std::string> violations;
};

/// Build the encoding for resolution K, cardinality C and a max-holding cap.
/// The cap in units is the integer part of max_holding_fraction * K, clamped
/// to K - C + 1.  Throws InfeasibleSchemeError when K < C or the cap falls
/// below floor(K/C).
EncodingScheme build_scheme(int resolution, int cardinality, double max_holding_fraction,
                            int n_assets);

/// Decode a length-M binary assignment into weights and indicators.
DecodedPortfolio decode(const std::vector<std::uint8_t>& assignment,
                        const EncodingScheme& scheme);

/// Constraint check on a decoded portfolio: exact unit budget, exact
/// cardinality, indicator/holding agreement (phantom indicators are a
/// violation) and per-asset bounds [1/K, K_max/K].
FeasibilityVerdict feasible(const DecodedPortfolio& portfolio, const EncodingScheme& scheme,
                            double tolerance = 1e-9);

}  // namespace qtrack
